#include "ocl/policy/exploration.hpp"

#include <cmath>

#include "ocl/errors.hpp"

namespace ocl::policy {

void ExplorationParams::validate() const {
    if (alpha_q < 0.0 || alpha_c < 0.0) {
        throw ConfigError("ExplorationParams: alpha_q and alpha_c must be nonnegative");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ConfigError("ExplorationParams: delta must lie in (0, 1)");
    }
}

void RegretBoundParams::validate() const {
    if (S <= 0.0 || L <= 0.0 || P <= 0.0 || m <= 0.0) {
        throw ConfigError("RegretBoundParams: S, L, P, m must be positive");
    }
    if (v1 <= 0.0 || v2 <= 0.0 || eps1 < 0.0 || eps2 < 0.0) {
        throw ConfigError("RegretBoundParams: rates must be positive, slacks nonnegative");
    }
    if (v1 + eps1 >= 1.0 || v2 + eps2 >= 1.0) {
        throw ConfigError("RegretBoundParams: v1+eps1 and v2+eps2 must be < 1");
    }
}

double laplacian_trace_term(const model::Regularizer& reg, double t) {
    return t * static_cast<double>(reg.K()) * reg.trace_F_inv();
}

namespace {
// (v)(1 - v^t) / (1 - v), the partial geometric sum of the contraction.
double geometric_term(double v, double t) {
    if (v <= 0.0) return 0.0;
    return v * (1.0 - std::pow(v, t)) / (1.0 - v);
}
} // namespace

double width_bound_canonical(double t, const model::Dims& dims, double eta1,
                             const RegretBoundParams& bounds, double delta) {
    bounds.validate();
    const double Kp = static_cast<double>(dims.K * dims.p);
    const double S = bounds.S, L = bounds.L, P = bounds.P;
    const double v = bounds.v1 + bounds.eps1;
    const double log_arg = (eta1 * Kp + t * S * S * P * P) / (eta1 * Kp * delta);
    return std::sqrt(Kp * std::log(log_arg)) +
           (2.0 * S * P * L / std::sqrt(eta1)) * geometric_term(v, t) + std::sqrt(eta1) * L;
}

double width_bound_membership(double t, const model::Dims& dims, double eta2,
                              const RegretBoundParams& bounds, double delta,
                              double trace_term, double membership_norm) {
    bounds.validate();
    const double NK = static_cast<double>(dims.N * dims.K);
    const double S = bounds.S, L = bounds.L, P = bounds.P;
    const double v = bounds.v2 + bounds.eps2;
    const double log_arg = (eta2 * NK + S * S * L * L * trace_term) / (eta2 * NK * delta);
    return std::sqrt(NK * std::log(log_arg)) +
           (2.0 * S * P * L / std::sqrt(eta2)) * geometric_term(v, t) + eta2 * membership_norm;
}

double regret_upper_bound(double T, const model::Dims& dims, double eta1, double eta2,
                          const RegretBoundParams& bounds, double trace_term,
                          std::optional<double> alpha_q, std::optional<double> alpha_c,
                          double delta, double membership_norm) {
    bounds.validate();
    const double NK = static_cast<double>(dims.N * dims.K);
    const double Kp = static_cast<double>(dims.K * dims.p);
    const double S = bounds.S, L = bounds.L, P = bounds.P;

    const double aq = alpha_q ? *alpha_q : width_bound_canonical(T, dims, eta1, bounds, delta);
    const double ac = alpha_c
                          ? *alpha_c
                          : width_bound_membership(T, dims, eta2, bounds, delta, trace_term,
                                                   membership_norm);

    const double term_c =
        2.0 * ac * std::sqrt(2.0 * T * NK * std::log1p(S * S * L * L * trace_term / (eta2 * NK)));
    const double term_q =
        2.0 * aq * std::sqrt(2.0 * T * Kp * std::log1p(T * S * S * P * P / (eta1 * Kp)));

    const double v = std::max(bounds.v1 + bounds.eps1, bounds.v2 + bounds.eps2);
    const double v2 = v * v;
    const double term_tail = 2.0 * bounds.m * v2 * (1.0 - std::pow(v2, T)) / (1.0 - v2);

    return term_c + term_q + term_tail;
}

} // namespace ocl::policy
