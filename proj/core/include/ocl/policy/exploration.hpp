#pragma once

#include <optional>

#include "ocl/model/population_model.hpp"
#include "ocl/model/regularizer.hpp"

namespace ocl::policy {

// Width multipliers for the two exploration terms of the selection score.
// In `fixed` mode alpha_q / alpha_c are used as given (the tuned-constant
// regime); in `theoretical` mode they are recomputed every cycle from the
// theoretical estimation-error bounds.
struct ExplorationParams {
    enum class Mode { fixed, theoretical };
    double alpha_q = 1.0;
    double alpha_c = 1.0;
    double delta = 0.1;
    Mode mode = Mode::fixed;

    void validate() const;
};

// Norm and convergence constants entering the width and regret-bound
// formulas: S bounds the feature matrix spectral norm, L the canonical
// parameter norm, P the membership matrix norm; v1+eps1 and v2+eps2 are the
// per-iteration contraction factors of the alternating solver, both < 1.
struct RegretBoundParams {
    double S = 1.0;
    double L = 1.0;
    double P = 1.0;
    double v1 = 0.5;
    double v2 = 0.5;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double m = 1.0; // per-cycle selection size in the bound's trailing term

    void validate() const;
};

// Laplacian trace term after t cycles: t * K * trace(F^{-1}); the summand is
// constant because F is fixed.
double laplacian_trace_term(const model::Regularizer& reg, double t);

// Canonical-side width bound after t cycles.
double width_bound_canonical(double t, const model::Dims& dims, double eta1,
                             const RegretBoundParams& bounds, double delta);

// Membership-side width bound. `trace_term` is the accumulated Laplacian
// trace term at t; `membership_norm` is sqrt(vec(C)' F_kron vec(C)) =
// ||c_tilde|| for the current membership estimate.
double width_bound_membership(double t, const model::Dims& dims, double eta2,
                              const RegretBoundParams& bounds, double delta,
                              double trace_term, double membership_norm);

// Cumulative-regret upper bound at horizon T. When alpha_q / alpha_c are not
// supplied they are computed from the width formulas at T (membership_norm
// only matters in that case).
double regret_upper_bound(double T, const model::Dims& dims, double eta1, double eta2,
                          const RegretBoundParams& bounds, double trace_term,
                          std::optional<double> alpha_q = std::nullopt,
                          std::optional<double> alpha_c = std::nullopt,
                          double delta = 0.1, double membership_norm = 0.0);

} // namespace ocl::policy
