#include "ocl/policy/policies.hpp"

#include <cmath>

#include "ocl/errors.hpp"
#include "ocl/model/transforms.hpp"

namespace ocl::policy {

namespace {
double sqrt_clamped(double radicand) { return std::sqrt(std::max(0.0, radicand)); }
} // namespace

double clucb_score(const model::SufficientStats& stats, const model::Regularizer& reg,
                   const Eigen::VectorXd& x, Eigen::Index unit,
                   const ExplorationParams& params) {
    params.validate();
    if (unit < 0 || unit >= stats.dims().N) {
        throw DimensionError("clucb_score: unit index out of range");
    }
    const Eigen::MatrixXd Q = stats.Q_hat();
    const Eigen::MatrixXd C = stats.C_hat(reg);

    const double pred = x.dot(Q * C.col(unit));

    const Eigen::VectorXd psi = model::step2_design(reg, Q, unit, x);
    Eigen::LLT<Eigen::MatrixXd> D_llt(stats.D());
    if (D_llt.info() != Eigen::Success) {
        throw IllConditionedError("clucb_score: D is not positive definite; increase eta2");
    }
    const double w_c = sqrt_clamped(psi.dot(D_llt.solve(psi)));

    const Eigen::VectorXd phi = model::step1_design(C.col(unit), x);
    Eigen::LLT<Eigen::MatrixXd> A_llt(stats.A());
    if (A_llt.info() != Eigen::Success) {
        throw IllConditionedError("clucb_score: A is not positive definite; increase eta1");
    }
    const double w_q = sqrt_clamped(phi.dot(A_llt.solve(phi)));

    return pred + params.alpha_c * w_c + params.alpha_q * w_q;
}

// ---------------------------------------------------------------------------
// ClUcbPolicy

ClUcbPolicy::ClUcbPolicy(std::string name, const model::SimilarityGraph& graph,
                         model::Dims dims, double eta1, double eta2, double lambda,
                         ClUcbOptions options, std::uint64_t seed)
    : name_(std::move(name)),
      dims_(dims),
      reg_(eta1, eta2, lambda, graph, dims.K),
      stats_(reg_, dims),
      opt_(std::move(options)) {
    opt_.exploration.validate();
    if (opt_.exploration.mode == ExplorationParams::Mode::theoretical) {
        if (!opt_.bounds) {
            throw ConfigError("ClUcbPolicy: theoretical width mode requires RegretBoundParams");
        }
        opt_.bounds->validate();
    }
    model::InitMembership init =
        model::init_membership(graph.similarity(), dims.K, seed, dims);
    stats_.set_c_tilde_hat(model::membership_to_tilde(reg_, init.C0));
    refresh();
}

void ClUcbPolicy::refresh() {
    A_llt_.compute(stats_.A());
    D_llt_.compute(stats_.D());
    if (A_llt_.info() != Eigen::Success) {
        throw IllConditionedError("ClUcbPolicy: A lost positive definiteness; increase eta1");
    }
    if (D_llt_.info() != Eigen::Success) {
        throw IllConditionedError("ClUcbPolicy: D lost positive definiteness; increase eta2");
    }
    Q_cache_ = stats_.Q_hat();
    C_cache_ = stats_.C_hat(reg_);
}

std::pair<double, double> ClUcbPolicy::current_alphas() const {
    if (opt_.exploration.mode == ExplorationParams::Mode::fixed) {
        return {opt_.exploration.alpha_q, opt_.exploration.alpha_c};
    }
    const double t = static_cast<double>(cycle_);
    const double trace = laplacian_trace_term(reg_, t);
    const double aq =
        width_bound_canonical(t, dims_, reg_.eta1(), *opt_.bounds, opt_.exploration.delta);
    const double ac =
        width_bound_membership(t, dims_, reg_.eta2(), *opt_.bounds,
                               opt_.exploration.delta, trace, stats_.c_tilde_hat().norm());
    return {aq, ac};
}

void ClUcbPolicy::width_terms(const Eigen::MatrixXd& X, Eigen::VectorXd& w_q,
                              Eigen::VectorXd& w_c) const {
    const Eigen::Index N = dims_.N;
    // Canonical-side widths: batch-solve A Z = Phi.
    Eigen::MatrixXd Phi(dims_.K * dims_.p, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        Phi.col(i) = model::step1_design(C_cache_.col(i), X.col(i));
    }
    const Eigen::MatrixXd A_sol = A_llt_.solve(Phi);
    // Membership-side widths: batch-solve D Z = Psi.
    Eigen::MatrixXd Psi(dims_.N * dims_.K, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        Psi.col(i) = model::step2_design(reg_, Q_cache_, i, X.col(i));
    }
    const Eigen::MatrixXd D_sol = D_llt_.solve(Psi);

    w_q.resize(N);
    w_c.resize(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        w_q(i) = sqrt_clamped(Phi.col(i).dot(A_sol.col(i)));
        w_c(i) = sqrt_clamped(Psi.col(i).dot(D_sol.col(i)));
    }
}

Eigen::VectorXd ClUcbPolicy::predictions(const Eigen::MatrixXd& X) const {
    if (X.rows() != dims_.p || X.cols() != dims_.N) {
        throw DimensionError("predictions: X must be p x N");
    }
    const Eigen::MatrixXd B = Q_cache_ * C_cache_;
    return (X.cwiseProduct(B)).colwise().sum().transpose();
}

Eigen::VectorXd ClUcbPolicy::uncertainty_band(const Eigen::MatrixXd& X) const {
    if (X.rows() != dims_.p || X.cols() != dims_.N) {
        throw DimensionError("uncertainty_band: X must be p x N");
    }
    const auto [alpha_q, alpha_c] = current_alphas();
    Eigen::VectorXd w_q, w_c;
    width_terms(X, w_q, w_c);
    return alpha_q * w_q + alpha_c * w_c;
}

Eigen::VectorXd ClUcbPolicy::score_all(const Eigen::MatrixXd& X) {
    if (X.rows() != dims_.p || X.cols() != dims_.N) {
        throw DimensionError("score_all: X must be p x N");
    }
    const auto [alpha_q, alpha_c] = current_alphas();
    Eigen::VectorXd scores = predictions(X);
    Eigen::VectorXd w_q, w_c;
    width_terms(X, w_q, w_c);
    scores += alpha_q * w_q + alpha_c * w_c;
    return scores;
}

void ClUcbPolicy::update(const model::CycleObservation& obs) {
    model::als_fit(stats_, reg_, obs, opt_.als);
    cycle_ += 1;
    refresh();
}

// ---------------------------------------------------------------------------
// LinUcbPolicy

LinUcbPolicy::LinUcbPolicy(std::string name, model::Dims dims, double eta, double alpha)
    : name_(std::move(name)), dims_(dims), alpha_(alpha) {
    if (eta <= 0.0) throw ConfigError("LinUcbPolicy: eta must be positive");
    if (alpha < 0.0) throw ConfigError("LinUcbPolicy: alpha must be nonnegative");
    A_.assign(static_cast<size_t>(dims.N),
              eta * Eigen::MatrixXd::Identity(dims.p, dims.p));
    b_.assign(static_cast<size_t>(dims.N), Eigen::VectorXd::Zero(dims.p));
}

Eigen::VectorXd LinUcbPolicy::score_all(const Eigen::MatrixXd& X) {
    if (X.rows() != dims_.p || X.cols() != dims_.N) {
        throw DimensionError("score_all: X must be p x N");
    }
    Eigen::VectorXd scores(dims_.N);
    for (Eigen::Index i = 0; i < dims_.N; ++i) {
        const auto& A = A_[static_cast<size_t>(i)];
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        const Eigen::VectorXd theta = llt.solve(b_[static_cast<size_t>(i)]);
        const Eigen::VectorXd x = X.col(i);
        scores(i) = x.dot(theta) + alpha_ * sqrt_clamped(x.dot(llt.solve(x)));
    }
    return scores;
}

void LinUcbPolicy::update(const model::CycleObservation& obs) {
    if (obs.X.cols() != dims_.N || static_cast<Eigen::Index>(obs.mask.size()) != dims_.N) {
        throw DimensionError("update: observation does not match N");
    }
    for (Eigen::Index i = 0; i < dims_.N; ++i) {
        if (!obs.mask[i]) continue;
        const Eigen::VectorXd x = obs.X.col(i);
        A_[static_cast<size_t>(i)].noalias() += x * x.transpose();
        b_[static_cast<size_t>(i)].noalias() += x * obs.y(i);
    }
}

Eigen::MatrixXd LinUcbPolicy::coefficients() const {
    Eigen::MatrixXd B(dims_.p, dims_.N);
    for (Eigen::Index i = 0; i < dims_.N; ++i) {
        B.col(i) = A_[static_cast<size_t>(i)].llt().solve(b_[static_cast<size_t>(i)]);
    }
    return B;
}

// ---------------------------------------------------------------------------
// GobLinPolicy

GobLinPolicy::GobLinPolicy(std::string name, const model::SimilarityGraph& graph,
                           model::Dims dims, double eta, double lambda, double alpha)
    : name_(std::move(name)), dims_(dims), alpha_(alpha) {
    if (eta <= 0.0) throw ConfigError("GobLinPolicy: eta must be positive");
    if (lambda < 0.0) throw ConfigError("GobLinPolicy: lambda must be nonnegative");
    if (graph.size() != dims.N) {
        throw DimensionError("GobLinPolicy: graph size does not match N");
    }
    const Eigen::Index Np = dims.N * dims.p;
    Eigen::MatrixXd F_gob =
        Eigen::MatrixXd::Identity(dims.N, dims.N) + lambda * graph.laplacian();
    A_ = Eigen::MatrixXd::Zero(Np, Np);
    for (Eigen::Index i = 0; i < dims.N; ++i) {
        for (Eigen::Index j = 0; j < dims.N; ++j) {
            if (F_gob(i, j) != 0.0) {
                A_.block(i * dims.p, j * dims.p, dims.p, dims.p) =
                    eta * F_gob(i, j) * Eigen::MatrixXd::Identity(dims.p, dims.p);
            }
        }
    }
    b_ = Eigen::VectorXd::Zero(Np);
    refresh();
}

void GobLinPolicy::refresh() {
    A_llt_.compute(A_);
    if (A_llt_.info() != Eigen::Success) {
        throw IllConditionedError("GobLinPolicy: stacked prior is not positive definite");
    }
    theta_ = A_llt_.solve(b_);
}

Eigen::VectorXd GobLinPolicy::score_all(const Eigen::MatrixXd& X) {
    if (X.rows() != dims_.p || X.cols() != dims_.N) {
        throw DimensionError("score_all: X must be p x N");
    }
    const Eigen::Index Np = dims_.N * dims_.p;
    Eigen::MatrixXd Xt = Eigen::MatrixXd::Zero(Np, dims_.N);
    for (Eigen::Index i = 0; i < dims_.N; ++i) {
        Xt.block(i * dims_.p, i, dims_.p, 1) = X.col(i);
    }
    const Eigen::MatrixXd sol = A_llt_.solve(Xt);
    Eigen::VectorXd scores(dims_.N);
    for (Eigen::Index i = 0; i < dims_.N; ++i) {
        const double pred = X.col(i).dot(theta_.segment(i * dims_.p, dims_.p));
        scores(i) = pred + alpha_ * sqrt_clamped(Xt.col(i).dot(sol.col(i)));
    }
    return scores;
}

void GobLinPolicy::update(const model::CycleObservation& obs) {
    if (obs.X.cols() != dims_.N || static_cast<Eigen::Index>(obs.mask.size()) != dims_.N) {
        throw DimensionError("update: observation does not match N");
    }
    for (Eigen::Index i = 0; i < dims_.N; ++i) {
        if (!obs.mask[i]) continue;
        const Eigen::VectorXd x = obs.X.col(i);
        A_.block(i * dims_.p, i * dims_.p, dims_.p, dims_.p).noalias() += x * x.transpose();
        b_.segment(i * dims_.p, dims_.p).noalias() += x * obs.y(i);
    }
    refresh();
}

Eigen::MatrixXd GobLinPolicy::coefficients() const {
    Eigen::MatrixXd B(dims_.p, dims_.N);
    for (Eigen::Index i = 0; i < dims_.N; ++i) {
        B.col(i) = theta_.segment(i * dims_.p, dims_.p);
    }
    return B;
}

} // namespace ocl::policy
