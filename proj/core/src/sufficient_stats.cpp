#include "ocl/model/sufficient_stats.hpp"

#include "ocl/errors.hpp"
#include "ocl/model/transforms.hpp"

namespace ocl::model {

SufficientStats::SufficientStats(const Regularizer& reg, Dims dims)
    : dims_(dims), eta1_(reg.eta1()), eta2_(reg.eta2()) {
    if (dims.N != reg.N() || dims.K != reg.K()) {
        throw DimensionError("SufficientStats: dims disagree with regularizer");
    }
    if (dims.N < 1 || dims.K < 1 || dims.p < 1) {
        throw DimensionError("SufficientStats: N, K, p must all be >= 1");
    }
    const Eigen::Index kp = dims.K * dims.p;
    const Eigen::Index nk = dims.N * dims.K;
    A_ = eta1_ * Eigen::MatrixXd::Identity(kp, kp);
    b_ = Eigen::VectorXd::Zero(kp);
    D_ = eta2_ * Eigen::MatrixXd::Identity(nk, nk);
    d_ = Eigen::VectorXd::Zero(nk);
    q_hat_ = Eigen::VectorXd::Zero(kp);
    c_tilde_hat_ = Eigen::VectorXd::Zero(nk);
}

Eigen::MatrixXd SufficientStats::Q_hat() const {
    return vec_to_canonical(q_hat_, dims_.p, dims_.K);
}

Eigen::MatrixXd SufficientStats::C_hat(const Regularizer& reg) const {
    return tilde_to_membership(reg, c_tilde_hat_);
}

void SufficientStats::set_snapshot(const Eigen::VectorXd& q_hat,
                                   const Eigen::VectorXd& c_tilde_hat) {
    set_q_hat(q_hat);
    set_c_tilde_hat(c_tilde_hat);
}

void SufficientStats::set_q_hat(const Eigen::VectorXd& q_hat) {
    if (q_hat.size() != q_hat_.size()) {
        throw DimensionError("set_q_hat: length mismatch");
    }
    q_hat_ = q_hat;
}

void SufficientStats::set_c_tilde_hat(const Eigen::VectorXd& c_tilde_hat) {
    if (c_tilde_hat.size() != c_tilde_hat_.size()) {
        throw DimensionError("set_c_tilde_hat: length mismatch");
    }
    c_tilde_hat_ = c_tilde_hat;
}

void SufficientStats::accumulate(const Regularizer& reg, int cycle, Eigen::Index unit,
                                 const Eigen::VectorXd& x, double y, bool record_history) {
    if (unit < 0 || unit >= dims_.N) {
        throw DimensionError("accumulate: unit index out of range");
    }
    if (x.size() != dims_.p) {
        throw DimensionError("accumulate: feature length " + std::to_string(x.size()) +
                             " != p = " + std::to_string(dims_.p));
    }
    if (!x.allFinite() || !std::isfinite(y)) {
        throw DimensionError("accumulate: non-finite observation");
    }

    const Eigen::MatrixXd C = C_hat(reg);
    const Eigen::VectorXd phi = step1_design(C.col(unit), x);
    A_.noalias() += phi * phi.transpose();
    b_.noalias() += phi * y;

    const Eigen::VectorXd psi = step2_design(reg, Q_hat(), unit, x);
    D_.noalias() += psi * psi.transpose();
    d_.noalias() += psi * y;

    if (record_history) {
        history_.push_back({cycle, unit, x, y});
    }
}

void SufficientStats::accumulate_cycle(const Regularizer& reg, const CycleObservation& obs,
                                       bool record_history) {
    if (obs.X.cols() != dims_.N || obs.y.size() != dims_.N ||
        static_cast<Eigen::Index>(obs.mask.size()) != dims_.N) {
        throw DimensionError("accumulate_cycle: observation does not match N");
    }
    for (Eigen::Index i = 0; i < dims_.N; ++i) {
        if (obs.mask[i]) {
            accumulate(reg, obs.cycle, i, obs.X.col(i), obs.y(i), record_history);
        }
    }
}

void SufficientStats::rebuild_canonical(const Regularizer& reg) {
    const Eigen::Index kp = dims_.K * dims_.p;
    A_ = eta1_ * Eigen::MatrixXd::Identity(kp, kp);
    b_.setZero();
    const Eigen::MatrixXd C = C_hat(reg);
    for (const HistoryEntry& e : history_) {
        const Eigen::VectorXd phi = step1_design(C.col(e.unit), e.x);
        A_.noalias() += phi * phi.transpose();
        b_.noalias() += phi * e.y;
    }
}

void SufficientStats::rebuild_membership(const Regularizer& reg) {
    const Eigen::Index nk = dims_.N * dims_.K;
    D_ = eta2_ * Eigen::MatrixXd::Identity(nk, nk);
    d_.setZero();
    const Eigen::MatrixXd Q = Q_hat();
    for (const HistoryEntry& e : history_) {
        const Eigen::VectorXd psi = step2_design(reg, Q, e.unit, e.x);
        D_.noalias() += psi * psi.transpose();
        d_.noalias() += psi * e.y;
    }
}

} // namespace ocl::model
