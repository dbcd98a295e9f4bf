#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ocl/model/population_model.hpp"
#include "ocl/model/regularizer.hpp"

namespace ocl::model {

// One revealed observation, kept for refits and objective evaluation.
struct HistoryEntry {
    int cycle = 0;
    Eigen::Index unit = 0;
    Eigen::VectorXd x;
    double y = 0.0;
};

// One full monitoring cycle: features for every unit, outcomes for the
// selected ones (zero elsewhere) and the selection mask with exactly M ones.
struct CycleObservation {
    int cycle = 0;
    Eigen::MatrixXd X;               // p x N
    Eigen::VectorXd y;               // N, zero for unmonitored units
    std::vector<std::uint8_t> mask;  // N, 1 = monitored
};

// Online normal-equation statistics for the two alternating ridge problems:
// A q = b on the canonical side (Kp x Kp) and D c_tilde = d on the
// membership side (NK x NK), plus the standing parameter snapshot used when
// new observations are folded in.
class SufficientStats {
public:
    SufficientStats(const Regularizer& reg, Dims dims);

    const Dims& dims() const { return dims_; }
    const Eigen::MatrixXd& A() const { return A_; }
    const Eigen::VectorXd& b() const { return b_; }
    const Eigen::MatrixXd& D() const { return D_; }
    const Eigen::VectorXd& d() const { return d_; }
    const Eigen::VectorXd& q_hat() const { return q_hat_; }
    const Eigen::VectorXd& c_tilde_hat() const { return c_tilde_hat_; }
    const std::vector<HistoryEntry>& history() const { return history_; }

    // Current snapshot in matrix form.
    Eigen::MatrixXd Q_hat() const;
    Eigen::MatrixXd C_hat(const Regularizer& reg) const;

    void set_snapshot(const Eigen::VectorXd& q_hat, const Eigen::VectorXd& c_tilde_hat);
    void set_q_hat(const Eigen::VectorXd& q_hat);
    void set_c_tilde_hat(const Eigen::VectorXd& c_tilde_hat);

    // Rank-one updates for one monitored unit, using the standing snapshot:
    //   A += phi phi',  b += phi y   with phi = X_{t,i} c_tilde = c_i ⊗ x
    //   D += psi psi',  d += psi y   with psi = Q_tilde' x_tilde
    // Appends to history unless record_history is false.
    void accumulate(const Regularizer& reg, int cycle, Eigen::Index unit,
                    const Eigen::VectorXd& x, double y, bool record_history = true);

    // All monitored units of one cycle, in unit order.
    void accumulate_cycle(const Regularizer& reg, const CycleObservation& obs,
                          bool record_history = true);

    // Append to the history without touching A, b, D, d.
    void record(HistoryEntry entry) { history_.push_back(std::move(entry)); }

    // Full-refit passes: discard one side's accumulated statistics and
    // rebuild it from the whole history with the current snapshot of the
    // other block.
    void rebuild_canonical(const Regularizer& reg);
    void rebuild_membership(const Regularizer& reg);

private:
    Dims dims_;
    double eta1_;
    double eta2_;
    Eigen::MatrixXd A_; // Kp x Kp
    Eigen::VectorXd b_; // Kp
    Eigen::MatrixXd D_; // NK x NK
    Eigen::VectorXd d_; // NK
    Eigen::VectorXd q_hat_;       // Kp
    Eigen::VectorXd c_tilde_hat_; // NK
    std::vector<HistoryEntry> history_;
};

} // namespace ocl::model
