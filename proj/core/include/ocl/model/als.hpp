#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "ocl/model/regularizer.hpp"
#include "ocl/model/sufficient_stats.hpp"

namespace ocl::model {

// Training objective over the revealed history:
//   sum_(t,i) (x' Q c_i - y)^2 + eta1 ||Q||_F^2 + eta2 ||C||_F^2
//   + lambda Tr(C E C')
double objective(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& C,
                 std::span<const HistoryEntry> history, const Regularizer& reg);

// Solve A q = b (SPD) for the canonical coefficients. Throws
// IllConditionedError naming eta1 when the factor's condition estimate
// exceeds 1e12.
Eigen::VectorXd solve_canonical(const SufficientStats& stats);

// Solve D c_tilde = d; the membership matrix is recovered as
// unvec((F^{-1/2} ⊗ I_K) c_tilde). Errors name eta2.
Eigen::VectorXd solve_membership_tilde(const SufficientStats& stats);
Eigen::MatrixXd solve_membership(const SufficientStats& stats, const Regularizer& reg);

enum class AlsMode {
    // Algorithm form used online: statistics persist across cycles; each
    // inner iteration folds the cycle's observations in with the current
    // parameter snapshot.
    incremental,
    // Rebuild A, b, D, d from the full history with the current snapshot
    // before each solve pair. Exact block-coordinate descent on the
    // objective; used by oracle tests.
    full_refit,
};

struct AlsOptions {
    int max_inner_iters = 2;
    // Relative objective-decrease stopping threshold. When > 0 the objective
    // is evaluated over the full history after every inner iteration (linear
    // in history size); 0 disables the check and the iteration cap governs.
    double tol = 0.0;
    AlsMode mode = AlsMode::incremental;
    bool update_canonical = true;
    bool update_membership = true;
    // Record the objective after every inner iteration even when tol == 0.
    bool track_objective = false;
    // Full-refit only: rescale each canonical column and its membership row
    // to the penalty-minimizing gauge before the solves. The factorization
    // is identifiable only up to per-column scale; rebalancing keeps the
    // data term fixed and never increases the objective.
    bool rebalance = true;
};

struct AlsResult {
    int inner_iters = 0;
    std::vector<double> objective_trace; // filled when tol > 0 or track_objective
};

// One monitoring cycle of alternating least squares: repeat {accumulate the
// cycle's observations with the current snapshot, solve the canonical
// system, solve the membership system} until the objective improvement falls
// below tol or max_inner_iters is reached. Updates the snapshot in place.
AlsResult als_fit(SufficientStats& stats, const Regularizer& reg, const CycleObservation& obs,
                  const AlsOptions& opt);

// Membership initialization: seeded k-means over the rows of W; c_i is the
// one-hot vector of unit i's cluster scaled by the square root of the mean
// within-cluster similarity (similarities are inner products, so the root
// restores the membership norm scale). Q0 comes from one canonical solve
// against warmup data when provided, else zero.
struct InitMembership {
    Eigen::MatrixXd C0;      // K x N
    Eigen::MatrixXd Q0;      // p x K
    std::vector<int> labels; // N cluster assignments
    std::vector<std::string> warnings;
};

InitMembership init_membership(const Eigen::MatrixXd& W, Eigen::Index K, std::uint64_t seed,
                               Dims dims, std::span<const HistoryEntry> warmup = {});

} // namespace ocl::model
