#pragma once

#include <Eigen/Dense>

#include "ocl/model/regularizer.hpp"

namespace ocl::model {

// Column-major vec / unvec.
Eigen::VectorXd vec(const Eigen::MatrixXd& M);
Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols);

// q = vec(Q) stacks the K canonical coefficient vectors; Q is p x K.
inline Eigen::VectorXd canonical_to_vec(const Eigen::MatrixXd& Q) { return vec(Q); }
inline Eigen::MatrixXd vec_to_canonical(const Eigen::VectorXd& q, Eigen::Index p,
                                        Eigen::Index K) {
    return unvec(q, p, K);
}

// c_tilde = (F^{1/2} ⊗ I_K) vec(C) and its inverse map.
Eigen::VectorXd membership_to_tilde(const Regularizer& reg, const Eigen::MatrixXd& C);
Eigen::MatrixXd tilde_to_membership(const Regularizer& reg, const Eigen::VectorXd& c_tilde);

// Canonical-side design vector for one monitored unit: the Kp column
// c_i ⊗ x, i.e. X_{t,i} c_tilde. Satisfies (c_i ⊗ x)' q = x' Q c_i.
Eigen::VectorXd step1_design(const Eigen::VectorXd& c_i, const Eigen::VectorXd& x);

// Membership-side design vector for one monitored unit: the NK column
// Q_tilde' x_tilde = (F^{-1/2} e_unit) ⊗ (Q' x). Satisfies psi' c_tilde =
// x' Q c_unit.
Eigen::VectorXd step2_design(const Regularizer& reg, const Eigen::MatrixXd& Q,
                             Eigen::Index unit, const Eigen::VectorXd& x);

// Materialized per-cycle transform matrices. Hot paths use the design-vector
// functions above; these dense forms exist for diagnostics and for verifying
// the transform identities directly.
struct TransformedFeatures {
    Eigen::MatrixXd X_big;   // Kp x NK; zero column blocks for unmonitored units
    Eigen::MatrixXd C_diag;  // NK x N block-diagonal of membership columns
    Eigen::MatrixXd X_tilde; // Np x N block-diagonal of feature columns
    Eigen::MatrixXd Q_tilde; // Np x NK, blockdiag(Q,...,Q) * (F^{-1/2} ⊗ I_K)

    // X_{t,unit}: the single-unit slice of X_big.
    static Eigen::MatrixXd unit_feature_matrix(const Regularizer& reg, const Eigen::VectorXd& x,
                                               Eigen::Index unit);
};

// X: p x N feature columns; monitored[i] selects the nonzero blocks.
TransformedFeatures build_transforms(const Regularizer& reg, const Eigen::MatrixXd& Q,
                                     const Eigen::MatrixXd& C, const Eigen::MatrixXd& X,
                                     const std::vector<std::uint8_t>& monitored);

} // namespace ocl::model
