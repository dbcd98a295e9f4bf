#pragma once

#include <Eigen/Dense>

#include "ocl/model/similarity_graph.hpp"

namespace ocl::model {

// Penalty weights for the collaborative objective plus the fixed similarity
// regularization matrix F = I_N + (lambda/eta2) * E and its Kronecker lifts.
//
// With this F, eta2 * ||c_tilde||^2 (where c_tilde = F_kron^{1/2} vec(C))
// expands to exactly eta2 * ||C||_F^2 + lambda * Tr(C E C'), the combined
// membership penalty of the training objective.
//
// F is fixed for the lifetime of a run, so its symmetric square root is
// computed once by eigendecomposition, with eigenvalues clamped at 1e-12
// before rooting.
class Regularizer {
public:
    Regularizer(double eta1, double eta2, double lambda, const SimilarityGraph& graph,
                Eigen::Index K);

    double eta1() const { return eta1_; }
    double eta2() const { return eta2_; }
    double lambda() const { return lambda_; }
    Eigen::Index N() const { return F_.rows(); }
    Eigen::Index K() const { return K_; }

    const Eigen::MatrixXd& laplacian() const { return E_; }
    const Eigen::MatrixXd& F() const { return F_; }
    const Eigen::MatrixXd& F_half() const { return F_half_; }
    const Eigen::MatrixXd& F_half_inv() const { return F_half_inv_; }

    // Materialized NK x NK Kronecker forms (F ⊗ I_K and its roots).
    Eigen::MatrixXd F_kron() const { return kron_with_identity(F_); }
    Eigen::MatrixXd F_kron_half() const { return kron_with_identity(F_half_); }
    Eigen::MatrixXd F_kron_half_inv() const { return kron_with_identity(F_half_inv_); }

    // Apply (F^{±1/2} ⊗ I_K) to an NK vector without materializing it.
    Eigen::VectorXd apply_kron_half(const Eigen::VectorXd& v) const {
        return apply_kron(F_half_, v);
    }
    Eigen::VectorXd apply_kron_half_inv(const Eigen::VectorXd& v) const {
        return apply_kron(F_half_inv_, v);
    }

    // trace(F^{-1}); the per-cycle Laplacian trace term is t * K * trace(F^{-1}).
    double trace_F_inv() const { return trace_F_inv_; }

private:
    Eigen::MatrixXd kron_with_identity(const Eigen::MatrixXd& M) const;
    Eigen::VectorXd apply_kron(const Eigen::MatrixXd& M, const Eigen::VectorXd& v) const;

    double eta1_;
    double eta2_;
    double lambda_;
    Eigen::Index K_;
    Eigen::MatrixXd E_;
    Eigen::MatrixXd F_;
    Eigen::MatrixXd F_half_;
    Eigen::MatrixXd F_half_inv_;
    double trace_F_inv_ = 0.0;
};

} // namespace ocl::model
