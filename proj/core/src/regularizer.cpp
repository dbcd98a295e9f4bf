#include "ocl/model/regularizer.hpp"

#include "ocl/errors.hpp"

namespace ocl::model {

namespace {
constexpr double kEigFloor = 1e-12;
}

Regularizer::Regularizer(double eta1, double eta2, double lambda, const SimilarityGraph& graph,
                         Eigen::Index K)
    : eta1_(eta1), eta2_(eta2), lambda_(lambda), K_(K), E_(graph.laplacian()) {
    if (eta1 < 0.0 || eta2 < 0.0 || lambda < 0.0) {
        throw ConfigError("Regularizer: eta1, eta2 and lambda must be nonnegative");
    }
    if (K < 1) {
        throw ConfigError("Regularizer: K must be >= 1");
    }
    const Eigen::Index n = E_.rows();
    if (lambda > 0.0 && eta2 <= 0.0) {
        throw ConfigError("Regularizer: lambda > 0 requires eta2 > 0");
    }

    F_ = Eigen::MatrixXd::Identity(n, n);
    if (lambda > 0.0) {
        F_ += (lambda / eta2) * E_;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(F_);
    if (eig.info() != Eigen::Success) {
        throw IllConditionedError("Regularizer: eigendecomposition of F failed");
    }
    Eigen::VectorXd evals = eig.eigenvalues().cwiseMax(kEigFloor);
    const Eigen::MatrixXd& V = eig.eigenvectors();
    F_half_ = V * evals.cwiseSqrt().asDiagonal() * V.transpose();
    F_half_inv_ = V * evals.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
    trace_F_inv_ = evals.cwiseInverse().sum();
}

Eigen::MatrixXd Regularizer::kron_with_identity(const Eigen::MatrixXd& M) const {
    const Eigen::Index n = M.rows();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * K_, n * K_);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (M(i, j) != 0.0) {
                out.block(i * K_, j * K_, K_, K_) =
                    M(i, j) * Eigen::MatrixXd::Identity(K_, K_);
            }
        }
    }
    return out;
}

Eigen::VectorXd Regularizer::apply_kron(const Eigen::MatrixXd& M, const Eigen::VectorXd& v) const {
    const Eigen::Index n = M.rows();
    if (v.size() != n * K_) {
        throw DimensionError("Regularizer: vector length " + std::to_string(v.size()) +
                             " does not match NK = " + std::to_string(n * K_));
    }
    // (M ⊗ I_K) vec(V) = vec(V M) for the K x N matrix V with vec(V) = v
    // (M symmetric).
    Eigen::Map<const Eigen::MatrixXd> V(v.data(), K_, n);
    Eigen::MatrixXd R = V * M;
    return Eigen::Map<Eigen::VectorXd>(R.data(), n * K_);
}

} // namespace ocl::model
