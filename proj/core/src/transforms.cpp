#include "ocl/model/transforms.hpp"

#include "ocl/errors.hpp"

namespace ocl::model {

Eigen::VectorXd vec(const Eigen::MatrixXd& M) {
    return Eigen::Map<const Eigen::VectorXd>(M.data(), M.size());
}

Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) {
        throw DimensionError("unvec: vector length " + std::to_string(v.size()) +
                             " != " + std::to_string(rows) + "*" + std::to_string(cols));
    }
    return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

Eigen::VectorXd membership_to_tilde(const Regularizer& reg, const Eigen::MatrixXd& C) {
    if (C.rows() != reg.K() || C.cols() != reg.N()) {
        throw DimensionError("membership_to_tilde: C must be K x N");
    }
    return reg.apply_kron_half(vec(C));
}

Eigen::MatrixXd tilde_to_membership(const Regularizer& reg, const Eigen::VectorXd& c_tilde) {
    return unvec(reg.apply_kron_half_inv(c_tilde), reg.K(), reg.N());
}

Eigen::VectorXd step1_design(const Eigen::VectorXd& c_i, const Eigen::VectorXd& x) {
    const Eigen::Index K = c_i.size();
    const Eigen::Index p = x.size();
    Eigen::VectorXd phi(K * p);
    for (Eigen::Index k = 0; k < K; ++k) {
        phi.segment(k * p, p) = c_i(k) * x;
    }
    return phi;
}

Eigen::VectorXd step2_design(const Regularizer& reg, const Eigen::MatrixXd& Q,
                             Eigen::Index unit, const Eigen::VectorXd& x) {
    const Eigen::Index N = reg.N();
    const Eigen::Index K = reg.K();
    if (unit < 0 || unit >= N) {
        throw DimensionError("step2_design: unit index out of range");
    }
    if (Q.rows() != x.size() || Q.cols() != K) {
        throw DimensionError("step2_design: Q must be p x K with p matching x");
    }
    const Eigen::VectorXd g = Q.transpose() * x; // K
    Eigen::VectorXd psi(N * K);
    const auto f_col = reg.F_half_inv().col(unit);
    for (Eigen::Index j = 0; j < N; ++j) {
        psi.segment(j * K, K) = f_col(j) * g;
    }
    return psi;
}

Eigen::MatrixXd TransformedFeatures::unit_feature_matrix(const Regularizer& reg,
                                                         const Eigen::VectorXd& x,
                                                         Eigen::Index unit) {
    const Eigen::Index N = reg.N();
    const Eigen::Index K = reg.K();
    const Eigen::Index p = x.size();
    // Raw lift: (e_unit' ⊗ I_K ⊗ x), then fold in F^{-1/2} ⊗ I_K so that
    // right-multiplying by c_tilde recovers the plain design column c_i ⊗ x.
    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(K * p, N * K);
    for (Eigen::Index k = 0; k < K; ++k) {
        raw.block(k * p, unit * K + k, p, 1) = x;
    }
    return raw * reg.F_kron_half_inv();
}

TransformedFeatures build_transforms(const Regularizer& reg, const Eigen::MatrixXd& Q,
                                     const Eigen::MatrixXd& C, const Eigen::MatrixXd& X,
                                     const std::vector<std::uint8_t>& monitored) {
    const Eigen::Index N = reg.N();
    const Eigen::Index K = reg.K();
    const Eigen::Index p = X.rows();
    if (X.cols() != N || C.rows() != K || C.cols() != N || Q.rows() != p || Q.cols() != K) {
        throw DimensionError("build_transforms: inconsistent dimensions");
    }
    if (static_cast<Eigen::Index>(monitored.size()) != N) {
        throw DimensionError("build_transforms: mask length != N");
    }

    TransformedFeatures tf;
    tf.X_big = Eigen::MatrixXd::Zero(K * p, N * K);
    tf.C_diag = Eigen::MatrixXd::Zero(N * K, N);
    tf.X_tilde = Eigen::MatrixXd::Zero(N * p, N);
    Eigen::MatrixXd Q_block = Eigen::MatrixXd::Zero(N * p, N * K);
    for (Eigen::Index i = 0; i < N; ++i) {
        tf.C_diag.block(i * K, i, K, 1) = C.col(i);
        Q_block.block(i * p, i * K, p, K) = Q;
        if (monitored[i]) {
            tf.X_tilde.block(i * p, i, p, 1) = X.col(i);
            for (Eigen::Index k = 0; k < K; ++k) {
                tf.X_big.block(k * p, i * K + k, p, 1) = X.col(i);
            }
        }
    }
    const Eigen::MatrixXd Fki = reg.F_kron_half_inv();
    tf.X_big = tf.X_big * Fki;
    tf.Q_tilde = Q_block * Fki;
    return tf;
}

} // namespace ocl::model
