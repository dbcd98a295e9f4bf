#include "ocl/model/similarity_graph.hpp"

#include "ocl/errors.hpp"

namespace ocl::model {

Eigen::MatrixXd build_laplacian(const Eigen::MatrixXd& W, std::vector<std::string>* warnings) {
    if (W.rows() != W.cols()) {
        throw DimensionError("build_laplacian: similarity matrix must be square, got " +
                             std::to_string(W.rows()) + "x" + std::to_string(W.cols()));
    }
    if (!W.allFinite()) {
        throw DimensionError("build_laplacian: similarity matrix has non-finite entries");
    }
    const auto warn = [&](const char* msg) {
        if (warnings) warnings->emplace_back(msg);
    };

    Eigen::MatrixXd S = W;
    if (!S.isApprox(S.transpose(), 1e-12)) {
        S = 0.5 * (S + S.transpose().eval());
        warn("similarity matrix was not symmetric; symmetrized");
    } else {
        S = 0.5 * (S + S.transpose().eval());
    }
    if (S.diagonal().cwiseAbs().maxCoeff() > 0.0) {
        S.diagonal().setZero();
        warn("similarity matrix had a nonzero diagonal; zeroed");
    }
    if (S.minCoeff() < 0.0) {
        S = S.cwiseMax(0.0);
        warn("similarity matrix had negative weights; clamped to zero");
    }

    Eigen::MatrixXd E = -S;
    E.diagonal() += S.rowwise().sum();
    return E;
}

SimilarityGraph::SimilarityGraph(Eigen::MatrixXd W) {
    E_ = build_laplacian(W, &warnings_);
    // Store the sanitized similarity, recovered from the Laplacian off-diagonal.
    W_ = -E_;
    W_.diagonal().setZero();
}

SimilarityGraph SimilarityGraph::empty(Eigen::Index n) {
    return SimilarityGraph(Eigen::MatrixXd::Zero(n, n));
}

} // namespace ocl::model
