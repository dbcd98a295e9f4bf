#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ocl::model {

// degree(W) - W for a pairwise similarity matrix. Repairs violated
// preconditions instead of failing: asymmetry is symmetrized, the diagonal is
// zeroed and negative weights are clamped to zero (a Laplacian is only
// guaranteed PSD for nonnegative weights). Each repair appends one warning.
// Throws DimensionError on a non-square input.
Eigen::MatrixXd build_laplacian(const Eigen::MatrixXd& W,
                                std::vector<std::string>* warnings = nullptr);

// Pairwise similarity W together with its graph Laplacian E. W is sanitized
// on construction via the build_laplacian repair rules, so the stored pair
// always satisfies: W symmetric, zero diagonal, nonnegative; E = deg(W) - W
// symmetric PSD with zero row sums.
class SimilarityGraph {
public:
    explicit SimilarityGraph(Eigen::MatrixXd W);

    Eigen::Index size() const { return W_.rows(); }
    const Eigen::MatrixXd& similarity() const { return W_; }
    const Eigen::MatrixXd& laplacian() const { return E_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    // Graph with W = 0 (E = 0); used by the no-similarity policy variant.
    static SimilarityGraph empty(Eigen::Index n);

private:
    Eigen::MatrixXd W_;
    Eigen::MatrixXd E_;
    std::vector<std::string> warnings_;
};

} // namespace ocl::model
