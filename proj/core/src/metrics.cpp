#include "ocl/harness/metrics.hpp"

#include <algorithm>

#include "ocl/errors.hpp"

namespace ocl::harness {

double cycle_regret(const Eigen::VectorXd& outcomes, const std::vector<std::uint8_t>& mask,
                    int M) {
    const Eigen::Index n = outcomes.size();
    if (static_cast<Eigen::Index>(mask.size()) != n) {
        throw DimensionError("cycle_regret: mask length does not match outcomes");
    }
    int ones = 0;
    double selected = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (mask[static_cast<size_t>(i)]) {
            ++ones;
            selected += outcomes(i);
        }
    }
    if (ones != M) {
        throw ConfigError("cycle_regret: mask has " + std::to_string(ones) + " ones, expected " +
                          std::to_string(M));
    }
    std::vector<double> sorted(outcomes.data(), outcomes.data() + n);
    std::partial_sort(sorted.begin(), sorted.begin() + M, sorted.end(), std::greater<>());
    double best = 0.0;
    for (int j = 0; j < M; ++j) best += sorted[static_cast<size_t>(j)];
    return best - selected;
}

double estimation_error(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth) {
    if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
        throw DimensionError("estimation_error: shape mismatch");
    }
    return (estimate - truth).norm();
}

} // namespace ocl::harness
