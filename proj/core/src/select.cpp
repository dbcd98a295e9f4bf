#include "ocl/policy/select.hpp"

#include <algorithm>
#include <numeric>

#include "ocl/errors.hpp"

namespace ocl::policy {

std::vector<std::uint8_t> select_top_m(const Eigen::VectorXd& scores, int M) {
    const Eigen::Index n = scores.size();
    if (M < 1 || M > n) {
        throw ConfigError("select_top_m: M = " + std::to_string(M) + " outside [1, " +
                          std::to_string(n) + "]");
    }
    if (!scores.allFinite()) {
        throw DimensionError("select_top_m: scores contain non-finite values");
    }
    std::vector<Eigen::Index> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::partial_sort(idx.begin(), idx.begin() + M, idx.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                          if (scores(a) != scores(b)) return scores(a) > scores(b);
                          return a < b;
                      });
    std::vector<std::uint8_t> mask(static_cast<size_t>(n), 0);
    for (int j = 0; j < M; ++j) mask[static_cast<size_t>(idx[static_cast<size_t>(j)])] = 1;
    return mask;
}

std::vector<Eigen::Index> mask_to_indices(const std::vector<std::uint8_t>& mask) {
    std::vector<Eigen::Index> out;
    for (size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) out.push_back(static_cast<Eigen::Index>(i));
    }
    return out;
}

} // namespace ocl::policy
