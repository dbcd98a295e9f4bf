#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ocl::policy {

// Mask with exactly M ones at the M largest scores; ties break toward the
// lowest index. Throws ConfigError when M is outside [1, N] and
// DimensionError on non-finite scores.
std::vector<std::uint8_t> select_top_m(const Eigen::VectorXd& scores, int M);

std::vector<Eigen::Index> mask_to_indices(const std::vector<std::uint8_t>& mask);

} // namespace ocl::policy
