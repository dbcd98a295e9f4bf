#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ocl::harness {

// Shortfall of the selected set against the best-possible set:
// (sum of the M largest outcomes) - (sum of the selected outcomes).
// Throws when the mask does not have exactly M ones.
double cycle_regret(const Eigen::VectorXd& outcomes, const std::vector<std::uint8_t>& mask,
                    int M);

// Frobenius distance between coefficient estimates and the truth on the
// p x N product space; invariant to the K x K gauge freedom of a
// factorized estimate.
double estimation_error(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth);

} // namespace ocl::harness
