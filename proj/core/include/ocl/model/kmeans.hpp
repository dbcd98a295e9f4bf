#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ocl::model {

// Seeded Lloyd's algorithm over the rows of `points`. Maximin
// initialization: the first centroid is a seeded random row, each further
// one the row farthest from its nearest chosen centroid. Ties in the
// assignment step go to the lowest centroid index; an emptied cluster is
// re-seeded with the point farthest from its assigned centroid.
// Deterministic given (points, K, seed).
struct KMeansResult {
    std::vector<int> labels;
    Eigen::MatrixXd centroids; // K x dim
    int iterations = 0;
    bool degenerate = false; // all rows identical; labels fall back to i mod K
};

KMeansResult kmeans_rows(const Eigen::MatrixXd& points, int K, std::uint64_t seed,
                         int max_iterations = 100);

} // namespace ocl::model
