#include "ocl/model/kmeans.hpp"

#include <limits>
#include <numeric>

#include "ocl/errors.hpp"
#include "ocl/rng.hpp"

namespace ocl::model {

KMeansResult kmeans_rows(const Eigen::MatrixXd& points, int K, std::uint64_t seed,
                         int max_iterations) {
    const Eigen::Index n = points.rows();
    const Eigen::Index dim = points.cols();
    if (K < 1 || K > n) {
        throw ConfigError("kmeans: K must be in [1, n], got K=" + std::to_string(K) +
                          ", n=" + std::to_string(n));
    }

    KMeansResult res;
    res.labels.assign(static_cast<size_t>(n), 0);

    // Degenerate input: every row equal.
    bool all_equal = true;
    for (Eigen::Index i = 1; i < n && all_equal; ++i) {
        if ((points.row(i) - points.row(0)).cwiseAbs().maxCoeff() > 1e-12) all_equal = false;
    }
    if (all_equal) {
        res.degenerate = true;
        res.centroids = Eigen::MatrixXd::Zero(K, dim);
        for (Eigen::Index i = 0; i < n; ++i) {
            res.labels[static_cast<size_t>(i)] = static_cast<int>(i % K);
        }
        for (int k = 0; k < K; ++k) res.centroids.row(k) = points.row(0);
        return res;
    }

    // Maximin init: the first centroid is a seeded random row, each further
    // one the row farthest from its nearest chosen centroid (lowest index on
    // ties).
    auto rng = make_rng(seed);
    std::vector<Eigen::Index> chosen;
    {
        std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
        chosen.push_back(pick(rng));
    }
    Eigen::VectorXd nearest = Eigen::VectorXd::Constant(n, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        nearest(i) = (points.row(i) - points.row(chosen[0])).squaredNorm();
    }
    while (static_cast<int>(chosen.size()) < K) {
        Eigen::Index far_i = 0;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (nearest(i) > far_d) {
                far_d = nearest(i);
                far_i = i;
            }
        }
        chosen.push_back(far_i);
        for (Eigen::Index i = 0; i < n; ++i) {
            nearest(i) = std::min(nearest(i),
                                  (points.row(i) - points.row(far_i)).squaredNorm());
        }
    }
    Eigen::MatrixXd centroids(K, dim);
    for (int k = 0; k < K; ++k) centroids.row(k) = points.row(chosen[static_cast<size_t>(k)]);

    std::vector<int> labels(static_cast<size_t>(n), -1);
    for (int iter = 0; iter < max_iterations; ++iter) {
        res.iterations = iter + 1;
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int k = 0; k < K; ++k) {
                const double d = (points.row(i) - centroids.row(k)).squaredNorm();
                if (d < best_d) { // strict: equal distance keeps the lower index
                    best_d = d;
                    best = k;
                }
            }
            if (labels[static_cast<size_t>(i)] != best) {
                labels[static_cast<size_t>(i)] = best;
                changed = true;
            }
        }

        // Re-seed emptied clusters with the farthest point (lowest index on ties).
        std::vector<int> counts(static_cast<size_t>(K), 0);
        for (int l : labels) counts[static_cast<size_t>(l)]++;
        for (int k = 0; k < K; ++k) {
            if (counts[static_cast<size_t>(k)] > 0) continue;
            Eigen::Index far_i = 0;
            double far_d = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const int l = labels[static_cast<size_t>(i)];
                if (counts[static_cast<size_t>(l)] <= 1) continue;
                const double d = (points.row(i) - centroids.row(l)).squaredNorm();
                if (d > far_d) {
                    far_d = d;
                    far_i = i;
                }
            }
            counts[static_cast<size_t>(labels[static_cast<size_t>(far_i)])]--;
            labels[static_cast<size_t>(far_i)] = k;
            counts[static_cast<size_t>(k)] = 1;
            changed = true;
        }

        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(K, dim);
        for (Eigen::Index i = 0; i < n; ++i) {
            next.row(labels[static_cast<size_t>(i)]) += points.row(i);
        }
        for (int k = 0; k < K; ++k) next.row(k) /= counts[static_cast<size_t>(k)];
        centroids = next;

        if (!changed) break;
    }

    res.labels = labels;
    res.centroids = centroids;
    return res;
}

} // namespace ocl::model
