#include "ocl/model/als.hpp"

#include <cmath>
#include <limits>

#include "ocl/errors.hpp"
#include "ocl/model/kmeans.hpp"
#include "ocl/model/transforms.hpp"

namespace ocl::model {

namespace {

Eigen::VectorXd spd_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                          const char* ridge_name) {
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
        throw IllConditionedError(std::string("SPD solve failed: matrix is not positive "
                                              "definite; increase ") +
                                  ridge_name);
    }
    const auto& L = llt.matrixLLT();
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
        const double v = L(i, i);
        dmin = std::min(dmin, v);
        dmax = std::max(dmax, v);
    }
    const double cond = (dmax / dmin) * (dmax / dmin);
    if (!std::isfinite(cond) || cond > 1e12) {
        throw IllConditionedError(std::string("SPD system numerically singular (condition "
                                              "estimate > 1e12); increase ") +
                                  ridge_name);
    }
    return llt.solve(b);
}

} // namespace

double objective(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& C,
                 std::span<const HistoryEntry> history, const Regularizer& reg) {
    if (Q.cols() != C.rows()) {
        throw DimensionError("objective: Q and C are not conformable");
    }
    double obj = reg.eta1() * Q.squaredNorm() + reg.eta2() * C.squaredNorm();
    if (reg.lambda() > 0.0) {
        obj += reg.lambda() * ((C * reg.laplacian()).cwiseProduct(C)).sum();
    }
    const Eigen::MatrixXd B = Q * C; // p x N
    for (const HistoryEntry& e : history) {
        if (e.unit < 0 || e.unit >= B.cols() || e.x.size() != B.rows()) {
            throw DimensionError("objective: history entry does not match model dimensions");
        }
        const double r = e.x.dot(B.col(e.unit)) - e.y;
        obj += r * r;
    }
    return obj;
}

namespace {

// Per-column gauge rescale Q.col(k) *= s_k, C.row(k) /= s_k with s_k chosen
// to minimize eta1 s^2 ||q_k||^2 + (eta2 ||c^k||^2 + lambda c^k E c^k') / s^2.
void rebalance_gauge(SufficientStats& stats, const Regularizer& reg) {
    Eigen::MatrixXd Q = stats.Q_hat();
    Eigen::MatrixXd C = stats.C_hat(reg);
    const Eigen::MatrixXd& E = reg.laplacian();
    bool changed = false;
    for (Eigen::Index k = 0; k < Q.cols(); ++k) {
        const double q_pen = reg.eta1() * Q.col(k).squaredNorm();
        const Eigen::RowVectorXd ck = C.row(k);
        double c_pen = reg.eta2() * ck.squaredNorm();
        if (reg.lambda() > 0.0) c_pen += reg.lambda() * (ck * E).dot(ck);
        if (q_pen < 1e-300 || c_pen < 1e-300) continue;
        const double s = std::pow(c_pen / q_pen, 0.25);
        if (std::abs(s - 1.0) < 1e-12) continue;
        Q.col(k) *= s;
        C.row(k) /= s;
        changed = true;
    }
    if (changed) {
        stats.set_q_hat(canonical_to_vec(Q));
        stats.set_c_tilde_hat(membership_to_tilde(reg, C));
    }
}

} // namespace

Eigen::VectorXd solve_canonical(const SufficientStats& stats) {
    return spd_solve(stats.A(), stats.b(), "eta1");
}

Eigen::VectorXd solve_membership_tilde(const SufficientStats& stats) {
    return spd_solve(stats.D(), stats.d(), "eta2");
}

Eigen::MatrixXd solve_membership(const SufficientStats& stats, const Regularizer& reg) {
    return tilde_to_membership(reg, solve_membership_tilde(stats));
}

AlsResult als_fit(SufficientStats& stats, const Regularizer& reg, const CycleObservation& obs,
                  const AlsOptions& opt) {
    const Dims& dims = stats.dims();
    if (obs.X.cols() != dims.N || obs.y.size() != dims.N ||
        static_cast<Eigen::Index>(obs.mask.size()) != dims.N) {
        throw DimensionError("als_fit: observation does not match N");
    }
    if (opt.max_inner_iters < 1) {
        throw ConfigError("als_fit: max_inner_iters must be >= 1");
    }

    AlsResult res;
    bool any = false;
    for (std::uint8_t m : obs.mask) any = any || (m != 0);
    if (!any) return res; // nothing revealed; snapshot is already a fixed point

    // History records each observation once, independent of inner iterations.
    for (Eigen::Index i = 0; i < dims.N; ++i) {
        if (obs.mask[i]) {
            stats.record({obs.cycle, i, obs.X.col(i), obs.y(i)});
        }
    }

    const bool track = opt.tol > 0.0 || opt.track_objective;
    double prev = std::numeric_limits<double>::quiet_NaN();
    if (track) {
        prev = objective(stats.Q_hat(), stats.C_hat(reg), stats.history(), reg);
        res.objective_trace.push_back(prev);
    }

    for (int iter = 0; iter < opt.max_inner_iters; ++iter) {
        if (opt.mode == AlsMode::full_refit) {
            // exact block-coordinate descent: each side is rebuilt against
            // the other block's latest value before its solve
            if (opt.rebalance && opt.update_canonical && opt.update_membership) {
                rebalance_gauge(stats, reg);
            }
            if (opt.update_canonical) {
                stats.rebuild_canonical(reg);
                stats.set_q_hat(solve_canonical(stats));
            }
            if (opt.update_membership) {
                stats.rebuild_membership(reg);
                stats.set_c_tilde_hat(solve_membership_tilde(stats));
            }
        } else {
            for (Eigen::Index i = 0; i < dims.N; ++i) {
                if (obs.mask[i]) {
                    stats.accumulate(reg, obs.cycle, i, obs.X.col(i), obs.y(i),
                                     /*record_history=*/false);
                }
            }
            if (opt.update_canonical) {
                stats.set_q_hat(solve_canonical(stats));
            }
            if (opt.update_membership) {
                stats.set_c_tilde_hat(solve_membership_tilde(stats));
            }
        }
        res.inner_iters = iter + 1;

        if (track) {
            const double cur = objective(stats.Q_hat(), stats.C_hat(reg), stats.history(), reg);
            res.objective_trace.push_back(cur);
            if (opt.tol > 0.0 && prev - cur < opt.tol * std::max(1.0, std::abs(prev))) break;
            prev = cur;
        }
    }
    return res;
}

InitMembership init_membership(const Eigen::MatrixXd& W, Eigen::Index K, std::uint64_t seed,
                               Dims dims, std::span<const HistoryEntry> warmup) {
    if (K > W.rows()) {
        throw ConfigError("init_membership: K = " + std::to_string(K) + " exceeds N = " +
                          std::to_string(W.rows()));
    }
    InitMembership out;
    SimilarityGraph graph(W);
    out.warnings = graph.warnings();
    const Eigen::MatrixXd& S = graph.similarity();
    const Eigen::Index N = S.rows();

    KMeansResult km = kmeans_rows(S, static_cast<int>(K), seed);
    if (km.degenerate) {
        out.warnings.emplace_back(
            "init_membership: degenerate similarity (all rows equal); "
            "falling back to one-hot cyclic assignment");
    }
    out.labels = km.labels;

    // Column scale from the mean within-cluster similarity. A similarity is
    // an inner product, i.e. a squared-norm quantity, so the membership
    // scale is its square root; 1 for singletons or nonpositive means so
    // every column stays nonzero.
    std::vector<double> scale(static_cast<size_t>(K), 1.0);
    if (!km.degenerate) {
        for (Eigen::Index g = 0; g < K; ++g) {
            double sum = 0.0;
            long pairs = 0;
            for (Eigen::Index i = 0; i < N; ++i) {
                if (out.labels[static_cast<size_t>(i)] != g) continue;
                for (Eigen::Index j = i + 1; j < N; ++j) {
                    if (out.labels[static_cast<size_t>(j)] != g) continue;
                    sum += S(i, j);
                    pairs += 1;
                }
            }
            if (pairs > 0 && sum / static_cast<double>(pairs) > 1e-12) {
                scale[static_cast<size_t>(g)] = std::sqrt(sum / static_cast<double>(pairs));
            }
        }
    }

    out.C0 = Eigen::MatrixXd::Zero(K, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        const int g = out.labels[static_cast<size_t>(i)];
        out.C0(g, i) = scale[static_cast<size_t>(g)];
    }

    out.Q0 = Eigen::MatrixXd::Zero(dims.p, K);
    if (!warmup.empty()) {
        Regularizer reg(1.0, 1.0, 0.0, graph, K);
        SufficientStats stats(reg, Dims{N, K, dims.p});
        stats.set_c_tilde_hat(membership_to_tilde(reg, out.C0));
        for (const HistoryEntry& e : warmup) {
            stats.accumulate(reg, e.cycle, e.unit, e.x, e.y, /*record_history=*/false);
        }
        out.Q0 = vec_to_canonical(solve_canonical(stats), dims.p, K);
    }
    return out;
}

} // namespace ocl::model
