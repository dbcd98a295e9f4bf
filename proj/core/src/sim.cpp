#include "ocl/env/sim.hpp"

#include <cmath>
#include <numeric>

#include "ocl/errors.hpp"
#include "ocl/rng.hpp"

namespace ocl::env {

void SimConfig::validate() const {
    if (N < 1 || K_true < 1 || N < K_true) {
        throw ConfigError("SimConfig: need N >= K_true >= 1");
    }
    if (p < 1) throw ConfigError("SimConfig: p must be >= 1");
    if (sigma2 <= 0.0) throw ConfigError("SimConfig: sigma2 must be positive");
    if (noise_sd < 0.0) throw ConfigError("SimConfig: noise_sd must be nonnegative");
    if (T < 1) throw ConfigError("SimConfig: T must be >= 1");
    if (q_magnitude <= 0.0) throw ConfigError("SimConfig: q_magnitude must be positive");
    if (!mixture_priors.empty()) {
        if (static_cast<Eigen::Index>(mixture_priors.size()) != K_true) {
            throw ConfigError("SimConfig: mixture_priors must have K_true entries");
        }
        double sum = 0.0;
        for (double w : mixture_priors) {
            if (w < 0.0) throw ConfigError("SimConfig: mixture priors must be nonnegative");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw ConfigError("SimConfig: mixture priors must sum to 1");
        }
    }
}

GroundTruth simulate_population(const SimConfig& cfg) {
    cfg.validate();
    GroundTruth gt;
    auto rng = make_rng(derive_seed(cfg.seed, stream::truth));
    std::normal_distribution<double> stdnorm(0.0, 1.0);

    // Canonical patterns: iid normal entries, then orthonormalized columns
    // when K <= p (unit-normalized otherwise) and scaled to q_magnitude.
    Eigen::MatrixXd Q(cfg.p, cfg.K_true);
    for (Eigen::Index k = 0; k < cfg.K_true; ++k) {
        for (Eigen::Index j = 0; j < cfg.p; ++j) Q(j, k) = stdnorm(rng);
    }
    if (cfg.K_true <= cfg.p) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(Q);
        Eigen::MatrixXd thinQ =
            qr.householderQ() * Eigen::MatrixXd::Identity(cfg.p, cfg.K_true);
        Eigen::MatrixXd R = qr.matrixQR().topRows(cfg.K_true).triangularView<Eigen::Upper>();
        for (Eigen::Index k = 0; k < cfg.K_true; ++k) {
            if (R(k, k) < 0.0) thinQ.col(k) = -thinQ.col(k);
        }
        Q = thinQ;
    } else {
        gt.warnings.emplace_back("simulate_population: K_true > p, canonical columns "
                                 "unit-normalized instead of orthonormalized");
        for (Eigen::Index k = 0; k < cfg.K_true; ++k) Q.col(k).normalize();
    }
    gt.Q_true = cfg.q_magnitude * Q;

    if (cfg.K_true != 3) {
        gt.warnings.emplace_back("simulate_population: mixture generalized to K_true = " +
                                 std::to_string(cfg.K_true) + " components");
    }

    std::vector<double> priors = cfg.mixture_priors;
    if (priors.empty()) {
        priors.assign(static_cast<size_t>(cfg.K_true), 1.0 / static_cast<double>(cfg.K_true));
    }
    std::vector<double> cum(priors.size());
    std::partial_sum(priors.begin(), priors.end(), cum.begin());
    cum.back() = 1.0;

    gt.C_true.resize(cfg.K_true, cfg.N);
    gt.labels.resize(static_cast<size_t>(cfg.N));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double sigma = std::sqrt(cfg.sigma2);
    for (Eigen::Index i = 0; i < cfg.N; ++i) {
        const double u = unif(rng);
        int comp = 0;
        while (comp + 1 < static_cast<int>(cum.size()) &&
               u > cum[static_cast<size_t>(comp)]) {
            ++comp;
        }
        gt.labels[static_cast<size_t>(i)] = comp;
        for (Eigen::Index k = 0; k < cfg.K_true; ++k) {
            const double sd = (k == comp) ? sigma : 1.0;
            gt.C_true(k, i) = sd * stdnorm(rng);
        }
    }
    gt.beta = gt.Q_true * gt.C_true;
    return gt;
}

Eigen::VectorXd features_at(int t, int T, TimeScale scale, Eigen::Index p) {
    if (t < 0 || t >= T) {
        throw ConfigError("features_at: cycle " + std::to_string(t) + " outside [0, " +
                          std::to_string(T) + ")");
    }
    const double tau = (scale == TimeScale::normalized)
                           ? (T > 1 ? static_cast<double>(t) / static_cast<double>(T - 1) : 0.0)
                           : static_cast<double>(t);
    Eigen::VectorXd x(p);
    double v = 1.0;
    for (Eigen::Index j = 0; j < p; ++j) {
        x(j) = v;
        v *= tau;
    }
    return x;
}

Eigen::MatrixXd similarity_inner(const Eigen::MatrixXd& C, bool normalized) {
    if (!C.allFinite()) {
        throw DimensionError("similarity_inner: membership matrix has non-finite entries");
    }
    const Eigen::Index N = C.cols();
    Eigen::MatrixXd W = C.transpose() * C;
    if (normalized) {
        Eigen::VectorXd norms = C.colwise().norm();
        for (Eigen::Index i = 0; i < N; ++i) {
            for (Eigen::Index j = 0; j < N; ++j) {
                const double den = norms(i) * norms(j);
                W(i, j) = den > 0.0 ? W(i, j) / den : 0.0;
            }
        }
    }
    W.diagonal().setZero();
    return W;
}

Eigen::MatrixXd similarity_heat_kernel(const Eigen::MatrixXd& Z, double bandwidth,
                                       bool standardize) {
    if (bandwidth <= 0.0) {
        throw ConfigError("similarity_heat_kernel: bandwidth must be positive");
    }
    const Eigen::Index N = Z.rows();
    Eigen::MatrixXd S = Z;
    if (standardize && N > 1) {
        for (Eigen::Index c = 0; c < S.cols(); ++c) {
            const double mean = S.col(c).mean();
            S.col(c).array() -= mean;
            const double sd = std::sqrt(S.col(c).squaredNorm() /
                                        static_cast<double>(N - 1));
            if (sd > 1e-12) S.col(c) /= sd;
        }
    }
    Eigen::MatrixXd W(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        W(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < N; ++j) {
            const double d2 = (S.row(i) - S.row(j)).squaredNorm();
            W(i, j) = W(j, i) = std::exp(-d2 / bandwidth);
        }
    }
    return W;
}

SimEnvironment::SimEnvironment(SimConfig cfg, RewardTransform reward)
    : cfg_(std::move(cfg)), reward_(reward) {
    cfg_.validate();
    truth_ = simulate_population(cfg_);
    W_ = similarity_inner(truth_.C_true,
                          cfg_.similarity == SimilarityKind::inner_normalized);
    // Reward space keeps the linear model form because the basis has a
    // leading constant feature.
    beta_reward_ = reward_.sign * truth_.beta;
    beta_reward_.row(0).array() += reward_.offset;
}

Eigen::VectorXd SimEnvironment::features(int t) const {
    return features_at(t, cfg_.T, cfg_.time_scale, cfg_.p);
}

Eigen::VectorXd SimEnvironment::outcomes(int t) const {
    if (t < 0 || t >= cfg_.T) {
        throw ConfigError("outcomes: cycle out of range");
    }
    const Eigen::VectorXd x = features(t);
    Eigen::VectorXd y = truth_.beta.transpose() * x;
    if (cfg_.noise_sd > 0.0) {
        auto rng = make_rng(derive_seed(cfg_.seed, stream::noise, static_cast<unsigned>(t)));
        std::normal_distribution<double> noise(0.0, cfg_.noise_sd);
        for (Eigen::Index i = 0; i < cfg_.N; ++i) y(i) += noise(rng);
    }
    for (Eigen::Index i = 0; i < cfg_.N; ++i) y(i) = reward_(y(i));
    return y;
}

} // namespace ocl::env
