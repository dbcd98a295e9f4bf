#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ocl::env {

enum class TimeScale { normalized, raw };

enum class SimilarityKind { inner, inner_normalized };

// Synthetic population setup: N units whose quadratic-degradation
// coefficients come from K_true canonical patterns mixed by memberships
// drawn from a zero-mean Gaussian mixture (component k inflates slot k's
// variance to sigma2).
struct SimConfig {
    Eigen::Index N = 100;
    Eigen::Index K_true = 3;
    Eigen::Index p = 3;
    double sigma2 = 100.0;
    double noise_sd = 1.0;
    int T = 30000;
    std::uint64_t seed = 0;
    TimeScale time_scale = TimeScale::normalized;
    double q_magnitude = 1.0;
    std::vector<double> mixture_priors; // empty = equal
    SimilarityKind similarity = SimilarityKind::inner;

    void validate() const;
};

struct GroundTruth {
    Eigen::MatrixXd Q_true; // p x K_true
    Eigen::MatrixXd C_true; // K_true x N
    Eigen::MatrixXd beta;   // p x N = Q_true * C_true
    std::vector<int> labels;
    std::vector<std::string> warnings;
};

// Deterministic given (cfg, cfg.seed).
GroundTruth simulate_population(const SimConfig& cfg);

// Polynomial time features [1, tau, tau^2, ...] of length p; tau = t/(T-1)
// in normalized mode, tau = t in raw mode. Throws on t outside [0, T).
Eigen::VectorXd features_at(int t, int T, TimeScale scale, Eigen::Index p);

// W_ij = c_i' c_j for i != j, zero diagonal; the normalized variant divides
// by the norms (cosine).
Eigen::MatrixXd similarity_inner(const Eigen::MatrixXd& C, bool normalized = false);

// W_ij = exp(-||z_i - z_j||^2 / bandwidth) on rows of Z, zero diagonal.
// Coordinates are standardized to zero mean / unit variance first unless
// standardize is false. Throws ConfigError on bandwidth <= 0.
Eigen::MatrixXd similarity_heat_kernel(const Eigen::MatrixXd& Z, double bandwidth,
                                       bool standardize = true);

// Monotone reward orientation r(y) = sign * y + offset; sign = -1 flips
// low-is-bad outcome scales into rewards.
struct RewardTransform {
    double sign = 1.0;
    double offset = 0.0;
    double operator()(double y) const { return sign * y + offset; }
};

// What a harness run consumes: per-cycle features, per-cycle realized
// outcomes for every unit (policies only get to see the selected subset) and
// the prior similarity between units.
class Environment {
public:
    virtual ~Environment() = default;
    virtual Eigen::Index units() const = 0;
    virtual Eigen::Index feature_dim() const = 0;
    virtual int horizon() const = 0;
    virtual Eigen::VectorXd features(int t) const = 0;
    virtual Eigen::VectorXd outcomes(int t) const = 0; // length N, reward-oriented
    virtual const Eigen::MatrixXd& similarity() const = 0;
    // Reward-space coefficient matrix (p x N) when the environment knows it.
    virtual const Eigen::MatrixXd* truth_coefficients() const { return nullptr; }

    Eigen::MatrixXd feature_matrix(int t) const {
        return features(t).replicate(1, units());
    }
};

// Simulation-backed environment. The noise stream is drawn unit-major from a
// per-cycle substream, so outcomes(t) is a pure function of (cfg, seed, t)
// and seed-paired policies consume identical draws regardless of what they
// select.
class SimEnvironment final : public Environment {
public:
    SimEnvironment(SimConfig cfg, RewardTransform reward = {});

    Eigen::Index units() const override { return cfg_.N; }
    Eigen::Index feature_dim() const override { return cfg_.p; }
    int horizon() const override { return cfg_.T; }
    Eigen::VectorXd features(int t) const override;
    Eigen::VectorXd outcomes(int t) const override;
    const Eigen::MatrixXd& similarity() const override { return W_; }
    const Eigen::MatrixXd* truth_coefficients() const override { return &beta_reward_; }

    const GroundTruth& truth() const { return truth_; }
    const SimConfig& config() const { return cfg_; }

private:
    SimConfig cfg_;
    RewardTransform reward_;
    GroundTruth truth_;
    Eigen::MatrixXd W_;
    Eigen::MatrixXd beta_reward_; // truth beta mapped through the reward transform
};

} // namespace ocl::env
