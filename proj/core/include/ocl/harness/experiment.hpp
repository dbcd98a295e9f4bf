#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ocl/env/replay.hpp"
#include "ocl/env/sim.hpp"
#include "ocl/model/als.hpp"
#include "ocl/policy/exploration.hpp"
#include "ocl/policy/policies.hpp"

namespace ocl::harness {

// Capacity: absolute count or fraction of N (rounded half up, clamped to
// [1, N]).
struct CapacitySpec {
    bool is_fraction = true;
    double value = 0.33;
    int resolve(Eigen::Index N) const;
};

// Registered policy names.
inline constexpr const char* kClUcb = "cl_ucb";
inline constexpr const char* kClUcbNoSim = "cl_ucb_nosim";
inline constexpr const char* kGobLin = "gob_lin";
inline constexpr const char* kLinUcb = "lin_ucb";

struct PolicySpec {
    std::string name;
    // CL policies
    double eta1 = 0.3;
    double eta2 = 0.3;
    double lambda = 0.01;
    double alpha_q = 1.0;
    double alpha_c = 1.0;
    policy::ExplorationParams::Mode mode = policy::ExplorationParams::Mode::fixed;
    double delta = 0.1;
    std::optional<policy::RegretBoundParams> bounds;
    // Baselines (lin_ucb, gob_lin): shared ridge weight and width
    double eta = 0.3;
    double alpha = 1.0;

    void validate() const;
};

struct ReplaySpec {
    std::string data_csv;
    std::string risks_csv;
    double bandwidth = 1.0;
    bool standardize = true;
};

struct EnvironmentSpec {
    enum class Type { sim, replay } type = Type::sim;
    env::SimConfig sim;
    ReplaySpec replay;
    env::RewardTransform reward;
};

struct ExperimentConfig {
    EnvironmentSpec environment;
    std::vector<PolicySpec> policies;
    CapacitySpec M;
    int T = 3000;
    int replications = 10;
    std::uint64_t base_seed = 1;
    std::vector<std::uint64_t> seeds; // when nonempty, overrides base_seed derivation
    std::string out_dir = "results";
    int inner_iters = 2;
    double inner_tol = 0.0;
    model::AlsMode als_mode = model::AlsMode::incremental;
    // Model rank for the CL policies; 0 = use the simulation's K_true.
    Eigen::Index model_K = 0;
    bool record_selections = false;
    int threads = 0; // 0 = hardware concurrency

    std::uint64_t seed_for(int replication) const;
    Eigen::Index resolved_model_K() const;
    void validate() const;
};

struct ReplicationSeries {
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    Eigen::VectorXd instantaneous;    // T
    Eigen::VectorXd cumulative;       // T
    Eigen::VectorXd estimation_error; // T when truth is known, else empty
    std::vector<std::vector<int>> selections; // per cycle, when recorded
};

struct PolicyRunResult {
    std::string policy;
    std::vector<ReplicationSeries> replications;

    int completed() const;
    double mean_final_regret() const;
    double sd_final_regret() const;
    double mean_final_estimation_error() const;
    // Mean cumulative regret at a cycle (1-based horizon position t = cycle+1).
    double mean_cumulative_at(int cycle) const;
    double mean_estimation_error_at(int cycle) const;
};

struct ExperimentResult {
    ExperimentConfig config;
    int M_resolved = 0;
    std::vector<std::uint64_t> seeds_used;
    std::vector<PolicyRunResult> policies;
    int failed_replications = 0;
    double wall_seconds = 0.0;

    const PolicyRunResult* find(const std::string& name) const;
};

// Factory used by the runner and by diagnostics: build a policy over a
// similarity graph.
std::unique_ptr<policy::Policy> make_policy(const PolicySpec& spec,
                                            const model::SimilarityGraph& graph,
                                            model::Dims dims, const ExperimentConfig& cfg,
                                            std::uint64_t seed);

// Run every (policy, replication) pair against seed-paired environment
// realizations. Replications execute concurrently; failures abort only the
// affected replication.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// As run_experiment, but with a caller-provided replay dataset (loaded once).
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                std::shared_ptr<const env::ReplayDataset> replay_data);

enum class SweepAxis { N, K, M, sigma2 };

SweepAxis sweep_axis_from_string(const std::string& s);
std::string to_string(SweepAxis axis);

struct SweepResult {
    SweepAxis axis = SweepAxis::N;
    std::vector<double> values;
    std::vector<ExperimentResult> results;
};

// One run per axis value with a shared seed schedule.
SweepResult sweep(const ExperimentConfig& base, SweepAxis axis,
                  const std::vector<double>& values);

} // namespace ocl::harness
