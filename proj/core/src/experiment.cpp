#include "ocl/harness/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <thread>

#include "ocl/errors.hpp"
#include "ocl/harness/metrics.hpp"
#include "ocl/policy/select.hpp"
#include "ocl/rng.hpp"

namespace ocl::harness {

int CapacitySpec::resolve(Eigen::Index N) const {
    int M;
    if (is_fraction) {
        if (value <= 0.0 || value > 1.0) {
            throw ConfigError("capacity fraction must lie in (0, 1]");
        }
        M = static_cast<int>(std::llround(value * static_cast<double>(N)));
    } else {
        M = static_cast<int>(std::llround(value));
    }
    M = std::max(1, std::min<int>(M, static_cast<int>(N)));
    return M;
}

void PolicySpec::validate() const {
    static const std::set<std::string> known = {kClUcb, kClUcbNoSim, kGobLin, kLinUcb};
    if (known.find(name) == known.end()) {
        throw ConfigError("unknown policy '" + name + "'");
    }
    if (eta1 < 0 || eta2 < 0 || lambda < 0 || eta <= 0) {
        throw ConfigError("policy '" + name + "': invalid regularization weights");
    }
    if (alpha_q < 0 || alpha_c < 0 || alpha < 0) {
        throw ConfigError("policy '" + name + "': alphas must be nonnegative");
    }
    if (!(delta > 0 && delta < 1)) {
        throw ConfigError("policy '" + name + "': delta must lie in (0,1)");
    }
    if (mode == policy::ExplorationParams::Mode::theoretical && !bounds) {
        throw ConfigError("policy '" + name + "': theoretical mode requires bound constants");
    }
    if (bounds) bounds->validate();
}

std::uint64_t ExperimentConfig::seed_for(int replication) const {
    if (!seeds.empty()) {
        if (replication < 0 || replication >= static_cast<int>(seeds.size())) {
            throw ConfigError("replication index outside explicit seed list");
        }
        return seeds[static_cast<size_t>(replication)];
    }
    return derive_seed(base_seed, 0x5eedULL, static_cast<std::uint64_t>(replication));
}

Eigen::Index ExperimentConfig::resolved_model_K() const {
    if (model_K > 0) return model_K;
    if (environment.type == EnvironmentSpec::Type::sim) return environment.sim.K_true;
    throw ConfigError("replay runs need an explicit model K when CL policies are present");
}

void ExperimentConfig::validate() const {
    if (T < 1) throw ConfigError("T must be >= 1");
    if (replications < 1) throw ConfigError("replications must be >= 1");
    if (!seeds.empty() && static_cast<int>(seeds.size()) < replications) {
        throw ConfigError("explicit seed list shorter than replications");
    }
    if (policies.empty()) throw ConfigError("no policies configured");
    std::set<std::string> names;
    for (const auto& p : policies) {
        p.validate();
        if (!names.insert(p.name).second) {
            throw ConfigError("duplicate policy '" + p.name + "'");
        }
    }
    if (inner_iters < 1) throw ConfigError("inner_iters must be >= 1");
    if (inner_tol < 0) throw ConfigError("inner_tol must be nonnegative");
    if (environment.type == EnvironmentSpec::Type::sim) {
        env::SimConfig sim = environment.sim;
        sim.T = T;
        sim.validate();
    } else {
        if (environment.replay.data_csv.empty() || environment.replay.risks_csv.empty()) {
            throw ConfigError("replay environment needs data and risks CSV paths");
        }
        if (environment.replay.bandwidth <= 0) {
            throw ConfigError("replay bandwidth must be positive");
        }
    }
}

int PolicyRunResult::completed() const {
    int n = 0;
    for (const auto& r : replications) n += r.failed ? 0 : 1;
    return n;
}

double PolicyRunResult::mean_final_regret() const {
    double sum = 0.0;
    int n = 0;
    for (const auto& r : replications) {
        if (r.failed || r.cumulative.size() == 0) continue;
        sum += r.cumulative(r.cumulative.size() - 1);
        ++n;
    }
    return n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

double PolicyRunResult::sd_final_regret() const {
    const double mean = mean_final_regret();
    double ss = 0.0;
    int n = 0;
    for (const auto& r : replications) {
        if (r.failed || r.cumulative.size() == 0) continue;
        const double d = r.cumulative(r.cumulative.size() - 1) - mean;
        ss += d * d;
        ++n;
    }
    return n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
}

double PolicyRunResult::mean_final_estimation_error() const {
    double sum = 0.0;
    int n = 0;
    for (const auto& r : replications) {
        if (r.failed || r.estimation_error.size() == 0) continue;
        sum += r.estimation_error(r.estimation_error.size() - 1);
        ++n;
    }
    return n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

double PolicyRunResult::mean_cumulative_at(int cycle) const {
    double sum = 0.0;
    int n = 0;
    for (const auto& r : replications) {
        if (r.failed || cycle >= r.cumulative.size()) continue;
        sum += r.cumulative(cycle);
        ++n;
    }
    return n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

double PolicyRunResult::mean_estimation_error_at(int cycle) const {
    double sum = 0.0;
    int n = 0;
    for (const auto& r : replications) {
        if (r.failed || cycle >= r.estimation_error.size()) continue;
        sum += r.estimation_error(cycle);
        ++n;
    }
    return n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

const PolicyRunResult* ExperimentResult::find(const std::string& name) const {
    for (const auto& p : policies) {
        if (p.policy == name) return &p;
    }
    return nullptr;
}

std::unique_ptr<policy::Policy> make_policy(const PolicySpec& spec,
                                            const model::SimilarityGraph& graph,
                                            model::Dims dims, const ExperimentConfig& cfg,
                                            std::uint64_t seed) {
    if (spec.name == kClUcb || spec.name == kClUcbNoSim) {
        policy::ClUcbOptions opt;
        opt.exploration.alpha_q = spec.alpha_q;
        opt.exploration.alpha_c = spec.alpha_c;
        opt.exploration.delta = spec.delta;
        opt.exploration.mode = spec.mode;
        opt.bounds = spec.bounds;
        opt.als.max_inner_iters = cfg.inner_iters;
        opt.als.tol = cfg.inner_tol;
        opt.als.mode = cfg.als_mode;
        const double lambda = (spec.name == kClUcbNoSim) ? 0.0 : spec.lambda;
        return std::make_unique<policy::ClUcbPolicy>(spec.name, graph, dims, spec.eta1,
                                                     spec.eta2, lambda, std::move(opt), seed);
    }
    if (spec.name == kGobLin) {
        return std::make_unique<policy::GobLinPolicy>(spec.name, graph, dims, spec.eta,
                                                      spec.lambda, spec.alpha);
    }
    if (spec.name == kLinUcb) {
        return std::make_unique<policy::LinUcbPolicy>(spec.name, dims, spec.eta, spec.alpha);
    }
    throw ConfigError("unknown policy '" + spec.name + "'");
}

namespace {

std::unique_ptr<env::Environment> make_environment(
    const ExperimentConfig& cfg, std::uint64_t seed,
    const std::shared_ptr<const env::ReplayDataset>& replay_data) {
    if (cfg.environment.type == EnvironmentSpec::Type::sim) {
        env::SimConfig sim = cfg.environment.sim;
        sim.T = cfg.T;
        sim.seed = seed;
        return std::make_unique<env::SimEnvironment>(sim, cfg.environment.reward);
    }
    return std::make_unique<env::ReplayEnvironment>(replay_data,
                                                    cfg.environment.replay.bandwidth,
                                                    cfg.environment.reward,
                                                    cfg.environment.replay.standardize);
}

ReplicationSeries run_one(const ExperimentConfig& cfg, const PolicySpec& spec, int rep,
                          const std::shared_ptr<const env::ReplayDataset>& replay_data,
                          int M) {
    ReplicationSeries series;
    series.seed = cfg.seed_for(rep);

    auto environment = make_environment(cfg, series.seed, replay_data);
    const Eigen::Index N = environment->units();
    const int T = environment->horizon();
    const model::Dims dims{N, cfg.resolved_model_K(), environment->feature_dim()};

    model::SimilarityGraph graph(environment->similarity());
    auto pol = make_policy(spec, graph, dims, cfg,
                           derive_seed(series.seed, stream::kmeans));

    const Eigen::MatrixXd* truth = environment->truth_coefficients();
    series.instantaneous.resize(T);
    series.cumulative.resize(T);
    if (truth) series.estimation_error.resize(T);
    if (cfg.record_selections) series.selections.reserve(static_cast<size_t>(T));

    double running = 0.0;
    for (int t = 0; t < T; ++t) {
        const Eigen::MatrixXd X = environment->feature_matrix(t);
        const Eigen::VectorXd scores = pol->score_all(X);
        const auto mask = policy::select_top_m(scores, M);
        const Eigen::VectorXd y = environment->outcomes(t);

        const double r = cycle_regret(y, mask, M);
        running += r;
        series.instantaneous(t) = r;
        series.cumulative(t) = running;

        if (cfg.record_selections) {
            std::vector<int> sel;
            sel.reserve(static_cast<size_t>(M));
            for (Eigen::Index i = 0; i < N; ++i) {
                if (mask[static_cast<size_t>(i)]) sel.push_back(static_cast<int>(i));
            }
            series.selections.push_back(std::move(sel));
        }

        model::CycleObservation obs;
        obs.cycle = t;
        obs.X = X;
        obs.y = Eigen::VectorXd::Zero(N);
        for (Eigen::Index i = 0; i < N; ++i) {
            if (mask[static_cast<size_t>(i)]) obs.y(i) = y(i);
        }
        obs.mask = mask;
        pol->update(obs);

        if (truth) {
            series.estimation_error(t) = estimation_error(pol->coefficients(), *truth);
        }
    }
    return series;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    std::shared_ptr<const env::ReplayDataset> replay_data;
    if (cfg.environment.type == EnvironmentSpec::Type::replay) {
        replay_data = std::make_shared<const env::ReplayDataset>(
            env::load_replay(cfg.environment.replay.data_csv,
                             cfg.environment.replay.risks_csv, cfg.T));
    }
    return run_experiment(cfg, replay_data);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                std::shared_ptr<const env::ReplayDataset> replay_data) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    ExperimentResult result;
    result.config = cfg;

    Eigen::Index N;
    if (cfg.environment.type == EnvironmentSpec::Type::sim) {
        N = cfg.environment.sim.N;
    } else {
        if (!replay_data) {
            replay_data = std::make_shared<const env::ReplayDataset>(
                env::load_replay(cfg.environment.replay.data_csv,
                                 cfg.environment.replay.risks_csv, cfg.T));
        }
        N = replay_data->units();
    }
    const int M = cfg.M.resolve(N);
    result.M_resolved = M;
    for (int r = 0; r < cfg.replications; ++r) result.seeds_used.push_back(cfg.seed_for(r));

    result.policies.resize(cfg.policies.size());
    for (size_t pi = 0; pi < cfg.policies.size(); ++pi) {
        result.policies[pi].policy = cfg.policies[pi].name;
        result.policies[pi].replications.resize(static_cast<size_t>(cfg.replications));
    }

    struct Task {
        size_t policy;
        int rep;
    };
    std::vector<Task> tasks;
    for (size_t pi = 0; pi < cfg.policies.size(); ++pi) {
        for (int r = 0; r < cfg.replications; ++r) tasks.push_back({pi, r});
    }

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const size_t k = next.fetch_add(1);
            if (k >= tasks.size()) break;
            const Task& task = tasks[k];
            ReplicationSeries& slot =
                result.policies[task.policy].replications[static_cast<size_t>(task.rep)];
            try {
                slot = run_one(cfg, cfg.policies[task.policy], task.rep, replay_data, M);
            } catch (const std::exception& e) {
                slot.failed = true;
                slot.error = e.what();
                slot.seed = cfg.seed_for(task.rep);
            }
        }
    };

    unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                         : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, tasks.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (const auto& p : result.policies) {
        for (const auto& r : p.replications) {
            if (r.failed) ++result.failed_replications;
        }
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "N") return SweepAxis::N;
    if (s == "K") return SweepAxis::K;
    if (s == "M") return SweepAxis::M;
    if (s == "sigma2") return SweepAxis::sigma2;
    throw ConfigError("unknown sweep axis '" + s + "' (expected N, K, M or sigma2)");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::N: return "N";
        case SweepAxis::K: return "K";
        case SweepAxis::M: return "M";
        case SweepAxis::sigma2: return "sigma2";
    }
    return "?";
}

SweepResult sweep(const ExperimentConfig& base, SweepAxis axis,
                  const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("sweep: no axis values given");
    if (base.environment.type != EnvironmentSpec::Type::sim &&
        (axis == SweepAxis::N || axis == SweepAxis::K || axis == SweepAxis::sigma2)) {
        throw ConfigError("sweep: axis " + to_string(axis) + " requires a sim environment");
    }

    SweepResult out;
    out.axis = axis;
    out.values = values;
    for (double v : values) {
        ExperimentConfig cfg = base;
        switch (axis) {
            case SweepAxis::N:
                cfg.environment.sim.N = static_cast<Eigen::Index>(std::llround(v));
                break;
            case SweepAxis::K:
                cfg.environment.sim.K_true = static_cast<Eigen::Index>(std::llround(v));
                if (base.model_K == 0) cfg.model_K = 0; // model rank follows the data
                break;
            case SweepAxis::M:
                if (v > 0 && v < 1) {
                    cfg.M = CapacitySpec{true, v};
                } else {
                    cfg.M = CapacitySpec{false, v};
                }
                break;
            case SweepAxis::sigma2:
                cfg.environment.sim.sigma2 = v;
                break;
        }
        out.results.push_back(run_experiment(cfg));
    }
    return out;
}

} // namespace ocl::harness
