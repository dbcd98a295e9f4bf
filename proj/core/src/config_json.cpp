#include "ocl/harness/config_json.hpp"

#include <fstream>
#include <set>

#include "ocl/errors.hpp"

namespace ocl::harness {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (allowed.find(it.key()) == allowed.end()) {
            throw ConfigError("unknown key '" + it.key() + "' in " + ctx);
        }
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

policy::RegretBoundParams parse_bounds_object(const json& j, const std::string& ctx) {
    check_keys(j, {"S", "L", "P", "v1", "v2", "eps1", "eps2", "m"}, ctx);
    policy::RegretBoundParams b;
    b.S = j.at("S").get<double>();
    b.L = j.at("L").get<double>();
    b.P = j.at("P").get<double>();
    b.v1 = j.at("v1").get<double>();
    b.v2 = j.at("v2").get<double>();
    b.eps1 = get_or(j, "eps1", 0.0);
    b.eps2 = get_or(j, "eps2", 0.0);
    b.m = get_or(j, "m", 1.0);
    b.validate();
    return b;
}

PolicySpec parse_policy(const json& j) {
    if (!j.contains("name")) throw ConfigError("policy entry without 'name'");
    PolicySpec spec;
    spec.name = j.at("name").get<std::string>();

    if (spec.name == kClUcb || spec.name == kClUcbNoSim) {
        check_keys(j,
                   {"name", "eta1", "eta2", "lambda", "alpha_q", "alpha_c", "mode", "delta",
                    "bounds"},
                   "policy '" + spec.name + "'");
        spec.eta1 = get_or(j, "eta1", 0.3);
        spec.eta2 = get_or(j, "eta2", 0.3);
        spec.lambda = get_or(j, "lambda", spec.name == kClUcbNoSim ? 0.0 : 0.01);
        if (spec.name == kClUcbNoSim && spec.lambda != 0.0) {
            throw ConfigError("cl_ucb_nosim must not set a nonzero lambda");
        }
        spec.alpha_q = get_or(j, "alpha_q", 1.0);
        spec.alpha_c = get_or(j, "alpha_c", 1.0);
        const std::string mode = get_or<std::string>(j, "mode", "fixed");
        if (mode == "fixed") {
            spec.mode = policy::ExplorationParams::Mode::fixed;
        } else if (mode == "theoretical") {
            spec.mode = policy::ExplorationParams::Mode::theoretical;
        } else {
            throw ConfigError("policy mode must be 'fixed' or 'theoretical'");
        }
        spec.delta = get_or(j, "delta", 0.1);
        if (j.contains("bounds")) {
            spec.bounds = parse_bounds_object(j.at("bounds"), "policy bounds");
        }
    } else if (spec.name == kGobLin) {
        check_keys(j, {"name", "eta", "lambda", "alpha"}, "policy '" + spec.name + "'");
        spec.eta = get_or(j, "eta", 0.3);
        spec.lambda = get_or(j, "lambda", 0.01);
        spec.alpha = get_or(j, "alpha", 1.0);
    } else if (spec.name == kLinUcb) {
        check_keys(j, {"name", "eta", "alpha"}, "policy '" + spec.name + "'");
        spec.eta = get_or(j, "eta", 0.3);
        spec.alpha = get_or(j, "alpha", 1.0);
    } else {
        throw ConfigError("unknown policy '" + spec.name + "'");
    }
    spec.validate();
    return spec;
}

EnvironmentSpec parse_environment(const json& j) {
    EnvironmentSpec env;
    const std::string type = j.contains("type") ? j.at("type").get<std::string>() : "sim";
    if (type == "sim") {
        env.type = EnvironmentSpec::Type::sim;
        check_keys(j,
                   {"type", "N", "K_true", "p", "sigma2", "noise_sd", "time_scale",
                    "q_magnitude", "mixture_priors", "similarity"},
                   "environment");
        env.sim.N = get_or<Eigen::Index>(j, "N", 100);
        env.sim.K_true = get_or<Eigen::Index>(j, "K_true", 3);
        env.sim.p = get_or<Eigen::Index>(j, "p", 3);
        env.sim.sigma2 = get_or(j, "sigma2", 100.0);
        env.sim.noise_sd = get_or(j, "noise_sd", 1.0);
        const std::string ts = get_or<std::string>(j, "time_scale", "normalized");
        if (ts == "normalized") {
            env.sim.time_scale = env::TimeScale::normalized;
        } else if (ts == "raw") {
            env.sim.time_scale = env::TimeScale::raw;
        } else {
            throw ConfigError("time_scale must be 'normalized' or 'raw'");
        }
        env.sim.q_magnitude = get_or(j, "q_magnitude", 1.0);
        if (j.contains("mixture_priors")) {
            env.sim.mixture_priors = j.at("mixture_priors").get<std::vector<double>>();
        }
        const std::string sim = get_or<std::string>(j, "similarity", "inner");
        if (sim == "inner") {
            env.sim.similarity = env::SimilarityKind::inner;
        } else if (sim == "inner_normalized") {
            env.sim.similarity = env::SimilarityKind::inner_normalized;
        } else {
            throw ConfigError("similarity must be 'inner' or 'inner_normalized'");
        }
    } else if (type == "replay") {
        env.type = EnvironmentSpec::Type::replay;
        check_keys(j, {"type", "data", "risks", "bandwidth", "standardize"}, "environment");
        env.replay.data_csv = get_or<std::string>(j, "data", "");
        env.replay.risks_csv = get_or<std::string>(j, "risks", "");
        env.replay.bandwidth = get_or(j, "bandwidth", 1.0);
        env.replay.standardize = get_or(j, "standardize", true);
    } else {
        throw ConfigError("environment type must be 'sim' or 'replay'");
    }
    return env;
}

} // namespace

ExperimentConfig parse_config(const json& j) {
    check_keys(j,
               {"environment", "policies", "M", "T", "replications", "seed", "seeds",
                "out_dir", "inner_iters", "inner_tol", "als_mode", "K", "record_selections",
                "threads", "reward"},
               "config");
    ExperimentConfig cfg;
    if (!j.contains("environment")) throw ConfigError("config missing 'environment'");
    cfg.environment = parse_environment(j.at("environment"));

    if (!j.contains("policies") || !j.at("policies").is_array() || j.at("policies").empty()) {
        throw ConfigError("config needs a nonempty 'policies' array");
    }
    for (const auto& p : j.at("policies")) cfg.policies.push_back(parse_policy(p));

    if (j.contains("M")) {
        const auto& m = j.at("M");
        if (m.is_object()) {
            check_keys(m, {"fraction"}, "M");
            cfg.M = CapacitySpec{true, m.at("fraction").get<double>()};
        } else {
            cfg.M = CapacitySpec{false, m.get<double>()};
        }
    }
    cfg.T = get_or(j, "T", 3000);
    cfg.replications = get_or(j, "replications", 10);
    cfg.base_seed = get_or<std::uint64_t>(j, "seed", 1);
    if (j.contains("seeds")) {
        cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    }
    cfg.out_dir = get_or<std::string>(j, "out_dir", "results");
    cfg.inner_iters = get_or(j, "inner_iters", 2);
    cfg.inner_tol = get_or(j, "inner_tol", 0.0);
    const std::string mode = get_or<std::string>(j, "als_mode", "incremental");
    if (mode == "incremental") {
        cfg.als_mode = model::AlsMode::incremental;
    } else if (mode == "full_refit") {
        cfg.als_mode = model::AlsMode::full_refit;
    } else {
        throw ConfigError("als_mode must be 'incremental' or 'full_refit'");
    }
    cfg.model_K = get_or<Eigen::Index>(j, "K", 0);
    cfg.record_selections = get_or(j, "record_selections", false);
    cfg.threads = get_or(j, "threads", 0);
    if (j.contains("reward")) {
        const auto& r = j.at("reward");
        check_keys(r, {"sign", "offset"}, "reward");
        cfg.environment.reward.sign = get_or(r, "sign", 1.0);
        cfg.environment.reward.offset = get_or(r, "offset", 0.0);
        if (cfg.environment.reward.sign != 1.0 && cfg.environment.reward.sign != -1.0) {
            throw ConfigError("reward sign must be +1 or -1");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return parse_config(j);
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    ordered_json env;
    if (cfg.environment.type == EnvironmentSpec::Type::sim) {
        env["type"] = "sim";
        env["N"] = cfg.environment.sim.N;
        env["K_true"] = cfg.environment.sim.K_true;
        env["p"] = cfg.environment.sim.p;
        env["sigma2"] = cfg.environment.sim.sigma2;
        env["noise_sd"] = cfg.environment.sim.noise_sd;
        env["time_scale"] =
            cfg.environment.sim.time_scale == env::TimeScale::normalized ? "normalized" : "raw";
        env["q_magnitude"] = cfg.environment.sim.q_magnitude;
        if (!cfg.environment.sim.mixture_priors.empty()) {
            env["mixture_priors"] = cfg.environment.sim.mixture_priors;
        }
        env["similarity"] = cfg.environment.sim.similarity == env::SimilarityKind::inner
                                ? "inner"
                                : "inner_normalized";
    } else {
        env["type"] = "replay";
        env["data"] = cfg.environment.replay.data_csv;
        env["risks"] = cfg.environment.replay.risks_csv;
        env["bandwidth"] = cfg.environment.replay.bandwidth;
        env["standardize"] = cfg.environment.replay.standardize;
    }
    j["environment"] = std::move(env);

    ordered_json pols = ordered_json::array();
    for (const auto& p : cfg.policies) {
        ordered_json pj;
        pj["name"] = p.name;
        if (p.name == kClUcb || p.name == kClUcbNoSim) {
            pj["eta1"] = p.eta1;
            pj["eta2"] = p.eta2;
            if (p.name == kClUcb) pj["lambda"] = p.lambda;
            pj["alpha_q"] = p.alpha_q;
            pj["alpha_c"] = p.alpha_c;
            pj["mode"] =
                p.mode == policy::ExplorationParams::Mode::fixed ? "fixed" : "theoretical";
            pj["delta"] = p.delta;
            if (p.bounds) {
                ordered_json bj;
                bj["S"] = p.bounds->S;
                bj["L"] = p.bounds->L;
                bj["P"] = p.bounds->P;
                bj["v1"] = p.bounds->v1;
                bj["v2"] = p.bounds->v2;
                bj["eps1"] = p.bounds->eps1;
                bj["eps2"] = p.bounds->eps2;
                bj["m"] = p.bounds->m;
                pj["bounds"] = std::move(bj);
            }
        } else if (p.name == kGobLin) {
            pj["eta"] = p.eta;
            pj["lambda"] = p.lambda;
            pj["alpha"] = p.alpha;
        } else {
            pj["eta"] = p.eta;
            pj["alpha"] = p.alpha;
        }
        pols.push_back(std::move(pj));
    }
    j["policies"] = std::move(pols);

    if (cfg.M.is_fraction) {
        j["M"] = ordered_json{{"fraction", cfg.M.value}};
    } else {
        j["M"] = cfg.M.value;
    }
    j["T"] = cfg.T;
    j["replications"] = cfg.replications;
    j["seed"] = cfg.base_seed;
    if (!cfg.seeds.empty()) j["seeds"] = cfg.seeds;
    j["out_dir"] = cfg.out_dir;
    j["inner_iters"] = cfg.inner_iters;
    j["inner_tol"] = cfg.inner_tol;
    j["als_mode"] = cfg.als_mode == model::AlsMode::incremental ? "incremental" : "full_refit";
    if (cfg.model_K > 0) j["K"] = cfg.model_K;
    j["record_selections"] = cfg.record_selections;
    j["threads"] = cfg.threads;
    j["reward"] =
        ordered_json{{"sign", cfg.environment.reward.sign},
                     {"offset", cfg.environment.reward.offset}};
    return j;
}

BoundSpec parse_bound_constants(const json& j) {
    check_keys(j, {"S", "L", "P", "v1", "v2", "eps1", "eps2", "m", "delta", "alpha_q",
                   "alpha_c"},
               "bound constants");
    BoundSpec spec;
    spec.params = parse_bounds_object(
        [&] {
            json b = j;
            b.erase("delta");
            b.erase("alpha_q");
            b.erase("alpha_c");
            return b;
        }(),
        "bound constants");
    spec.delta = get_or(j, "delta", 0.1);
    if (j.contains("alpha_q")) spec.alpha_q = j.at("alpha_q").get<double>();
    if (j.contains("alpha_c")) spec.alpha_c = j.at("alpha_c").get<double>();
    return spec;
}

BoundSpec load_bound_constants(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open constants file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return parse_bound_constants(j);
}

} // namespace ocl::harness
