// Command-line harness for adaptive monitoring experiments: seeded
// simulation runs, sensitivity sweeps, longitudinal CSV replay and the
// regret-bound calculator.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ocl/errors.hpp"
#include "ocl/harness/config_json.hpp"
#include "ocl/harness/emit.hpp"
#include "ocl/harness/experiment.hpp"
#include "ocl/model/regularizer.hpp"
#include "ocl/model/similarity_graph.hpp"
#include "ocl/policy/exploration.hpp"

namespace {

int finish(const ocl::harness::ExperimentResult& result, const std::string& out_dir) {
    ocl::harness::emit_results(result, out_dir);
    for (const auto& pol : result.policies) {
        std::printf("%-14s mean final regret %12.3f (sd %9.3f, %d/%zu replications)\n",
                    pol.policy.c_str(), pol.mean_final_regret(), pol.sd_final_regret(),
                    pol.completed(), pol.replications.size());
    }
    std::printf("results written to %s (%.1fs)\n", out_dir.c_str(), result.wall_seconds);
    return result.failed_replications == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online collaborative monitoring harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;

    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("--config", config_path, "JSON experiment config")->required();
    run->add_option("--out", out_dir, "Output directory (overrides config out_dir)");

    std::string axis_name;
    std::vector<double> axis_values;
    auto* sw = app.add_subcommand("sweep", "Run a sensitivity sweep over one axis");
    sw->add_option("--config", config_path, "JSON experiment config")->required();
    sw->add_option("--axis", axis_name, "Sweep axis: N, K, M or sigma2")->required();
    sw->add_option("--values", axis_values, "Axis values")->required()->expected(-1);
    sw->add_option("--out", out_dir, "Output directory (overrides config out_dir)");

    std::string data_csv;
    std::string risks_csv;
    auto* rp = app.add_subcommand("replay", "Replay a longitudinal CSV dataset");
    rp->add_option("--data", data_csv, "Outcome CSV (unit_id,timestamp_months,outcome)")
        ->required();
    rp->add_option("--risks", risks_csv, "Risk-factor CSV (unit_id,f1,...)")->required();
    rp->add_option("--config", config_path, "JSON experiment config")->required();
    rp->add_option("--out", out_dir, "Output directory (overrides config out_dir)");

    std::string constants_path;
    auto* bd = app.add_subcommand("bound", "Evaluate the cumulative-regret upper bound");
    bd->add_option("--config", config_path, "JSON experiment config")->required();
    bd->add_option("--constants", constants_path, "JSON bound constants")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto cfg = ocl::harness::load_config(config_path);
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            return finish(ocl::harness::run_experiment(cfg), cfg.out_dir);
        }

        if (sw->parsed()) {
            auto cfg = ocl::harness::load_config(config_path);
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            const auto axis = ocl::harness::sweep_axis_from_string(axis_name);
            const auto result = ocl::harness::sweep(cfg, axis, axis_values);
            ocl::harness::emit_sweep(result, cfg.out_dir);
            int failed = 0;
            for (const auto& r : result.results) failed += r.failed_replications;
            std::printf("sweep over %s written to %s\n", axis_name.c_str(),
                        cfg.out_dir.c_str());
            return failed == 0 ? 0 : 1;
        }

        if (rp->parsed()) {
            auto cfg = ocl::harness::load_config(config_path);
            cfg.environment.type = ocl::harness::EnvironmentSpec::Type::replay;
            cfg.environment.replay.data_csv = data_csv;
            cfg.environment.replay.risks_csv = risks_csv;
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            cfg.validate();
            return finish(ocl::harness::run_experiment(cfg), cfg.out_dir);
        }

        if (bd->parsed()) {
            auto cfg = ocl::harness::load_config(config_path);
            const auto spec = ocl::harness::load_bound_constants(constants_path);
            if (cfg.environment.type != ocl::harness::EnvironmentSpec::Type::sim) {
                throw ocl::ConfigError("bound: config must describe a sim environment");
            }

            // Dimensions and the similarity regularizer come from the config;
            // the trace term uses the seed-0 population graph.
            ocl::env::SimConfig sim = cfg.environment.sim;
            sim.T = cfg.T;
            sim.seed = cfg.seed_for(0);
            ocl::env::SimEnvironment environment(sim, cfg.environment.reward);
            ocl::model::SimilarityGraph graph(environment.similarity());

            const ocl::harness::PolicySpec* cl = nullptr;
            for (const auto& p : cfg.policies) {
                if (p.name == ocl::harness::kClUcb) cl = &p;
            }
            const double eta1 = cl ? cl->eta1 : 0.3;
            const double eta2 = cl ? cl->eta2 : 0.3;
            const double lambda = cl ? cl->lambda : 0.01;
            const ocl::model::Dims dims{sim.N, cfg.resolved_model_K(), sim.p};
            ocl::model::Regularizer reg(eta1, eta2, lambda, graph, dims.K);

            const double T = static_cast<double>(cfg.T);
            const double trace = ocl::policy::laplacian_trace_term(reg, T);
            const double aq = spec.alpha_q ? *spec.alpha_q
                                           : ocl::policy::width_bound_canonical(
                                                 T, dims, eta1, spec.params, spec.delta);
            const double ac = spec.alpha_c ? *spec.alpha_c
                                           : ocl::policy::width_bound_membership(
                                                 T, dims, eta2, spec.params, spec.delta,
                                                 trace, 0.0);
            const double bound = ocl::policy::regret_upper_bound(
                T, dims, eta1, eta2, spec.params, trace, aq, ac, spec.delta);
            nlohmann::ordered_json out;
            out["T"] = cfg.T;
            out["N"] = dims.N;
            out["K"] = dims.K;
            out["p"] = dims.p;
            out["delta"] = spec.delta;
            out["alpha_q"] = aq;
            out["alpha_c"] = ac;
            out["laplacian_trace_term"] = trace;
            out["regret_upper_bound"] = bound;
            std::cout << out.dump(2) << std::endl;
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return 0;
}
