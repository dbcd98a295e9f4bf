#include "ocl/harness/emit.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "ocl/errors.hpp"
#include "ocl/harness/config_json.hpp"

namespace ocl::harness {

using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void write_regret_csv(const ExperimentResult& result, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "cycle,policy,replication,instantaneous,cumulative\n";
    for (const auto& pol : result.policies) {
        for (size_t rep = 0; rep < pol.replications.size(); ++rep) {
            const auto& series = pol.replications[rep];
            if (series.failed) continue;
            for (Eigen::Index t = 0; t < series.instantaneous.size(); ++t) {
                out << t << ',' << pol.policy << ',' << rep << ','
                    << format_double(series.instantaneous(t)) << ','
                    << format_double(series.cumulative(t)) << '\n';
            }
        }
    }
}

void write_error_csv(const ExperimentResult& result, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "cycle,policy,replication,error\n";
    for (const auto& pol : result.policies) {
        for (size_t rep = 0; rep < pol.replications.size(); ++rep) {
            const auto& series = pol.replications[rep];
            if (series.failed) continue;
            for (Eigen::Index t = 0; t < series.estimation_error.size(); ++t) {
                out << t << ',' << pol.policy << ',' << rep << ','
                    << format_double(series.estimation_error(t)) << '\n';
            }
        }
    }
}

bool has_estimation_error(const ExperimentResult& result) {
    for (const auto& pol : result.policies) {
        for (const auto& series : pol.replications) {
            if (!series.failed && series.estimation_error.size() > 0) return true;
        }
    }
    return false;
}

ordered_json summary_json(const ExperimentResult& result) {
    ordered_json j;
    j["config"] = config_to_json(result.config);
    j["M_resolved"] = result.M_resolved;
    j["seeds"] = result.seeds_used;
    ordered_json per_policy = ordered_json::array();
    for (const auto& pol : result.policies) {
        ordered_json pj;
        pj["policy"] = pol.policy;
        pj["completed_replications"] = pol.completed();
        pj["mean_final_cumulative_regret"] = pol.mean_final_regret();
        pj["sd_final_cumulative_regret"] = pol.sd_final_regret();
        const double e = pol.mean_final_estimation_error();
        if (std::isfinite(e)) pj["mean_final_estimation_error"] = e;
        ordered_json failures = ordered_json::array();
        for (size_t rep = 0; rep < pol.replications.size(); ++rep) {
            if (pol.replications[rep].failed) {
                failures.push_back(ordered_json{{"replication", rep},
                                                {"error", pol.replications[rep].error}});
            }
        }
        if (!failures.empty()) pj["failures"] = std::move(failures);
        per_policy.push_back(std::move(pj));
    }
    j["policies"] = std::move(per_policy);
    j["failed_replications"] = result.failed_replications;
    j["wall_clock_seconds"] = result.wall_seconds;
    return j;
}

} // namespace

void emit_results(const ExperimentResult& result, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "'");

    write_regret_csv(result, out_dir / "regret.csv");
    if (has_estimation_error(result)) {
        write_error_csv(result, out_dir / "estimation_error.csv");
    }
    auto out = open_out(out_dir / "summary.json");
    out << summary_json(result).dump(2) << '\n';
}

void emit_sweep(const SweepResult& sweep, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "'");

    const std::string axis = to_string(sweep.axis);
    for (size_t vi = 0; vi < sweep.values.size(); ++vi) {
        char label[64];
        std::snprintf(label, sizeof(label), "%s=%g", axis.c_str(), sweep.values[vi]);
        emit_results(sweep.results[vi], out_dir / label);
    }

    auto csv = open_out(out_dir / "sweep_summary.csv");
    csv << "axis,value,policy,completed,mean_final_regret,sd_final_regret\n";
    ordered_json rows = ordered_json::array();
    for (size_t vi = 0; vi < sweep.values.size(); ++vi) {
        for (const auto& pol : sweep.results[vi].policies) {
            csv << axis << ',' << format_double(sweep.values[vi]) << ',' << pol.policy << ','
                << pol.completed() << ',' << format_double(pol.mean_final_regret()) << ','
                << format_double(pol.sd_final_regret()) << '\n';
            rows.push_back(ordered_json{{"axis", axis},
                                        {"value", sweep.values[vi]},
                                        {"policy", pol.policy},
                                        {"completed", pol.completed()},
                                        {"mean_final_regret", pol.mean_final_regret()},
                                        {"sd_final_regret", pol.sd_final_regret()}});
        }
    }
    auto js = open_out(out_dir / "sweep_summary.json");
    js << rows.dump(2) << '\n';
}

} // namespace ocl::harness
