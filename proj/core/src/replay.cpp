#include "ocl/env/replay.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ocl/errors.hpp"

namespace ocl::env {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& field, const std::string& file, int line_no) {
    const std::string t = trim(field);
    try {
        size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(file + ":" + std::to_string(line_no) + ": cannot parse number '" +
                         field + "'");
    }
}

} // namespace

double ReplayDataset::value_at(Eigen::Index unit, double time) const {
    const auto& s = series_[static_cast<size_t>(unit)];
    if (time <= s.front().first) return s.front().second;
    if (time >= s.back().first) return s.back().second;
    auto it = std::lower_bound(s.begin(), s.end(), time,
                               [](const auto& pr, double t) { return pr.first < t; });
    if (it->first == time) return it->second; // exact at observed timestamps
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (time - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

ReplayDataset load_replay(const std::string& outcomes_csv, const std::string& risks_csv,
                          int T) {
    if (T < 1) throw ConfigError("load_replay: T must be >= 1");

    ReplayDataset ds;
    ds.T_ = T;

    std::ifstream in(outcomes_csv);
    if (!in) throw IoError("load_replay: cannot open '" + outcomes_csv + "'");

    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) {
        throw ParseError(outcomes_csv + ": empty file");
    }
    line_no = 1;
    {
        auto header = split_csv_line(line);
        if (header.size() != 3 || trim(header[0]) != "unit_id" ||
            trim(header[1]) != "timestamp_months" || trim(header[2]) != "outcome") {
            throw ParseError(outcomes_csv + ":1: expected header "
                             "'unit_id,timestamp_months,outcome'");
        }
    }

    // Units keep the order of first appearance.
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw ParseError(outcomes_csv + ":" + std::to_string(line_no) +
                             ": expected 3 fields, got " + std::to_string(fields.size()));
        }
        const std::string id = trim(fields[0]);
        if (id.empty()) {
            throw ParseError(outcomes_csv + ":" + std::to_string(line_no) + ": empty unit_id");
        }
        const double ts = parse_number(fields[1], outcomes_csv, line_no);
        if (series.find(id) == series.end()) order.push_back(id);
        auto& s = series[id];
        if (trim(fields[2]).empty()) continue; // missing outcome
        s.emplace_back(ts, parse_number(fields[2], outcomes_csv, line_no));
    }

    int dropped = 0;
    for (const auto& id : order) {
        auto& s = series[id];
        std::sort(s.begin(), s.end());
        if (s.size() < 2) {
            ++dropped;
            continue;
        }
        ds.unit_ids_.push_back(id);
        ds.series_.push_back(std::move(s));
    }
    if (dropped > 0) {
        ds.warnings_.push_back("load_replay: dropped " + std::to_string(dropped) +
                               " unit(s) with fewer than 2 observed outcomes");
    }
    if (ds.unit_ids_.empty()) {
        throw ParseError(outcomes_csv + ": no unit has two or more observed outcomes");
    }

    // Risk factors, matched by unit id.
    std::ifstream rin(risks_csv);
    if (!rin) throw IoError("load_replay: cannot open '" + risks_csv + "'");
    if (!std::getline(rin, line)) throw ParseError(risks_csv + ": empty file");
    const auto rheader = split_csv_line(line);
    if (rheader.size() < 2 || trim(rheader[0]) != "unit_id") {
        throw ParseError(risks_csv + ":1: expected header 'unit_id,f1,...'");
    }
    const size_t n_factors = rheader.size() - 1;
    std::map<std::string, Eigen::VectorXd> risks;
    int rline_no = 1;
    while (std::getline(rin, line)) {
        ++rline_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != n_factors + 1) {
            throw ParseError(risks_csv + ":" + std::to_string(rline_no) + ": expected " +
                             std::to_string(n_factors + 1) + " fields");
        }
        Eigen::VectorXd z(n_factors);
        for (size_t j = 0; j < n_factors; ++j) {
            z(static_cast<Eigen::Index>(j)) = parse_number(fields[j + 1], risks_csv, rline_no);
        }
        risks[trim(fields[0])] = std::move(z);
    }

    const Eigen::Index N = ds.units();
    ds.risks_.resize(N, static_cast<Eigen::Index>(n_factors));
    for (Eigen::Index i = 0; i < N; ++i) {
        auto it = risks.find(ds.unit_ids_[static_cast<size_t>(i)]);
        if (it == risks.end()) {
            throw ParseError(risks_csv + ": no risk factors for unit '" +
                             ds.unit_ids_[static_cast<size_t>(i)] + "'");
        }
        ds.risks_.row(i) = it->second.transpose();
    }

    // Resample the overall observed span onto T equally spaced cycles.
    double lo = ds.series_.front().front().first;
    double hi = ds.series_.front().back().first;
    for (const auto& s : ds.series_) {
        lo = std::min(lo, s.front().first);
        hi = std::max(hi, s.back().first);
    }
    ds.span_lo_ = lo;
    ds.span_hi_ = hi;

    int extrapolated = 0;
    ds.resampled_.resize(T, N);
    for (int c = 0; c < T; ++c) {
        const double time =
            T > 1 ? lo + (hi - lo) * static_cast<double>(c) / static_cast<double>(T - 1) : lo;
        for (Eigen::Index i = 0; i < N; ++i) {
            const auto& s = ds.series_[static_cast<size_t>(i)];
            if (time < s.front().first || time > s.back().first) ++extrapolated;
            ds.resampled_(c, i) = ds.value_at(i, time);
        }
    }
    if (extrapolated > 0) {
        ds.warnings_.push_back("load_replay: " + std::to_string(extrapolated) +
                               " cycle value(s) outside a unit's observed range carried flat");
    }
    return ds;
}

ReplayEnvironment::ReplayEnvironment(std::shared_ptr<const ReplayDataset> data,
                                     double bandwidth, RewardTransform reward,
                                     bool standardize)
    : data_(std::move(data)), reward_(reward) {
    W_ = similarity_heat_kernel(data_->risk_factors(), bandwidth, standardize);
}

Eigen::VectorXd ReplayEnvironment::features(int t) const {
    return features_at(t, data_->cycles(), TimeScale::normalized, 3);
}

Eigen::VectorXd ReplayEnvironment::outcomes(int t) const {
    if (t < 0 || t >= data_->cycles()) throw ConfigError("outcomes: cycle out of range");
    Eigen::VectorXd y = data_->resampled().row(t).transpose();
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = reward_(y(i));
    return y;
}

} // namespace ocl::env
