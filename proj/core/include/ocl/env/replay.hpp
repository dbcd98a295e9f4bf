#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "ocl/env/sim.hpp"

namespace ocl::env {

// Longitudinal dataset replayed as a monitoring run. Built from two CSVs:
//
//   outcomes: unit_id,timestamp_months,outcome      (outcome empty = missing)
//   risks:    unit_id,f1,...,fk
//
// Missing outcomes are linearly interpolated between the nearest observed
// timestamps; the overall observed span is resampled onto T equally spaced
// cycles. Units with fewer than two observed outcomes are dropped with a
// warning. Queries outside a unit's observed range carry the nearest
// observed value flat (flagged).
class ReplayDataset {
public:
    Eigen::Index units() const { return static_cast<Eigen::Index>(unit_ids_.size()); }
    int cycles() const { return T_; }
    double span_lo() const { return span_lo_; }
    double span_hi() const { return span_hi_; }

    const std::vector<std::string>& unit_ids() const { return unit_ids_; }
    const Eigen::MatrixXd& resampled() const { return resampled_; } // T x N
    const Eigen::MatrixXd& risk_factors() const { return risks_; }  // N x k
    const std::vector<std::string>& warnings() const { return warnings_; }

    // Interpolated value for one unit at an arbitrary time; exact at
    // observed timestamps.
    double value_at(Eigen::Index unit, double time) const;

    // Observed (time, value) pairs for one unit, sorted by time.
    const std::vector<std::pair<double, double>>& observed(Eigen::Index unit) const {
        return series_[static_cast<size_t>(unit)];
    }

    friend ReplayDataset load_replay(const std::string& outcomes_csv,
                                     const std::string& risks_csv, int T);

private:
    int T_ = 0;
    double span_lo_ = 0.0;
    double span_hi_ = 0.0;
    std::vector<std::string> unit_ids_;
    std::vector<std::vector<std::pair<double, double>>> series_;
    Eigen::MatrixXd resampled_;
    Eigen::MatrixXd risks_;
    std::vector<std::string> warnings_;
};

ReplayDataset load_replay(const std::string& outcomes_csv, const std::string& risks_csv,
                          int T);

// Environment over a replay dataset: quadratic time basis on the normalized
// cycle index, outcomes from the resampled series, similarity from a heat
// kernel over the risk factors.
class ReplayEnvironment final : public Environment {
public:
    ReplayEnvironment(std::shared_ptr<const ReplayDataset> data, double bandwidth,
                      RewardTransform reward = {}, bool standardize = true);

    Eigen::Index units() const override { return data_->units(); }
    Eigen::Index feature_dim() const override { return 3; }
    int horizon() const override { return data_->cycles(); }
    Eigen::VectorXd features(int t) const override;
    Eigen::VectorXd outcomes(int t) const override;
    const Eigen::MatrixXd& similarity() const override { return W_; }

    const ReplayDataset& dataset() const { return *data_; }

private:
    std::shared_ptr<const ReplayDataset> data_;
    RewardTransform reward_;
    Eigen::MatrixXd W_;
};

} // namespace ocl::env
