#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocl/model/als.hpp"
#include "ocl/model/similarity_graph.hpp"
#include "ocl/model/sufficient_stats.hpp"
#include "ocl/policy/exploration.hpp"

namespace ocl::policy {

// A selection policy: scores every unit at cycle start, learns from the
// outcomes of whichever units were selected. Single-writer; the explicit
// update step is the only mutation, so runs replay deterministically.
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string_view name() const = 0;

    // One score per unit from the current statistics. X is p x N.
    virtual Eigen::VectorXd score_all(const Eigen::MatrixXd& X) = 0;

    // Fold in a cycle's revealed outcomes (mask marks the selected units).
    virtual void update(const model::CycleObservation& obs) = 0;

    // Current p x N coefficient estimate.
    virtual Eigen::MatrixXd coefficients() const = 0;
};

// Selection score for one unit from explicit statistics: predicted outcome
// plus the membership-side and canonical-side uncertainty widths,
//   u = c_tilde' X' q + alpha_c sqrt(x_tilde' Qt D^-1 Qt' x_tilde)
//     + alpha_q sqrt(c_tilde' X' A^-1 X c_tilde).
// Radicands are clamped at zero before rooting.
double clucb_score(const model::SufficientStats& stats, const model::Regularizer& reg,
                   const Eigen::VectorXd& x, Eigen::Index unit, const ExplorationParams& params);

struct ClUcbOptions {
    ExplorationParams exploration;
    model::AlsOptions als;
    // Required when exploration.mode == theoretical.
    std::optional<RegretBoundParams> bounds;
};

// Collaborative low-rank UCB. The no-similarity variant is the same policy
// constructed with lambda = 0 (F collapses to the identity).
class ClUcbPolicy : public Policy {
public:
    ClUcbPolicy(std::string name, const model::SimilarityGraph& graph, model::Dims dims,
                double eta1, double eta2, double lambda, ClUcbOptions options,
                std::uint64_t seed);

    std::string_view name() const override { return name_; }
    Eigen::VectorXd score_all(const Eigen::MatrixXd& X) override;
    void update(const model::CycleObservation& obs) override;
    Eigen::MatrixXd coefficients() const override { return Q_cache_ * C_cache_; }

    const model::SufficientStats& stats() const { return stats_; }
    const model::Regularizer& regularizer() const { return reg_; }
    int cycle() const { return cycle_; }

    // Width pair used at the given cycle (exploration diagnostics).
    std::pair<double, double> current_alphas() const;

    // Exploitation term alone, one prediction per unit.
    Eigen::VectorXd predictions(const Eigen::MatrixXd& X) const;

    // Prediction-uncertainty band per unit: alpha_c w_c + alpha_q w_q, the
    // quantity the coverage guarantee bounds |y* - y_hat| by.
    Eigen::VectorXd uncertainty_band(const Eigen::MatrixXd& X) const;

private:
    void refresh();
    void width_terms(const Eigen::MatrixXd& X, Eigen::VectorXd& w_q,
                     Eigen::VectorXd& w_c) const;

    std::string name_;
    model::Dims dims_;
    model::Regularizer reg_;
    model::SufficientStats stats_;
    ClUcbOptions opt_;
    int cycle_ = 0;
    Eigen::LLT<Eigen::MatrixXd> A_llt_;
    Eigen::LLT<Eigen::MatrixXd> D_llt_;
    Eigen::MatrixXd Q_cache_; // p x K
    Eigen::MatrixXd C_cache_; // K x N
};

// Disjoint per-unit ridge UCB; no information sharing between units.
class LinUcbPolicy : public Policy {
public:
    LinUcbPolicy(std::string name, model::Dims dims, double eta, double alpha);

    std::string_view name() const override { return name_; }
    Eigen::VectorXd score_all(const Eigen::MatrixXd& X) override;
    void update(const model::CycleObservation& obs) override;
    Eigen::MatrixXd coefficients() const override;

    const Eigen::MatrixXd& A(Eigen::Index unit) const { return A_[static_cast<size_t>(unit)]; }
    const Eigen::VectorXd& b(Eigen::Index unit) const { return b_[static_cast<size_t>(unit)]; }

private:
    std::string name_;
    model::Dims dims_;
    double alpha_;
    std::vector<Eigen::MatrixXd> A_; // per unit, p x p
    std::vector<Eigen::VectorXd> b_; // per unit, p
};

// Stacked ridge over all units with a Laplacian-coupled prior
// A0 = eta * ((I + lambda E) ⊗ I_p); unit contexts embed as block
// coordinates of the Np system. lambda = 0 reduces to LinUcb.
class GobLinPolicy : public Policy {
public:
    GobLinPolicy(std::string name, const model::SimilarityGraph& graph, model::Dims dims,
                 double eta, double lambda, double alpha);

    std::string_view name() const override { return name_; }
    Eigen::VectorXd score_all(const Eigen::MatrixXd& X) override;
    void update(const model::CycleObservation& obs) override;
    Eigen::MatrixXd coefficients() const override;

    const Eigen::MatrixXd& A() const { return A_; }
    const Eigen::VectorXd& b() const { return b_; }

private:
    void refresh();

    std::string name_;
    model::Dims dims_;
    double alpha_;
    Eigen::MatrixXd A_; // Np x Np
    Eigen::VectorXd b_; // Np
    Eigen::LLT<Eigen::MatrixXd> A_llt_;
    Eigen::VectorXd theta_; // Np
};

} // namespace ocl::policy
