#pragma once

#include <Eigen/Dense>

namespace ocl::model {

// Problem dimensions: N units, K canonical models, p features.
struct Dims {
    Eigen::Index N = 0;
    Eigen::Index K = 0;
    Eigen::Index p = 0;
};

// Low-rank population model: K canonical coefficient vectors (columns of Q,
// p x K) mixed per unit by membership vectors (columns of C, K x N). Unit i's
// individualized coefficients are beta_i = Q * c_i.
class PopulationModel {
public:
    PopulationModel(Eigen::MatrixXd Q, Eigen::MatrixXd C);

    Eigen::Index units() const { return C_.cols(); }
    Eigen::Index groups() const { return Q_.cols(); }
    Eigen::Index features() const { return Q_.rows(); }
    Dims dims() const { return {units(), groups(), features()}; }

    const Eigen::MatrixXd& Q() const { return Q_; }
    const Eigen::MatrixXd& C() const { return C_; }

    Eigen::VectorXd unit_coefficients(Eigen::Index unit) const;

    // Full p x N coefficient matrix Q * C.
    Eigen::MatrixXd coefficients() const { return Q_ * C_; }

    // Predicted outcome x' * Q * c_unit. Throws on a bad unit index or a
    // non-finite feature vector.
    double predict(const Eigen::VectorXd& x, Eigen::Index unit) const;

    void set_Q(Eigen::MatrixXd Q);
    void set_C(Eigen::MatrixXd C);

private:
    Eigen::MatrixXd Q_; // p x K
    Eigen::MatrixXd C_; // K x N
};

} // namespace ocl::model
