#include "ocl/model/population_model.hpp"

#include "ocl/errors.hpp"

namespace ocl::model {

PopulationModel::PopulationModel(Eigen::MatrixXd Q, Eigen::MatrixXd C)
    : Q_(std::move(Q)), C_(std::move(C)) {
    if (Q_.cols() != C_.rows()) {
        throw DimensionError("PopulationModel: Q has " + std::to_string(Q_.cols()) +
                             " columns but C has " + std::to_string(C_.rows()) + " rows");
    }
    if (Q_.rows() < 1 || Q_.cols() < 1 || C_.cols() < 1) {
        throw DimensionError("PopulationModel: dimensions must satisfy p,K,N >= 1");
    }
}

Eigen::VectorXd PopulationModel::unit_coefficients(Eigen::Index unit) const {
    if (unit < 0 || unit >= units()) {
        throw DimensionError("unit index " + std::to_string(unit) + " out of range [0," +
                             std::to_string(units()) + ")");
    }
    return Q_ * C_.col(unit);
}

double PopulationModel::predict(const Eigen::VectorXd& x, Eigen::Index unit) const {
    if (unit < 0 || unit >= units()) {
        throw DimensionError("predict: unit index " + std::to_string(unit) + " out of range [0," +
                             std::to_string(units()) + ")");
    }
    if (x.size() != features()) {
        throw DimensionError("predict: feature vector has length " + std::to_string(x.size()) +
                             ", expected " + std::to_string(features()));
    }
    if (!x.allFinite()) {
        throw DimensionError("predict: feature vector has non-finite entries");
    }
    return x.dot(Q_ * C_.col(unit));
}

void PopulationModel::set_Q(Eigen::MatrixXd Q) {
    if (Q.rows() != Q_.rows() || Q.cols() != Q_.cols()) {
        throw DimensionError("set_Q: shape mismatch");
    }
    Q_ = std::move(Q);
}

void PopulationModel::set_C(Eigen::MatrixXd C) {
    if (C.rows() != C_.rows() || C.cols() != C_.cols()) {
        throw DimensionError("set_C: shape mismatch");
    }
    C_ = std::move(C);
}

} // namespace ocl::model
