#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "ocl/errors.hpp"
#include "ocl/model/regularizer.hpp"
#include "ocl/model/transforms.hpp"

using ocl::model::Regularizer;
using ocl::model::SimilarityGraph;

namespace {
SimilarityGraph random_graph(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) W(i, j) = W(j, i) = unif(rng);
    return SimilarityGraph(W);
}
} // namespace

TEST_CASE("F reproduces the combined membership penalty") {
    const int N = 6, K = 3;
    auto graph = random_graph(N, 21);
    const double eta2 = 0.3, lambda = 0.7;
    Regularizer reg(0.3, eta2, lambda, graph, K);

    std::mt19937_64 rng(22);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd C(K, N);
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < N; ++i) C(k, i) = nd(rng);

    const Eigen::VectorXd c_tilde = ocl::model::membership_to_tilde(reg, C);
    const double lhs = eta2 * c_tilde.squaredNorm();
    const double rhs = eta2 * C.squaredNorm() +
                       lambda * (C * graph.laplacian() * C.transpose()).trace();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("square root identities") {
    const int N = 5, K = 2;
    auto graph = random_graph(N, 33);
    Regularizer reg(0.3, 0.3, 0.2, graph, K);

    const Eigen::MatrixXd Fk = reg.F_kron();
    const Eigen::MatrixXd Fh = reg.F_kron_half();
    const Eigen::MatrixXd Fhi = reg.F_kron_half_inv();
    CHECK((Fh * Fh - Fk).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((Fh * Fhi - Eigen::MatrixXd::Identity(N * K, N * K)).cwiseAbs().maxCoeff() < 1e-8);

    // round-trip on vectors
    std::mt19937_64 rng(34);
    std::normal_distribution<double> nd;
    Eigen::VectorXd v(N * K);
    for (int i = 0; i < N * K; ++i) v(i) = nd(rng);
    const Eigen::VectorXd round = reg.apply_kron_half_inv(reg.apply_kron_half(v));
    CHECK((round - v).cwiseAbs().maxCoeff() < 1e-8);

    // the fast kron-apply agrees with the materialized product
    CHECK((reg.apply_kron_half(v) - Fh * v).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("F is positive definite when eta2 > 0") {
    auto graph = random_graph(7, 40);
    Regularizer reg(0.3, 0.05, 1.5, graph, 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reg.F());
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
    CHECK(reg.trace_F_inv() ==
          doctest::Approx(eig.eigenvalues().cwiseInverse().sum()).epsilon(1e-10));
}

TEST_CASE("lambda = 0 collapses F to the identity") {
    auto graph = random_graph(4, 50);
    Regularizer reg(0.3, 0.3, 0.0, graph, 3);
    CHECK(reg.F().isIdentity(1e-14));
    CHECK(reg.F_half().isIdentity(1e-8));
    CHECK(reg.trace_F_inv() == doctest::Approx(4.0));
}

TEST_CASE("invalid weights are rejected") {
    auto graph = random_graph(3, 60);
    CHECK_THROWS_AS(Regularizer(-0.1, 0.3, 0.0, graph, 1), ocl::ConfigError);
    CHECK_THROWS_AS(Regularizer(0.3, 0.0, 0.5, graph, 1), ocl::ConfigError);
    CHECK_THROWS_AS(Regularizer(0.3, 0.3, 0.1, graph, 0), ocl::ConfigError);
}
