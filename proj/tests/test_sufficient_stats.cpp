#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "ocl/errors.hpp"
#include "ocl/model/sufficient_stats.hpp"
#include "ocl/model/transforms.hpp"

using namespace ocl::model;

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

TEST_CASE("zero feature vector leaves all statistics unchanged") {
    auto graph = random_graph(3, 5);
    Regularizer reg(0.3, 0.3, 0.1, graph, 2);
    SufficientStats stats(reg, {3, 2, 2});
    stats.set_q_hat(Eigen::VectorXd::Ones(4));
    stats.set_c_tilde_hat(Eigen::VectorXd::Ones(6));
    const Eigen::MatrixXd A0 = stats.A();
    const Eigen::MatrixXd D0 = stats.D();
    stats.accumulate(reg, 0, 1, Eigen::VectorXd::Zero(2), 0.0);
    CHECK(stats.A().isApprox(A0));
    CHECK(stats.D().isApprox(D0));
    CHECK(stats.b().isZero(0.0));
    CHECK(stats.d().isZero(0.0));
    CHECK(stats.history().size() == 1);
}

TEST_CASE("scalar expansion of the rank-one update") {
    // K = N = p = 1, c_tilde = 1, x = 2, y = 3: A = eta1 + 4, b = 6.
    const double eta1 = 0.7;
    SimilarityGraph graph = SimilarityGraph::empty(1);
    Regularizer reg(eta1, 0.3, 0.0, graph, 1);
    SufficientStats stats(reg, {1, 1, 1});
    stats.set_c_tilde_hat(Eigen::VectorXd::Ones(1));
    Eigen::VectorXd x(1);
    x << 2.0;
    stats.accumulate(reg, 0, 0, x, 3.0);
    CHECK(stats.A()(0, 0) == doctest::Approx(eta1 + 4.0));
    CHECK(stats.b()(0) == doctest::Approx(6.0));
}

TEST_CASE("incremental statistics match a from-scratch batch oracle") {
    const int N = 4, K = 2, p = 3;
    auto graph = random_graph(N, 9);
    Regularizer reg(0.3, 0.4, 0.6, graph, K);
    SufficientStats stats(reg, {N, K, p});

    std::mt19937_64 rng(10);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd Q(p, K), C(K, N);
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < K; ++c) Q(r, c) = nd(rng);
    for (int r = 0; r < K; ++r)
        for (int c = 0; c < N; ++c) C(r, c) = nd(rng);
    stats.set_snapshot(canonical_to_vec(Q), membership_to_tilde(reg, C));

    // five observations with the fixed snapshot
    struct Obs {
        int unit;
        Eigen::VectorXd x;
        double y;
    };
    std::vector<Obs> observations;
    for (int s = 0; s < 5; ++s) {
        Eigen::VectorXd x(p);
        for (int j = 0; j < p; ++j) x(j) = nd(rng);
        observations.push_back({s % N, x, nd(rng)});
    }
    for (const auto& o : observations) stats.accumulate(reg, 0, o.unit, o.x, o.y);

    // batch oracle: explicit sums of outer products of c_i ⊗ x built by loops
    Eigen::MatrixXd A = 0.3 * Eigen::MatrixXd::Identity(K * p, K * p);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(K * p);
    for (const auto& o : observations) {
        Eigen::VectorXd phi(K * p);
        for (int k = 0; k < K; ++k)
            for (int j = 0; j < p; ++j) phi(k * p + j) = C(k, o.unit) * o.x(j);
        A += phi * phi.transpose();
        b += phi * o.y;
    }
    CHECK((stats.A() - A).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((stats.b() - b).cwiseAbs().maxCoeff() < 1e-10);

    // membership side against an explicit Q_tilde build
    const Eigen::MatrixXd Fki = reg.F_kron_half_inv();
    Eigen::MatrixXd D = 0.4 * Eigen::MatrixXd::Identity(N * K, N * K);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(N * K);
    for (const auto& o : observations) {
        Eigen::VectorXd raw = Eigen::VectorXd::Zero(N * K);
        for (int k = 0; k < K; ++k) {
            double g = 0.0;
            for (int j = 0; j < p; ++j) g += Q(j, k) * o.x(j);
            raw(o.unit * K + k) = g;
        }
        const Eigen::VectorXd psi = Fki.transpose() * raw;
        D += psi * psi.transpose();
        d += psi * o.y;
    }
    CHECK((stats.D() - D).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((stats.d() - d).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("A and D stay symmetric positive definite under random updates") {
    const int N = 5, K = 2, p = 2;
    const double eta1 = 0.25, eta2 = 0.35;
    auto graph = random_graph(N, 14);
    Regularizer reg(eta1, eta2, 0.3, graph, K);
    SufficientStats stats(reg, {N, K, p});

    std::mt19937_64 rng(15);
    std::normal_distribution<double> nd;
    stats.set_q_hat(Eigen::VectorXd::NullaryExpr(K * p, [&](Eigen::Index) { return nd(rng); }));
    stats.set_c_tilde_hat(
        Eigen::VectorXd::NullaryExpr(N * K, [&](Eigen::Index) { return nd(rng); }));

    std::uniform_int_distribution<int> unit(0, N - 1);
    for (int s = 0; s < 40; ++s) {
        Eigen::VectorXd x(p);
        for (int j = 0; j < p; ++j) x(j) = nd(rng);
        stats.accumulate(reg, s, unit(rng), x, nd(rng));

        if (s % 10 == 9) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(stats.A());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ed(stats.D());
            CHECK(ea.eigenvalues().minCoeff() >= std::min(eta1, eta2) - 1e-9);
            CHECK(ed.eigenvalues().minCoeff() >= std::min(eta1, eta2) - 1e-9);
            CHECK(stats.A().isApprox(stats.A().transpose(), 1e-12));
            CHECK(stats.D().isApprox(stats.D().transpose(), 1e-12));
        }
    }
}

TEST_CASE("dimension mismatches are rejected") {
    auto graph = random_graph(2, 16);
    Regularizer reg(0.3, 0.3, 0.0, graph, 1);
    SufficientStats stats(reg, {2, 1, 2});
    CHECK_THROWS_AS(stats.accumulate(reg, 0, 5, Eigen::VectorXd::Zero(2), 1.0),
                    ocl::DimensionError);
    CHECK_THROWS_AS(stats.accumulate(reg, 0, 0, Eigen::VectorXd::Zero(3), 1.0),
                    ocl::DimensionError);
    Eigen::VectorXd bad(2);
    bad << 1.0, std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(stats.accumulate(reg, 0, 0, bad, 1.0), ocl::DimensionError);
    CHECK_THROWS_AS(stats.set_q_hat(Eigen::VectorXd::Zero(5)), ocl::DimensionError);
}
