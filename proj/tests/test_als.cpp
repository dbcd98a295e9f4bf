#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "ocl/errors.hpp"
#include "ocl/model/als.hpp"
#include "ocl/model/transforms.hpp"

using namespace ocl::model;

namespace {

struct Fixture {
    SimilarityGraph graph;
    Regularizer reg;
    Dims dims;
};

Fixture make_fixture(int N, int K, int p, unsigned seed, double eta1 = 0.3, double eta2 = 0.3,
                     double lambda = 0.4) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) W(i, j) = W(j, i) = unif(rng);
    SimilarityGraph graph(W);
    Regularizer reg(eta1, eta2, lambda, graph, K);
    return {std::move(graph), std::move(reg), Dims{N, K, p}};
}

Eigen::MatrixXd random_matrix(int r, int c, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd M(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) M(i, j) = nd(rng);
    return M;
}

// Ridge least squares via QR on the augmented system [rows; sqrt(ridge) I].
Eigen::VectorXd ridge_qr(const Eigen::MatrixXd& rows, const Eigen::VectorXd& rhs,
                         double ridge) {
    const Eigen::Index n = rows.cols();
    Eigen::MatrixXd Aug(rows.rows() + n, n);
    Aug.topRows(rows.rows()) = rows;
    Aug.bottomRows(n) = std::sqrt(ridge) * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(rows.rows() + n);
    y.head(rows.rows()) = rhs;
    return Aug.colPivHouseholderQr().solve(y);
}

} // namespace

TEST_CASE("zero right-hand sides give zero solutions") {
    auto fx = make_fixture(3, 2, 2, 1);
    SufficientStats stats(fx.reg, fx.dims);
    CHECK(solve_canonical(stats).isZero(0.0));
    CHECK(solve_membership_tilde(stats).isZero(0.0));
    CHECK(solve_membership(stats, fx.reg).isZero(0.0));
}

TEST_CASE("one-dimensional ridge") {
    // x = 1, y = 2, eta1 = 1: A = 2, b = 2, q = 1.
    SimilarityGraph graph = SimilarityGraph::empty(1);
    Regularizer reg(1.0, 1.0, 0.0, graph, 1);
    SufficientStats stats(reg, {1, 1, 1});
    stats.set_c_tilde_hat(Eigen::VectorXd::Ones(1));
    Eigen::VectorXd x(1);
    x << 1.0;
    stats.accumulate(reg, 0, 0, x, 2.0);
    CHECK(stats.A()(0, 0) == doctest::Approx(2.0));
    CHECK(stats.b()(0) == doctest::Approx(2.0));
    CHECK(solve_canonical(stats)(0) == doctest::Approx(1.0));
}

TEST_CASE("canonical solve matches a dense ridge oracle (fixed snapshot)") {
    const int N = 6, K = 2, p = 3, T = 20;
    auto fx = make_fixture(N, K, p, 42);
    SufficientStats stats(fx.reg, fx.dims);

    std::mt19937_64 rng(43);
    const Eigen::MatrixXd Q = random_matrix(p, K, rng);
    const Eigen::MatrixXd C = random_matrix(K, N, rng);
    stats.set_snapshot(canonical_to_vec(Q), membership_to_tilde(fx.reg, C));

    std::vector<Eigen::VectorXd> rows;
    std::vector<double> ys;
    std::normal_distribution<double> nd;
    std::uniform_int_distribution<int> coin(0, 1);
    for (int t = 0; t < T; ++t) {
        for (int i = 0; i < N; ++i) {
            if (coin(rng) == 0) continue; // random monitored subset
            Eigen::VectorXd x(p);
            for (int j = 0; j < p; ++j) x(j) = nd(rng);
            const double y = nd(rng);
            stats.accumulate(fx.reg, t, i, x, y);
            // oracle design row c_i ⊗ x by explicit loops
            Eigen::VectorXd phi(K * p);
            for (int k = 0; k < K; ++k)
                for (int j = 0; j < p; ++j) phi(k * p + j) = C(k, i) * x(j);
            rows.push_back(phi);
            ys.push_back(y);
        }
    }
    REQUIRE(!rows.empty());
    Eigen::MatrixXd R(rows.size(), K * p);
    Eigen::VectorXd y(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) {
        R.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
        y(static_cast<Eigen::Index>(r)) = ys[r];
    }
    const Eigen::VectorXd oracle = ridge_qr(R, y, fx.reg.eta1());
    const Eigen::VectorXd mine = solve_canonical(stats);
    CHECK((mine - oracle).norm() <= 1e-8 * std::max(1.0, oracle.norm()));
}

TEST_CASE("membership solve matches a dense ridge oracle (fixed snapshot)") {
    const int N = 5, K = 2, p = 3, T = 15;
    const double eta2 = 0.35, lambda = 0.8;
    auto fx = make_fixture(N, K, p, 52, 0.3, eta2, lambda);
    SufficientStats stats(fx.reg, fx.dims);

    std::mt19937_64 rng(53);
    const Eigen::MatrixXd Q = random_matrix(p, K, rng);
    const Eigen::MatrixXd C = random_matrix(K, N, rng);
    stats.set_snapshot(canonical_to_vec(Q), membership_to_tilde(fx.reg, C));

    // independent F^{-1/2}: eigendecompose F = I + (lambda/eta2) E in test code
    const Eigen::MatrixXd F = Eigen::MatrixXd::Identity(N, N) +
                              (lambda / eta2) * fx.graph.laplacian();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(F);
    Eigen::MatrixXd F_half_inv = eig.eigenvectors() *
                                 eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                 eig.eigenvectors().transpose();

    std::vector<Eigen::VectorXd> rows;
    std::vector<double> ys;
    std::normal_distribution<double> nd;
    std::uniform_int_distribution<int> coin(0, 1);
    for (int t = 0; t < T; ++t) {
        for (int i = 0; i < N; ++i) {
            if (coin(rng) == 0) continue;
            Eigen::VectorXd x(p);
            for (int j = 0; j < p; ++j) x(j) = nd(rng);
            const double y = nd(rng);
            stats.accumulate(fx.reg, t, i, x, y);
            // oracle row: (F^{-1/2} e_i) ⊗ (Q' x) by explicit loops
            Eigen::VectorXd g(K);
            for (int k = 0; k < K; ++k) {
                g(k) = 0.0;
                for (int j = 0; j < p; ++j) g(k) += Q(j, k) * x(j);
            }
            Eigen::VectorXd psi(N * K);
            for (int u = 0; u < N; ++u)
                for (int k = 0; k < K; ++k) psi(u * K + k) = F_half_inv(u, i) * g(k);
            rows.push_back(psi);
            ys.push_back(y);
        }
    }
    REQUIRE(!rows.empty());
    Eigen::MatrixXd R(rows.size(), N * K);
    Eigen::VectorXd y(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) {
        R.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
        y(static_cast<Eigen::Index>(r)) = ys[r];
    }
    const Eigen::VectorXd oracle = ridge_qr(R, y, eta2);
    const Eigen::VectorXd mine = solve_membership_tilde(stats);
    CHECK((mine - oracle).norm() <= 1e-8 * std::max(1.0, oracle.norm()));
}

TEST_CASE("lambda = 0 membership solve is independent per-unit ridge") {
    const int N = 4, K = 2, p = 3;
    auto fx = make_fixture(N, K, p, 62, 0.3, 0.5, 0.0);
    SufficientStats stats(fx.reg, fx.dims);

    std::mt19937_64 rng(63);
    const Eigen::MatrixXd Q = random_matrix(p, K, rng);
    const Eigen::MatrixXd C = random_matrix(K, N, rng);
    stats.set_snapshot(canonical_to_vec(Q), membership_to_tilde(fx.reg, C));

    std::vector<std::vector<Eigen::VectorXd>> gs(N);
    std::vector<std::vector<double>> ys(N);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 12; ++t) {
        for (int i = 0; i < N; ++i) {
            Eigen::VectorXd x(p);
            for (int j = 0; j < p; ++j) x(j) = nd(rng);
            const double y = nd(rng);
            stats.accumulate(fx.reg, t, i, x, y);
            gs[static_cast<size_t>(i)].push_back(Q.transpose() * x);
            ys[static_cast<size_t>(i)].push_back(y);
        }
    }
    const Eigen::MatrixXd Chat = solve_membership(stats, fx.reg);
    for (int i = 0; i < N; ++i) {
        Eigen::MatrixXd Ai = 0.5 * Eigen::MatrixXd::Identity(K, K);
        Eigen::VectorXd bi = Eigen::VectorXd::Zero(K);
        for (size_t s = 0; s < gs[static_cast<size_t>(i)].size(); ++s) {
            const auto& g = gs[static_cast<size_t>(i)][s];
            Ai += g * g.transpose();
            bi += g * ys[static_cast<size_t>(i)][s];
        }
        const Eigen::VectorXd ci = Ai.ldlt().solve(bi);
        CHECK((Chat.col(i) - ci).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("singular systems raise errors that name the ridge parameter") {
    auto fx = make_fixture(2, 1, 2, 72, 1e-18, 1e-18, 0.0);
    SufficientStats stats(fx.reg, fx.dims);
    stats.set_c_tilde_hat(Eigen::VectorXd::Ones(2));
    Eigen::VectorXd q(2);
    q << 1e6, 0.0;
    stats.set_q_hat(q);
    Eigen::VectorXd x(2);
    x << 1e6, 1.0;
    stats.accumulate(fx.reg, 0, 0, x, 1.0);
    CHECK_THROWS_WITH_AS(static_cast<void>(solve_canonical(stats)),
                         doctest::Contains("eta1"), ocl::IllConditionedError);
    CHECK_THROWS_WITH_AS(static_cast<void>(solve_membership_tilde(stats)),
                         doctest::Contains("eta2"), ocl::IllConditionedError);
}

TEST_CASE("als_fit with no observations is a fixed point") {
    auto fx = make_fixture(3, 2, 2, 82);
    SufficientStats stats(fx.reg, fx.dims);
    std::mt19937_64 rng(83);
    stats.set_snapshot(vec(random_matrix(2, 2, rng)),
                       membership_to_tilde(fx.reg, random_matrix(2, 3, rng)));
    const Eigen::VectorXd q0 = stats.q_hat();
    const Eigen::VectorXd c0 = stats.c_tilde_hat();

    CycleObservation obs;
    obs.cycle = 0;
    obs.X = Eigen::MatrixXd::Zero(2, 3);
    obs.y = Eigen::VectorXd::Zero(3);
    obs.mask = {0, 0, 0};
    const AlsResult res = als_fit(stats, fx.reg, obs, {});
    CHECK(res.inner_iters == 0);
    CHECK(stats.q_hat().isApprox(q0));
    CHECK(stats.c_tilde_hat().isApprox(c0));
    CHECK(stats.history().empty());
}

TEST_CASE("noiseless rank-1 model is recovered after 200 cycles") {
    const int N = 4, K = 1, p = 2, T = 200;
    auto fx = make_fixture(N, K, p, 92, 1e-5, 1e-5, 0.0);

    std::mt19937_64 rng(93);
    std::normal_distribution<double> nd;
    Eigen::VectorXd q_true(p);
    q_true << 1.2, -0.7;
    Eigen::VectorXd c_true(N);
    c_true << 0.8, -1.4, 2.2, 0.5;
    const Eigen::MatrixXd beta_true = q_true * c_true.transpose(); // p x N

    SufficientStats stats(fx.reg, fx.dims);
    stats.set_c_tilde_hat(Eigen::VectorXd::Ones(N)); // rough start
    AlsOptions opt;
    opt.mode = AlsMode::full_refit;
    opt.max_inner_iters = 2;
    for (int t = 0; t < T; ++t) {
        CycleObservation obs;
        obs.cycle = t;
        obs.X.resize(p, N);
        obs.y.resize(N);
        obs.mask.assign(N, 1);
        for (int i = 0; i < N; ++i) {
            Eigen::VectorXd x(p);
            for (int j = 0; j < p; ++j) x(j) = nd(rng);
            obs.X.col(i) = x;
            obs.y(i) = x.dot(beta_true.col(i));
        }
        als_fit(stats, fx.reg, obs, opt);
    }
    const Eigen::MatrixXd beta_hat = stats.Q_hat() * stats.C_hat(fx.reg);
    CHECK((beta_hat - beta_true).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("snapshot satisfies the normal equations after a fit") {
    const int N = 4, K = 2, p = 3;
    auto fx = make_fixture(N, K, p, 97);
    SufficientStats stats(fx.reg, fx.dims);
    std::mt19937_64 rng(98);
    stats.set_c_tilde_hat(membership_to_tilde(fx.reg, random_matrix(K, N, rng)));

    for (int t = 0; t < 5; ++t) {
        CycleObservation obs;
        obs.cycle = t;
        obs.X = random_matrix(p, N, rng);
        obs.y = random_matrix(N, 1, rng).col(0);
        obs.mask.assign(N, 1);
        als_fit(stats, fx.reg, obs, {});
        const double rq = (stats.A() * stats.q_hat() - stats.b()).norm() /
                          std::max(1.0, stats.b().norm());
        const double rc = (stats.D() * stats.c_tilde_hat() - stats.d()).norm() /
                          std::max(1.0, stats.d().norm());
        CHECK(rq <= 1e-8);
        CHECK(rc <= 1e-8);
    }
}

TEST_CASE("objective decreases monotonically across inner refit iterations") {
    const int N = 5, K = 2, p = 3;
    auto fx = make_fixture(N, K, p, 102);
    SufficientStats stats(fx.reg, fx.dims);
    std::mt19937_64 rng(103);
    stats.set_snapshot(vec(random_matrix(p, K, rng)),
                       membership_to_tilde(fx.reg, random_matrix(K, N, rng)));

    CycleObservation obs;
    obs.cycle = 0;
    obs.X = random_matrix(p, N, rng);
    obs.y = random_matrix(N, 1, rng).col(0);
    obs.mask.assign(N, 1);

    AlsOptions opt;
    opt.mode = AlsMode::full_refit;
    opt.max_inner_iters = 10;
    opt.track_objective = true;
    const AlsResult res = als_fit(stats, fx.reg, obs, opt);
    REQUIRE(res.objective_trace.size() == 11);
    for (size_t i = 1; i < res.objective_trace.size(); ++i) {
        CHECK(res.objective_trace[i] <=
              res.objective_trace[i - 1] +
                  1e-9 * std::max(1.0, std::abs(res.objective_trace[i - 1])));
    }
}

TEST_CASE("objective evaluator") {
    const int N = 3, K = 2, p = 2;
    auto fx = make_fixture(N, K, p, 112, 0.3, 0.3, 0.5);

    SUBCASE("zero parameters, empty history") {
        CHECK(objective(Eigen::MatrixXd::Zero(p, K), Eigen::MatrixXd::Zero(K, N), {},
                        fx.reg) == doctest::Approx(0.0));
    }
    SUBCASE("zero parameters reduce to sum of squared outcomes") {
        std::vector<HistoryEntry> history;
        history.push_back({0, 0, Eigen::VectorXd::Ones(p), 1.0});
        history.push_back({1, 2, Eigen::VectorXd::Ones(p), 2.0});
        CHECK(objective(Eigen::MatrixXd::Zero(p, K), Eigen::MatrixXd::Zero(K, N), history,
                        fx.reg) == doctest::Approx(5.0));
    }
    SUBCASE("random instance matches the term-by-term oracle") {
        std::mt19937_64 rng(113);
        std::normal_distribution<double> nd;
        const Eigen::MatrixXd Q = random_matrix(p, K, rng);
        const Eigen::MatrixXd C = random_matrix(K, N, rng);
        std::vector<HistoryEntry> history;
        for (int s = 0; s < 7; ++s) {
            Eigen::VectorXd x(p);
            for (int j = 0; j < p; ++j) x(j) = nd(rng);
            history.push_back({s, s % N, x, nd(rng)});
        }
        double expected = 0.0;
        for (const auto& e : history) {
            double pred = 0.0;
            for (int k = 0; k < K; ++k) {
                double g = 0.0;
                for (int j = 0; j < p; ++j) g += e.x(j) * Q(j, k);
                pred += C(k, e.unit) * g;
            }
            expected += (pred - e.y) * (pred - e.y);
        }
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < K; ++k) expected += 0.3 * Q(j, k) * Q(j, k);
        for (int k = 0; k < K; ++k)
            for (int i = 0; i < N; ++i) expected += 0.3 * C(k, i) * C(k, i);
        const Eigen::MatrixXd& E = fx.graph.laplacian();
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                expected += 0.5 * E(i, j) * C.col(i).dot(C.col(j));
        CHECK(objective(Q, C, history, fx.reg) ==
              doctest::Approx(expected).epsilon(1e-10));
    }
}
