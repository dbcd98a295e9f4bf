#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "ocl/errors.hpp"
#include "ocl/model/similarity_graph.hpp"

using ocl::model::build_laplacian;
using ocl::model::SimilarityGraph;

TEST_CASE("two-node graph: degree minus adjacency") {
    Eigen::MatrixXd W(2, 2);
    W << 0, 1, 1, 0;
    Eigen::MatrixXd E = build_laplacian(W);
    Eigen::MatrixXd expected(2, 2);
    expected << 1, -1, -1, 1;
    CHECK((E - expected).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("empty graph has zero laplacian") {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(3, 3);
    CHECK(build_laplacian(W).isZero(0.0));
}

TEST_CASE("random nonnegative graph laplacian is PSD (eigendecomposition oracle)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd W = Eigen::MatrixXd::Zero(5, 5);
        for (int i = 0; i < 5; ++i) {
            for (int j = i + 1; j < 5; ++j) W(i, j) = W(j, i) = unif(rng);
        }
        Eigen::MatrixXd E = build_laplacian(W);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(E);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
        // each row sums to zero
        CHECK(E.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(E.isApprox(E.transpose()));
    }
}

TEST_CASE("non-square input is a dimension error") {
    CHECK_THROWS_AS(build_laplacian(Eigen::MatrixXd::Zero(2, 3)), ocl::DimensionError);
}

TEST_CASE("precondition repairs are applied and recorded") {
    SUBCASE("asymmetry is symmetrized") {
        Eigen::MatrixXd W(2, 2);
        W << 0, 2, 0, 0;
        std::vector<std::string> warnings;
        Eigen::MatrixXd E = build_laplacian(W, &warnings);
        CHECK(E(0, 1) == doctest::Approx(-1.0));
        CHECK(warnings.size() == 1);
    }
    SUBCASE("nonzero diagonal is zeroed") {
        Eigen::MatrixXd W(2, 2);
        W << 3, 1, 1, 3;
        std::vector<std::string> warnings;
        Eigen::MatrixXd E = build_laplacian(W, &warnings);
        CHECK(E(0, 0) == doctest::Approx(1.0));
        CHECK(warnings.size() == 1);
    }
    SUBCASE("negative weights are clamped") {
        Eigen::MatrixXd W(3, 3);
        W << 0, -1, 1, -1, 0, 0.5, 1, 0.5, 0;
        std::vector<std::string> warnings;
        Eigen::MatrixXd E = build_laplacian(W, &warnings);
        CHECK(E(0, 1) == doctest::Approx(0.0));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(E);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
        CHECK(warnings.size() == 1);
    }
}

TEST_CASE("SimilarityGraph stores the sanitized pair") {
    Eigen::MatrixXd W(2, 2);
    W << 1, -4, -4, 1;
    SimilarityGraph g(W);
    CHECK(g.similarity()(0, 1) == doctest::Approx(0.0));
    CHECK(g.similarity().diagonal().isZero(0.0));
    CHECK(g.laplacian().isZero(0.0));
    CHECK(g.warnings().size() == 2);
    CHECK(SimilarityGraph::empty(4).laplacian().isZero(0.0));
}
