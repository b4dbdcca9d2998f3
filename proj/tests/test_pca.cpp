#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "causalnet/pca.hpp"
#include "causalnet/rng.hpp"
#include "test_util.hpp"

using namespace causalnet;
using testutil::make_graph;

namespace {

concept_net valued(const std::vector<std::string>& nodes,
                   const std::vector<std::int64_t>& weights, std::string label = "g") {
    concept_net g(nodes);
    g.weights = weights;
    g.stratum.kind = stratum_kind::role_group;
    g.stratum.group = std::move(label);
    return g;
}

const std::vector<std::string> n3 = {"A", "B", "C"};

}  // namespace

TEST_CASE("jacobi eigendecomposition on known matrices") {
    dense_matrix I = dense_matrix::identity(3);
    const auto ei = jacobi_eigen_sym(I);
    for (double v : ei.values)
        CHECK(v == Catch::Approx(1.0));

    dense_matrix D(3, 3);
    D(0, 0) = 5;
    D(1, 1) = 2;
    D(2, 2) = 1;
    const auto ed = jacobi_eigen_sym(D);
    CHECK(ed.values[0] == Catch::Approx(5.0));
    CHECK(ed.values[1] == Catch::Approx(2.0));
    CHECK(ed.values[2] == Catch::Approx(1.0));
    CHECK(ed.vectors(0, 0) == Catch::Approx(1.0));
    CHECK(ed.vectors(1, 1) == Catch::Approx(1.0));

    dense_matrix M(2, 2);
    M(0, 0) = 2;
    M(0, 1) = 1;
    M(1, 0) = 1;
    M(1, 1) = 2;
    const auto em = jacobi_eigen_sym(M);
    CHECK(em.values[0] == Catch::Approx(3.0));
    CHECK(em.values[1] == Catch::Approx(1.0));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(em.vectors(0, 0) == Catch::Approx(s));
    CHECK(em.vectors(1, 0) == Catch::Approx(s));
    CHECK(em.vectors(0, 1) == Catch::Approx(s));
    CHECK(em.vectors(1, 1) == Catch::Approx(-s));
}

TEST_CASE("jacobi rejects asymmetric input") {
    dense_matrix A(2, 2);
    A(0, 1) = 1.0;
    A(1, 0) = 0.5;
    CHECK_THROWS_AS(jacobi_eigen_sym(A), std::invalid_argument);
}

TEST_CASE("jacobi eigenvectors are orthonormal and reconstruct the matrix") {
    rng_t rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t p = 2 + rng.below(5);
        dense_matrix A(p, p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i; j < p; ++j)
                A(i, j) = A(j, i) = rng.normal();
        const auto e = jacobi_eigen_sym(A);
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b) {
                double dot = 0.0;
                for (std::size_t i = 0; i < p; ++i)
                    dot += e.vectors(i, a) * e.vectors(i, b);
                CHECK(dot == Catch::Approx(a == b ? 1.0 : 0.0).margin(1e-10));
            }
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                double r = 0.0;
                for (std::size_t k = 0; k < p; ++k)
                    r += e.vectors(i, k) * e.values[k] * e.vectors(j, k);
                CHECK(r == Catch::Approx(A(i, j)).margin(1e-8));
            }
        for (std::size_t k = 1; k < p; ++k)
            CHECK(e.values[k - 1] >= e.values[k]);
    }
}

TEST_CASE("graph covariance on hand-computed vectors") {
    // two identical graphs: every entry equals the cell variance
    const auto g1 = valued(n3, {0, 2, 4, 1, 0, 3, 5, 2, 0}, "a");
    const auto g2 = valued(n3, {0, 2, 4, 1, 0, 3, 5, 2, 0}, "b");
    const auto C = graph_covariance({g1, g2});
    // off-diagonal cells: 2 4 1 3 5 2; mean = 17/6
    const double mean = 17.0 / 6.0;
    double var = 0.0;
    for (double v : {2.0, 4.0, 1.0, 3.0, 5.0, 2.0})
        var += (v - mean) * (v - mean);
    var /= 5.0;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(C(i, j) == Catch::Approx(var).margin(1e-12));

    // a constant graph zeroes its row and column
    const auto flat = valued(n3, {7, 3, 3, 3, 7, 3, 3, 3, 7}, "flat");
    const auto C2 = graph_covariance({g1, flat});
    CHECK(C2(0, 1) == Catch::Approx(0.0).margin(1e-12));
    CHECK(C2(1, 1) == Catch::Approx(0.0).margin(1e-12));

    // p = 3 hand-computed on 6-cell vectors
    const auto h1 = valued(n3, {0, 1, 0, 2, 0, 1, 0, 3, 0}, "h1");
    const auto h2 = valued(n3, {0, 2, 1, 0, 0, 2, 1, 1, 0}, "h2");
    const auto h3 = valued(n3, {0, 0, 3, 1, 0, 0, 2, 2, 0}, "h3");
    const auto C3 = graph_covariance({h1, h2, h3});
    auto cov_of = [](std::vector<double> x, std::vector<double> y) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            mx += x[i];
            my += y[i];
        }
        mx /= x.size();
        my /= y.size();
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += (x[i] - mx) * (y[i] - my);
        return s / (x.size() - 1);
    };
    // off-diagonal order: (0,1),(0,2),(1,0),(1,2),(2,0),(2,1)
    const std::vector<double> v1 = {1, 0, 2, 1, 0, 3};
    const std::vector<double> v2 = {2, 1, 0, 2, 1, 1};
    const std::vector<double> v3 = {0, 3, 1, 0, 2, 2};
    CHECK(C3(0, 0) == Catch::Approx(cov_of(v1, v1)).margin(1e-12));
    CHECK(C3(0, 1) == Catch::Approx(cov_of(v1, v2)).margin(1e-12));
    CHECK(C3(0, 2) == Catch::Approx(cov_of(v1, v3)).margin(1e-12));
    CHECK(C3(1, 2) == Catch::Approx(cov_of(v2, v3)).margin(1e-12));
}

TEST_CASE("graph covariance rejects mismatched node sets") {
    const auto g1 = valued(n3, std::vector<std::int64_t>(9, 1), "a");
    concept_net g2(std::vector<std::string>{"A", "B", "X"});
    g2.stratum.kind = stratum_kind::role_group;
    g2.stratum.group = "weird";
    CHECK_THROWS_WITH(graph_covariance({g1, g2}),
                      Catch::Matchers::ContainsSubstring("weird"));
    CHECK_THROWS_AS(graph_covariance({g1}), usage_error);
}

TEST_CASE("identical graphs give a single component") {
    std::vector<concept_net> nets;
    for (int i = 0; i < 4; ++i)
        nets.push_back(valued(n3, {0, 2, 4, 1, 0, 3, 5, 2, 0}, "g" + std::to_string(i)));
    const auto res = network_pca(nets);
    CHECK(res.eigenvalues[0] > 0.0);
    for (std::size_t k = 1; k < res.eigenvalues.size(); ++k)
        CHECK(std::fabs(res.eigenvalues[k]) < 1e-9 * res.eigenvalues[0]);
    for (std::size_t g = 1; g < 4; ++g)
        CHECK(res.loadings(g, 0) == Catch::Approx(res.loadings(0, 0)).margin(1e-10));
    // score graph 1 = sum of loadings * G = sqrt(p) * G
    const double expect = std::sqrt(4.0) * 2.0;
    CHECK(res.score_graphs[0].weights(0, 1) == Catch::Approx(expect).margin(1e-9));
}

TEST_CASE("disjoint-support graphs with equal variance: hand-computed 2x2 spectrum") {
    // off-diagonal vectors: a = (5,0,5,0,0,0), b = (0,5,0,5,0,0); both have
    // mean 10/6, variance 20/3, and covariance -10/3 (disjoint nonnegative
    // supports always covary negatively after centering). Eigenvalues are
    // v -+ c: 10 and 10/3; the leading component is the contrast.
    const auto a = valued(n3, {0, 5, 0, 5, 0, 0, 0, 0, 0}, "a");
    const auto b = valued(n3, {0, 0, 5, 0, 0, 5, 0, 0, 0}, "b");
    const auto res = network_pca({a, b});
    CHECK(res.covariance(0, 0) == Catch::Approx(20.0 / 3.0).margin(1e-12));
    CHECK(res.covariance(0, 1) == Catch::Approx(-10.0 / 3.0).margin(1e-12));
    CHECK(res.eigenvalues[0] == Catch::Approx(10.0).margin(1e-9));
    CHECK(res.eigenvalues[1] == Catch::Approx(10.0 / 3.0).margin(1e-9));
    // loadings span the contrast: opposite signs, equal magnitude
    CHECK(res.loadings(0, 0) == Catch::Approx(-res.loadings(1, 0)).margin(1e-9));
    CHECK(std::fabs(res.loadings(0, 0)) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-9));
}

TEST_CASE("eigenvalue sum equals the trace and scree slices the prefix") {
    const auto h1 = valued(n3, {0, 1, 0, 2, 0, 1, 0, 3, 0}, "h1");
    const auto h2 = valued(n3, {0, 2, 1, 0, 0, 2, 1, 1, 0}, "h2");
    const auto h3 = valued(n3, {0, 0, 3, 1, 0, 0, 2, 2, 0}, "h3");
    const auto res = network_pca({h1, h2, h3});
    double trace = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        trace += res.covariance(i, i);
    for (double v : res.eigenvalues)
        sum += v;
    CHECK(sum == Catch::Approx(trace).margin(1e-8));
    CHECK(scree(res, 3) == res.eigenvalues);
    CHECK(scree(res, 1)[0] == res.eigenvalues[0]);
    CHECK_THROWS_AS(scree(res, 4), usage_error);
}

TEST_CASE("pca invariances") {
    rng_t rng(77);
    std::vector<concept_net> nets;
    for (int g = 0; g < 4; ++g) {
        concept_net net(n3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                net.at(i, j) = static_cast<std::int64_t>(rng.below(8));
        net.stratum.kind = stratum_kind::role_group;
        net.stratum.group = "g" + std::to_string(g);
        nets.push_back(net);
    }
    const auto base = network_pca(nets);

    // permuting the graphs permutes loading rows and keeps eigenvalues
    std::vector<concept_net> swapped = {nets[2], nets[0], nets[3], nets[1]};
    const auto perm = network_pca(swapped);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(perm.eigenvalues[k] == Catch::Approx(base.eigenvalues[k]).margin(1e-9));
    const std::size_t src[4] = {2, 0, 3, 1};
    for (std::size_t row = 0; row < 4; ++row)
        CHECK(std::fabs(perm.loadings(row, 0)) ==
              Catch::Approx(std::fabs(base.loadings(src[row], 0))).margin(1e-9));

    // relabeling nodes consistently leaves C and the spectrum unchanged
    std::vector<concept_net> relabeled;
    const std::size_t p2[3] = {2, 0, 1};
    for (const auto& net : nets) {
        concept_net r(n3);
        r.stratum = net.stratum;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                r.at(p2[i], p2[j]) = net.at(i, j);
        relabeled.push_back(r);
    }
    const auto rel = network_pca(relabeled);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(rel.covariance(i, j) == Catch::Approx(base.covariance(i, j)).margin(1e-9));

    // adding a constant to every cell leaves the covariance unchanged
    std::vector<concept_net> shifted = nets;
    for (auto& net : shifted)
        for (auto& w : net.weights)
            w += 11;
    const auto sh = graph_covariance(shifted);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(sh(i, j) == Catch::Approx(base.covariance(i, j)).margin(1e-9));
}

TEST_CASE("score graph argmax tracks the shared structure") {
    concept_net g(n3);
    g.at(0, 1) = 9;
    g.at(1, 2) = 4;
    g.at(2, 0) = 1;
    std::vector<concept_net> nets;
    for (int k = 1; k <= 3; ++k) {
        concept_net scaled(n3);
        scaled.stratum.kind = stratum_kind::role_group;
        scaled.stratum.group = "s" + std::to_string(k);
        for (std::size_t c = 0; c < 9; ++c)
            scaled.weights[c] = g.weights[c] * k;
        nets.push_back(scaled);
    }
    const auto res = network_pca(nets);
    double best = -1;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (res.score_graphs[0].weights(i, j) > best) {
                best = res.score_graphs[0].weights(i, j);
                bi = i;
                bj = j;
            }
    CHECK(bi == 0);
    CHECK(bj == 1);
}

TEST_CASE("centered score graphs subtract each graph's off-diagonal mean") {
    const auto g1 = valued(n3, {0, 2, 4, 1, 0, 3, 5, 2, 0}, "a");
    const auto g2 = valued(n3, {0, 2, 4, 1, 0, 3, 5, 2, 0}, "b");
    pca_options opt;
    opt.centered_scores = true;
    const auto res = network_pca({g1, g2}, opt);
    // identical graphs: centered score graph = sum_g w_g (x - mean), so cell
    // (0,1) carries (2 - 17/6) times the total component-1 loading
    const double load_sum = res.loadings(0, 0) + res.loadings(1, 0);
    CHECK(res.score_graphs[0].weights(0, 1) ==
          Catch::Approx((2.0 - 17.0 / 6.0) * load_sum).margin(1e-9));
    // the off-diagonal cells of a centered score graph sum to ~0
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j)
                sum += res.score_graphs[0].weights(i, j);
    CHECK(sum == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("scaled loadings have sqrt-eigenvalue column norms") {
    const auto h1 = valued(n3, {0, 1, 0, 2, 0, 1, 0, 3, 0}, "h1");
    const auto h2 = valued(n3, {0, 2, 1, 0, 0, 2, 1, 1, 0}, "h2");
    const auto h3 = valued(n3, {0, 0, 3, 1, 0, 0, 2, 2, 0}, "h3");
    const auto res = network_pca({h1, h2, h3});
    const auto scaled = res.scaled_loadings();
    for (std::size_t k = 0; k < 3; ++k) {
        double norm = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            norm += scaled(i, k) * scaled(i, k);
        CHECK(std::sqrt(norm) ==
              Catch::Approx(std::sqrt(std::max(0.0, res.eigenvalues[k]))).margin(1e-9));
    }
}

TEST_CASE("loading sign convention puts the largest magnitude positive") {
    rng_t rng(123);
    for (int rep = 0; rep < 10; ++rep) {
        dense_matrix A(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i; j < 4; ++j)
                A(i, j) = A(j, i) = rng.normal();
        const auto e = jacobi_eigen_sym(A);
        for (std::size_t k = 0; k < 4; ++k) {
            std::size_t imax = 0;
            for (std::size_t i = 1; i < 4; ++i)
                if (std::fabs(e.vectors(i, k)) > std::fabs(e.vectors(imax, k)))
                    imax = i;
            CHECK(e.vectors(imax, k) >= 0.0);
        }
    }
}
