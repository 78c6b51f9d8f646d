#include "support.hpp"

#include "vbsbm/errors.hpp"
#include "vbsbm/exact_oracle.hpp"
#include "vbsbm/initializer.hpp"
#include "vbsbm/vb_engine.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace vbsbm;
using Eigen::Index;

namespace {

// Nodes of the n-point Gauss-Chebyshev rule mapped to (0, 1). For the
// arcsine density Beta(1/2, 1/2) the plain node average integrates
// polynomials of degree up to 2n - 1 exactly.
std::vector<double> arcsine_nodes(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t k = 1; k <= n; ++k) {
        x[k - 1] = 0.5 * (1.0 + std::cos((2.0 * static_cast<double>(k) - 1.0) * std::numbers::pi / (2.0 * n)));
    }
    return x;
}

// p(X) for Q = 2 under Jeffreys priors by quadrature over (alpha_1, pi_11,
// pi_12, pi_22) and summation over all labelings. The integrand has degree at
// most N(N-1)/2 in each variable.
double quadrature_marginal(const Graph& g) {
    const std::size_t n = g.size();
    const auto nodes = arcsine_nodes(8);
    const double w = 1.0 / static_cast<double>(nodes.size());
    double total = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::size_t n1 = 0;
        double e[2][2] = {{0, 0}, {0, 0}};
        double m[2][2] = {{0, 0}, {0, 0}};
        for (std::size_t i = 0; i < n; ++i) {
            n1 += (mask >> i) & 1;
            for (std::size_t j = i + 1; j < n; ++j) {
                std::size_t a = (mask >> i) & 1;
                std::size_t b = (mask >> j) & 1;
                if (a > b) {
                    std::swap(a, b);
                }
                m[a][b] += 1;
                e[a][b] += g.has_edge(i, j) ? 1 : 0;
            }
        }
        const auto cell = [&](std::size_t a, std::size_t b) {
            double s = 0.0;
            for (const double p : nodes) {
                s += w * std::pow(p, e[a][b]) * std::pow(1 - p, m[a][b] - e[a][b]);
            }
            return s;
        };
        double alpha = 0.0;
        for (const double a1 : nodes) {
            alpha += w * std::pow(a1, static_cast<double>(n1)) * std::pow(1 - a1, static_cast<double>(n - n1));
        }
        total += alpha * cell(0, 0) * cell(0, 1) * cell(1, 1);
    }
    return std::log(total);
}

} // namespace

TEST_CASE("complete log of a single absent pair") {
    const Graph g(2, {}, false);
    const double got = exact_complete_log(g, {0, 0}, 1, Hyperparameters::jeffreys(1));
    CHECK(got == doctest::Approx(test::ref_ln_beta(0.5, 1.5) - std::log(std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("triangle with one class") {
    const Graph g = test::triangle();
    const Hyperparameters h = Hyperparameters::jeffreys(1);
    const double complete = exact_complete_log(g, {0, 0, 0}, 1, h);
    CHECK(complete == doctest::Approx(-1.1632).epsilon(1e-4));
    CHECK(complete == doctest::Approx(test::q1_log_marginal(g)).epsilon(1e-13));
    CHECK(exact_log_marginal(g, 1, h) == doctest::Approx(complete).epsilon(1e-14));
}

TEST_CASE("class relabelling leaves the complete log unchanged") {
    const Graph g = test::random_graph(7, 0.4, 3);
    const Hyperparameters h = Hyperparameters::jeffreys(3);
    const Labels z{0, 1, 2, 2, 1, 0, 0};
    Labels swapped = z;
    for (auto& label : swapped) {
        label = (label + 1) % 3;
    }
    CHECK(exact_complete_log(g, z, 3, h) == doctest::Approx(exact_complete_log(g, swapped, 3, h)).epsilon(1e-13));
}

TEST_CASE("single vertex with two classes") {
    // Each labelling contributes Gamma(1.5) / Gamma(0.5) = 1/2; together p(X) = 1.
    const Graph g(1, {}, false);
    const Hyperparameters h = Hyperparameters::jeffreys(2);
    CHECK(exact_complete_log(g, {0}, 2, h) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    CHECK(exact_complete_log(g, {1}, 2, h) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    CHECK(std::abs(exact_log_marginal(g, 2, h)) <= 1e-14);
}

TEST_CASE("enumeration agrees with quadrature on N = 4, Q = 2") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Graph g = test::random_graph(4, 0.2 + 0.1 * static_cast<double>(seed), seed);
        CHECK(exact_log_marginal(g, 2, Hyperparameters::jeffreys(2)) ==
              doctest::Approx(quadrature_marginal(g)).epsilon(1e-12));
    }
}

TEST_CASE("marginal dominates every complete-data term") {
    const Graph g = test::random_graph(6, 0.5, 12);
    const Hyperparameters h = Hyperparameters::jeffreys(2);
    const double marginal = exact_log_marginal(g, 2, h);
    double total = 0.0;
    for (std::size_t mask = 0; mask < 64; ++mask) {
        Labels z(6);
        for (std::size_t i = 0; i < 6; ++i) {
            z[i] = (mask >> i) & 1;
        }
        const double term = exact_complete_log(g, z, 2, h);
        CHECK(term <= marginal);
        total += std::exp(term);
    }
    CHECK(std::log(total) == doctest::Approx(marginal).epsilon(1e-12));
}

TEST_CASE("two 3-cliques: the converged bound stays below the exact marginal") {
    const Graph g = test::disjoint_cliques(2, 3);
    const Hyperparameters h = Hyperparameters::jeffreys(2);
    const double exact = exact_log_marginal(g, 2, h);
    CHECK(std::isfinite(exact));
    const FitResult r = fit(g, 2, h, ward_init(g, 2));
    CHECK(r.ilvb <= exact + 1e-9);
    // The bound is tight up to the two-fold label symmetry the factorised q(Z) cannot express.
    CHECK(exact - r.ilvb == doctest::Approx(std::log(2.0)).epsilon(0.05));
}

TEST_CASE("empty graphs favour one class") {
    const Graph g(8, {}, false);
    const double q1 = exact_log_marginal(g, 1, Hyperparameters::jeffreys(1));
    const double q2 = exact_log_marginal(g, 2, Hyperparameters::jeffreys(2));
    const double q3 = exact_log_marginal(g, 3, Hyperparameters::jeffreys(3));
    CHECK(q1 > q2);
    CHECK(q2 > q3);
}

TEST_CASE("co-clustering probabilities") {
    const Graph g = test::disjoint_cliques(2, 3);
    const Hyperparameters h = Hyperparameters::jeffreys(2);
    const Eigen::MatrixXd co = exact_coclustering(g, 2, h);
    CHECK(co.isApprox(co.transpose(), 1e-14));
    for (Index i = 0; i < 6; ++i) {
        CHECK(co(i, i) == doctest::Approx(1.0));
    }
    CHECK((co.array() >= -1e-15).all());
    CHECK((co.array() <= 1 + 1e-15).all());

    // Brute-force reference from the complete-data terms.
    const double marginal = exact_log_marginal(g, 2, h);
    Eigen::MatrixXd want = Eigen::MatrixXd::Zero(6, 6);
    for (std::size_t mask = 0; mask < 64; ++mask) {
        Labels z(6);
        for (std::size_t i = 0; i < 6; ++i) {
            z[i] = (mask >> i) & 1;
        }
        const double p = std::exp(exact_complete_log(g, z, 2, h) - marginal);
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = 0; j < 6; ++j) {
                want(static_cast<Index>(i), static_cast<Index>(j)) += z[i] == z[j] ? p : 0.0;
            }
        }
    }
    CHECK((co - want).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("capacity and argument checks") {
    const Graph big(25, {}, false);
    CHECK_THROWS_AS(exact_log_marginal(big, 3, Hyperparameters::jeffreys(3)), CapacityError);
    OracleLimits tiny;
    tiny.max_assignments = 10;
    CHECK_THROWS_AS(exact_log_marginal(test::triangle(), 3, Hyperparameters::jeffreys(3), tiny), CapacityError);
    CHECK_THROWS_AS(exact_complete_log(test::triangle(), {0, 1, 2}, 2, Hyperparameters::jeffreys(2)),
                    ParameterError);
    CHECK_THROWS_AS(exact_complete_log(test::triangle(), {0, 1}, 2, Hyperparameters::jeffreys(2)), ParameterError);
}

TEST_CASE("directed enumeration matches the one-class closed form") {
    const Graph g = test::random_graph(5, 0.4, 6, true);
    CHECK(exact_log_marginal(g, 1, Hyperparameters::jeffreys(1)) ==
          doctest::Approx(test::q1_log_marginal(g)).epsilon(1e-13));
}
