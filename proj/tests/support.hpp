#pragma once

// Fixtures and independent reference computations shared by the tests.

#include "vbsbm/graph.hpp"
#include "vbsbm/random.hpp"
#include "vbsbm/vb_engine.hpp"

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace vbsbm::test {

inline Graph make_graph(std::size_t n, std::vector<Edge> edges, bool directed = false) {
    return Graph(n, edges, directed);
}

inline Graph triangle() { return make_graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

/// `count` disjoint cliques of `size` vertices, numbered block by block.
inline Graph disjoint_cliques(std::size_t count, std::size_t size) {
    std::vector<Edge> edges;
    for (std::size_t c = 0; c < count; ++c) {
        for (std::size_t i = 0; i < size; ++i) {
            for (std::size_t j = i + 1; j < size; ++j) {
                edges.emplace_back(c * size + i, c * size + j);
            }
        }
    }
    return make_graph(count * size, edges);
}

inline Graph cycle(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        edges.emplace_back(i, (i + 1) % n);
    }
    return make_graph(n, edges);
}

/// Erdos-Renyi graph G(n, p).
inline Graph random_graph(std::size_t n, double p, std::uint64_t seed, bool directed = false) {
    Rng rng(seed);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = directed ? 0 : i + 1; j < n; ++j) {
            if (i != j && rng.bernoulli(p)) {
                edges.emplace_back(i, j);
            }
        }
    }
    return make_graph(n, edges, directed);
}

/// Random N x Q matrix with rows on the simplex and no zero entries.
inline Responsibilities random_tau(std::size_t n, std::size_t q, std::uint64_t seed) {
    Rng rng(seed);
    Responsibilities tau(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
    for (Eigen::Index i = 0; i < tau.rows(); ++i) {
        for (Eigen::Index k = 0; k < tau.cols(); ++k) {
            tau(i, k) = 0.05 + rng.uniform();
        }
        tau.row(i) /= tau.row(i).sum();
    }
    return tau;
}

inline std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        std::swap(p[i - 1], p[rng.index(i)]);
    }
    return p;
}

/// ln B(a, b) from the C library's lgamma, independent of vbsbm::special.
inline double ref_ln_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

/// Exact ln p(X) for one class under Jeffreys priors: the Dirichlet factor is
/// 1 and the single Beta integral gives ln B(E + 1/2, M - E + 1/2) - ln B(1/2, 1/2).
inline double q1_log_marginal(const Graph& g) {
    const double e = static_cast<double>(g.edge_count());
    const double m = static_cast<double>(g.pair_count());
    return ref_ln_beta(e + 0.5, m - e + 0.5) - ref_ln_beta(0.5, 0.5);
}

/// Hard labels as a one-hot responsibility matrix.
inline Responsibilities one_hot(const Labels& z, std::size_t q) {
    Responsibilities tau = Responsibilities::Zero(static_cast<Eigen::Index>(z.size()), static_cast<Eigen::Index>(q));
    for (std::size_t i = 0; i < z.size(); ++i) {
        tau(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(z[i])) = 1.0;
    }
    return tau;
}

/// True when a and b are the same partition up to renaming the classes.
inline bool same_partition(const Labels& a, const Labels& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            if ((a[i] == a[j]) != (b[i] == b[j])) {
                return false;
            }
        }
    }
    return true;
}

} // namespace vbsbm::test
