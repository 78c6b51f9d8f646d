#include "vbsbm/generator.hpp"

#include "vbsbm/errors.hpp"
#include "vbsbm/random.hpp"

#include <cmath>
#include <string>

namespace vbsbm {
namespace {

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

std::size_t draw_class(Rng& rng, const std::vector<double>& alpha) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    for (std::size_t q = 0; q + 1 < alpha.size(); ++q) {
        cumulative += alpha[q];
        if (u < cumulative) {
            return q;
        }
    }
    // Rounding in the cumulative sum can leave u above the last partial sum.
    for (std::size_t q = alpha.size(); q-- > 0;) {
        if (alpha[q] > 0.0) {
            return q;
        }
    }
    return 0;
}

} // namespace

void SbmParams::validate(bool directed) const {
    const auto q = alpha.size();
    if (q == 0) {
        throw ParameterError("alpha must have at least one class");
    }
    double total = 0.0;
    for (const auto a : alpha) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw ParameterError("alpha entries must be non-negative");
        }
        total += a;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ParameterError("alpha must sum to 1, sums to " + std::to_string(total));
    }
    if (static_cast<std::size_t>(pi.rows()) != q || static_cast<std::size_t>(pi.cols()) != q) {
        throw ParameterError("pi must be " + std::to_string(q) + " x " + std::to_string(q));
    }
    for (Eigen::Index a = 0; a < pi.rows(); ++a) {
        for (Eigen::Index b = 0; b < pi.cols(); ++b) {
            check_probability(pi(a, b), "pi entry");
            if (!directed && pi(a, b) != pi(b, a)) {
                throw ParameterError("pi must be symmetric for undirected graphs");
            }
        }
    }
}

SbmSample sample_sbm(const SbmParams& params, std::size_t n_vertices, std::uint64_t seed, bool directed) {
    params.validate(directed);
    if (n_vertices == 0) {
        throw ParameterError("n_vertices must be at least 1");
    }
    Rng rng(seed);
    Labels labels(n_vertices);
    for (auto& z : labels) {
        z = draw_class(rng, params.alpha);
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n_vertices; ++i) {
        for (std::size_t j = directed ? 0 : i + 1; j < n_vertices; ++j) {
            if (i == j) {
                continue;
            }
            const double p = params.pi(static_cast<Eigen::Index>(labels[i]), static_cast<Eigen::Index>(labels[j]));
            if (rng.bernoulli(p)) {
                edges.emplace_back(i, j);
            }
        }
    }
    return {Graph(n_vertices, edges, directed), std::move(labels)};
}

Eigen::MatrixXd affiliation_matrix(std::size_t q, double lambda, double epsilon) {
    if (q == 0) {
        throw ParameterError("affiliation matrix needs at least one class");
    }
    check_probability(lambda, "lambda");
    check_probability(epsilon, "epsilon");
    const auto n = static_cast<Eigen::Index>(q);
    Eigen::MatrixXd pi = Eigen::MatrixXd::Constant(n, n, epsilon);
    pi.diagonal().setConstant(lambda);
    return pi;
}

Eigen::MatrixXd hub_matrix(std::size_t q, double lambda, double epsilon) {
    if (q < 2) {
        throw ParameterError("hub matrix needs at least two classes (one community plus hubs)");
    }
    Eigen::MatrixXd pi = affiliation_matrix(q, lambda, epsilon);
    const auto last = static_cast<Eigen::Index>(q) - 1;
    pi.row(last).setConstant(lambda);
    pi.col(last).setConstant(lambda);
    return pi;
}

std::vector<double> equal_proportions(std::size_t q) {
    if (q == 0) {
        throw ParameterError("need at least one class");
    }
    return std::vector<double>(q, 1.0 / static_cast<double>(q));
}

} // namespace vbsbm
