#include "vbsbm/frequentist.hpp"

#include "vbsbm/detail/fixed_point.hpp"
#include "vbsbm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vbsbm {
namespace {

using Eigen::Index;

double clamp_probability(double p) { return std::clamp(p, kFreqProbabilityClamp, 1.0 - kFreqProbabilityClamp); }

// t ln p with the convention 0 ln 0 = 0.
double xlogy(double t, double p) { return t == 0.0 ? 0.0 : t * std::log(p); }

template <typename F>
void for_each_free_cell(Index q, bool directed, F&& f) {
    for (Index a = 0; a < q; ++a) {
        for (Index b = directed ? 0 : a; b < q; ++b) {
            f(a, b);
        }
    }
}

void m_step(const Graph& g, FreqFitResult& r) {
    FreqParams& p = r.params;
    const Index q = p.tau.cols();
    p.alpha = p.tau.colwise().sum().transpose() / static_cast<double>(g.size());
    const BlockMass mass = block_mass(p.tau, g);
    p.pi.resize(q, q);
    for (Index a = 0; a < q; ++a) {
        for (Index b = 0; b < q; ++b) {
            const double pairs = mass.edges(a, b) + mass.non_edges(a, b);
            double value = 0.0;
            if (pairs < 1e-12) {
                value = g.density();
                if (g.directed() || a <= b) {
                    r.warnings.push_back("empty block (" + std::to_string(a) + ", " + std::to_string(b) +
                                         ") set to global density at iteration " + std::to_string(r.iterations));
                }
            } else {
                value = mass.edges(a, b) / pairs;
            }
            p.pi(a, b) = clamp_probability(value);
        }
    }
}

double bound(const Graph& g, const FreqParams& p) {
    const Index q = p.tau.cols();
    const Eigen::VectorXd totals = p.tau.colwise().sum().transpose();
    double value = responsibility_entropy(p.tau);
    for (Index a = 0; a < q; ++a) {
        value += xlogy(totals(a), p.alpha(a));
    }
    const BlockMass mass = block_mass(p.tau, g);
    for_each_free_cell(q, g.directed(), [&](Index a, Index b) {
        value += mass.edges(a, b) * std::log(p.pi(a, b)) + mass.non_edges(a, b) * std::log1p(-p.pi(a, b));
    });
    return value;
}

detail::LogPotentials potentials(const FreqParams& p) {
    const Index q = p.tau.cols();
    detail::LogPotentials logs{Eigen::VectorXd(q), Eigen::MatrixXd(q, q), Eigen::MatrixXd(q, q)};
    for (Index a = 0; a < q; ++a) {
        logs.log_alpha(a) = p.alpha(a) > 0.0 ? std::log(p.alpha(a)) : -std::numeric_limits<double>::infinity();
        for (Index b = 0; b < q; ++b) {
            const double pi = p.pi(a, b);
            logs.log_non_edge(a, b) = std::log1p(-pi);
            logs.log_odds(a, b) = std::log(pi) - std::log1p(-pi);
        }
    }
    return logs;
}

} // namespace

FreqFitResult fit_freq(const Graph& g, std::size_t q, const Responsibilities& init_tau, const FitOptions& opts) {
    opts.validate();
    if (q == 0 || q > g.size()) {
        throw ParameterError("number of classes must lie in [1, " + std::to_string(g.size()) + "]");
    }
    if (init_tau.rows() != static_cast<Index>(g.size()) || init_tau.cols() != static_cast<Index>(q)) {
        throw ParameterError("initial tau must be " + std::to_string(g.size()) + " x " + std::to_string(q));
    }

    FreqFitResult r;
    r.params.tau = init_tau;
    m_step(g, r);
    r.bound_trace.push_back(bound(g, r.params));
    for (std::size_t it = 1; it <= opts.max_outer_iters; ++it) {
        EStepResult e = detail::fixed_point_tau(r.params.tau, g, potentials(r.params), opts);
        r.params.tau = std::move(e.tau);
        r.iterations = it;
        m_step(g, r);
        const double value = bound(g, r.params);
        if (!std::isfinite(value)) {
            throw NumericalError("non-finite frequentist bound", it);
        }
        const double previous = r.bound_trace.back();
        r.bound_trace.push_back(value);
        if (std::abs(value - previous) < opts.eps_elbo) {
            r.converged = true;
            break;
        }
    }
    r.bound = r.bound_trace.back();
    return r;
}

double complete_log_likelihood(const Graph& g, const Labels& labels, std::size_t q) {
    if (labels.size() != g.size()) {
        throw ParameterError("labelling length does not match vertex count");
    }
    const Responsibilities tau = hard_responsibilities(labels, q);
    const Eigen::VectorXd sizes = tau.colwise().sum().transpose();
    const double n = static_cast<double>(g.size());
    double value = 0.0;
    for (Index a = 0; a < sizes.size(); ++a) {
        value += xlogy(sizes(a), sizes(a) / n);
    }
    const BlockMass mass = block_mass(tau, g);
    for_each_free_cell(static_cast<Index>(q), g.directed(), [&](Index a, Index b) {
        const double edges = mass.edges(a, b);
        const double pairs = edges + mass.non_edges(a, b);
        if (pairs > 0.0) {
            value += xlogy(edges, edges / pairs) + xlogy(pairs - edges, (pairs - edges) / pairs);
        }
    });
    return value;
}

double icl_penalty(std::size_t n_vertices, std::size_t q, bool directed) {
    const double n = static_cast<double>(n_vertices);
    const double k = static_cast<double>(q);
    const double connectivity = directed ? 0.5 * k * k * std::log(n * (n - 1.0))
                                         : 0.25 * k * (k + 1.0) * std::log(0.5 * n * (n - 1.0));
    return connectivity + 0.5 * (k - 1.0) * std::log(n);
}

double icl(const Graph& g, const FreqParams& params, std::size_t q) {
    return complete_log_likelihood(g, map_labels(params.tau), q) - icl_penalty(g.size(), q, g.directed());
}

} // namespace vbsbm
