#include "vbsbm/vb_engine.hpp"

#include "vbsbm/detail/fixed_point.hpp"

#include "vbsbm/errors.hpp"
#include "vbsbm/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vbsbm {
namespace {

using Eigen::Index;
using special::digamma;
using special::ln_beta;
using special::ln_gamma;

constexpr double kTauFloor = 1e-300;

Eigen::MatrixXd neighbor_sums(const Responsibilities& tau, const Graph& g) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(tau.rows(), tau.cols());
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (const auto j : g.out_neighbors(i)) {
            sums.row(static_cast<Index>(i)) += tau.row(static_cast<Index>(j));
        }
    }
    return sums;
}

/// Visits the free (q, l) cells: q <= l when undirected, all when directed.
template <typename F>
void for_each_free_cell(Index q, bool directed, F&& f) {
    for (Index a = 0; a < q; ++a) {
        for (Index b = directed ? 0 : a; b < q; ++b) {
            f(a, b);
        }
    }
}

double dirichlet_log_normalizer_ratio(const Eigen::VectorXd& n, const Eigen::VectorXd& n0) {
    double value = ln_gamma(n0.sum()) - ln_gamma(n.sum());
    for (Index k = 0; k < n.size(); ++k) {
        value += ln_gamma(n(k)) - ln_gamma(n0(k));
    }
    return value;
}

void check_state_shapes(const VariationalState& s, const Graph& g, const Hyperparameters& h) {
    const auto q = static_cast<Index>(s.classes());
    if (s.tau.rows() != static_cast<Index>(g.size())) {
        throw ParameterError("tau has " + std::to_string(s.tau.rows()) + " rows, graph has " +
                             std::to_string(g.size()) + " vertices");
    }
    if (s.n.size() != q || s.eta.rows() != q || s.eta.cols() != q || s.zeta.rows() != q || s.zeta.cols() != q) {
        throw ParameterError("variational parameters do not match the number of classes");
    }
    h.validate(static_cast<std::size_t>(q), g.directed());
}

void check_simplex_rows(const Responsibilities& tau) {
    for (Index i = 0; i < tau.rows(); ++i) {
        const auto row = tau.row(i);
        if ((row.array() < 0.0).any() || (row.array() > 1.0).any() || !row.allFinite() ||
            std::abs(row.sum() - 1.0) > 1e-9) {
            throw ParameterError("tau row " + std::to_string(i) + " is not on the simplex");
        }
    }
}

/// Writes the normalised softmax of `scores` into `out`.
void normalize_log_row(const Eigen::VectorXd& scores, Eigen::Ref<Eigen::RowVectorXd> out) {
    const double peak = scores.maxCoeff();
    double total = 0.0;
    for (Index k = 0; k < scores.size(); ++k) {
        const double v = std::max(std::exp(scores(k) - peak), kTauFloor);
        out(k) = v;
        total += v;
    }
    out /= total;
}

/// Digamma expectations that stay fixed during an E-step:
/// E ln alpha_q, E ln(1 - pi_ql) and E ln pi_ql - E ln(1 - pi_ql).
detail::LogPotentials expected_logs(const VariationalState& s) {
    const Index q = static_cast<Index>(s.classes());
    detail::LogPotentials e{Eigen::VectorXd(q), Eigen::MatrixXd(q, q), Eigen::MatrixXd(q, q)};
    const double psi_total = digamma(s.n.sum());
    for (Index a = 0; a < q; ++a) {
        e.log_alpha(a) = digamma(s.n(a)) - psi_total;
        for (Index b = 0; b < q; ++b) {
            const double psi_eta = digamma(s.eta(a, b));
            const double psi_zeta = digamma(s.zeta(a, b));
            e.log_non_edge(a, b) = psi_zeta - digamma(s.eta(a, b) + s.zeta(a, b));
            e.log_odds(a, b) = psi_eta - psi_zeta;
        }
    }
    return e;
}

/// Log-score of every class for vertex i given the other rows of tau.
/// `others` is the column total of tau excluding row i; `out_sum` / `in_sum`
/// are neighbour sums of tau over out- and in-neighbours.
void vertex_scores(const detail::LogPotentials& e, bool directed, const Eigen::VectorXd& others,
                   const Eigen::VectorXd& out_sum, const Eigen::VectorXd& in_sum, Eigen::VectorXd& scores) {
    scores = e.log_alpha;
    scores.noalias() += e.log_non_edge * others;
    scores.noalias() += e.log_odds * out_sum;
    if (directed) {
        scores.noalias() += e.log_non_edge.transpose() * others;
        scores.noalias() += e.log_odds.transpose() * in_sum;
    }
}

void accumulate_neighbors(const Responsibilities& tau, std::span<const std::uint32_t> nbrs, Eigen::VectorXd& sum) {
    sum.setZero();
    for (const auto j : nbrs) {
        sum += tau.row(static_cast<Index>(j)).transpose();
    }
}

} // namespace

BlockMass block_mass(const Responsibilities& tau, const Graph& g) {
    const Index q = tau.cols();
    const Eigen::VectorXd totals = tau.colwise().sum().transpose();
    // weighted[q, l] = sum_{i != j} X_ij tau_iq tau_jl
    const Eigen::MatrixXd weighted = tau.transpose() * neighbor_sums(tau, g);
    // all_pairs[q, l] = sum_{i != j} tau_iq tau_jl
    const Eigen::MatrixXd all_pairs = totals * totals.transpose() - tau.transpose() * tau;

    BlockMass mass{Eigen::MatrixXd(q, q), Eigen::MatrixXd(q, q)};
    if (g.directed()) {
        mass.edges = weighted;
        mass.non_edges = all_pairs - weighted;
        return mass;
    }
    for (Index a = 0; a < q; ++a) {
        mass.edges(a, a) = 0.5 * weighted(a, a);
        mass.non_edges(a, a) = 0.5 * all_pairs(a, a) - mass.edges(a, a);
        for (Index b = a + 1; b < q; ++b) {
            mass.edges(a, b) = mass.edges(b, a) = weighted(a, b);
            mass.non_edges(a, b) = mass.non_edges(b, a) = all_pairs(a, b) - weighted(a, b);
        }
    }
    return mass;
}

Hyperparameters Hyperparameters::jeffreys(std::size_t q) { return constant(q, 0.5); }

Hyperparameters Hyperparameters::constant(std::size_t q, double value) {
    const auto n = static_cast<Index>(q);
    return {Eigen::VectorXd::Constant(n, value), Eigen::MatrixXd::Constant(n, n, value),
            Eigen::MatrixXd::Constant(n, n, value)};
}

void Hyperparameters::validate(std::size_t q, bool directed) const {
    const auto n = static_cast<Index>(q);
    if (n0.size() != n || eta0.rows() != n || eta0.cols() != n || zeta0.rows() != n || zeta0.cols() != n) {
        throw ParameterError("hyperparameters must be sized for " + std::to_string(q) + " classes");
    }
    const auto positive = [](const auto& m) { return m.allFinite() && (m.array() > 0.0).all(); };
    if (!positive(n0) || !positive(eta0) || !positive(zeta0)) {
        throw ParameterError("hyperparameters must be positive and finite");
    }
    if (!directed && (eta0 != eta0.transpose() || zeta0 != zeta0.transpose())) {
        throw ParameterError("Beta hyperparameters must be symmetric for undirected graphs");
    }
}

void FitOptions::validate() const {
    if (!(eps_elbo > 0.0) || !(eps_tau > 0.0)) {
        throw ParameterError("tolerances must be positive");
    }
    if (max_outer_iters == 0 || max_fixed_point_iters == 0) {
        throw ParameterError("iteration limits must be positive");
    }
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw ParameterError("damping must lie in (0, 1]");
    }
}

Responsibilities hard_responsibilities(const Labels& labels, std::size_t q) {
    Responsibilities tau = Responsibilities::Zero(static_cast<Index>(labels.size()), static_cast<Index>(q));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= q) {
            throw ParameterError("label " + std::to_string(labels[i]) + " out of range for " + std::to_string(q) +
                                 " classes");
        }
        tau(static_cast<Index>(i), static_cast<Index>(labels[i])) = 1.0;
    }
    return tau;
}

EStepResult detail::fixed_point_tau(Responsibilities tau_in, const Graph& g, const detail::LogPotentials& logs,
                                    const FitOptions& opts) {
    opts.validate();
    const Index n = static_cast<Index>(g.size());
    const Index q = static_cast<Index>(logs.log_alpha.size());
    const bool directed = g.directed();
    if (tau_in.rows() != n || tau_in.cols() != q) {
        throw ParameterError("tau shape does not match graph and classes");
    }

    EStepResult result{std::move(tau_in), 0, 0.0, false};
    Responsibilities& tau = result.tau;
    Eigen::VectorXd others(q), out_sum(q), in_sum = Eigen::VectorXd::Zero(q), scores(q);
    Eigen::RowVectorXd fresh(q);

    for (std::size_t sweep = 1; sweep <= opts.max_fixed_point_iters; ++sweep) {
        double change = 0.0;
        if (opts.tau_update_order == UpdateOrder::sequential) {
            Eigen::VectorXd totals = tau.colwise().sum().transpose();
            for (Index i = 0; i < n; ++i) {
                const auto v = static_cast<std::size_t>(i);
                others = totals - tau.row(i).transpose();
                accumulate_neighbors(tau, g.out_neighbors(v), out_sum);
                if (directed) {
                    accumulate_neighbors(tau, g.in_neighbors(v), in_sum);
                }
                vertex_scores(logs, directed, others, out_sum, in_sum, scores);
                normalize_log_row(scores, fresh);
                change += (fresh - tau.row(i)).cwiseAbs().sum();
                totals = others + fresh.transpose();
                tau.row(i) = fresh;
            }
        } else {
            const Eigen::VectorXd totals = tau.colwise().sum().transpose();
            Responsibilities next(n, q);
            for (Index i = 0; i < n; ++i) {
                const auto v = static_cast<std::size_t>(i);
                others = totals - tau.row(i).transpose();
                accumulate_neighbors(tau, g.out_neighbors(v), out_sum);
                if (directed) {
                    accumulate_neighbors(tau, g.in_neighbors(v), in_sum);
                }
                vertex_scores(logs, directed, others, out_sum, in_sum, scores);
                normalize_log_row(scores, fresh);
                if (opts.damping < 1.0) {
                    fresh = opts.damping * fresh + (1.0 - opts.damping) * tau.row(i);
                    fresh /= fresh.sum();
                }
                next.row(i) = fresh;
            }
            change = (next - tau).cwiseAbs().sum();
            tau.swap(next);
        }
        result.sweeps = sweep;
        result.last_change = change;
        if (!std::isfinite(change) || !tau.allFinite()) {
            throw NumericalError("non-finite responsibilities in fixed-point sweep", sweep);
        }
        if (change < opts.eps_tau) {
            result.converged = true;
            break;
        }
    }
    return result;
}

EStepResult e_step(const VariationalState& state, const Graph& g, const Hyperparameters& h, const FitOptions& opts) {
    check_state_shapes(state, g, h);
    return detail::fixed_point_tau(state.tau, g, expected_logs(state), opts);
}

PosteriorCounts m_step(const Responsibilities& tau, const Graph& g, const Hyperparameters& h) {
    if (tau.rows() != static_cast<Index>(g.size())) {
        throw ParameterError("tau rows do not match vertex count");
    }
    h.validate(static_cast<std::size_t>(tau.cols()), g.directed());
    const BlockMass mass = block_mass(tau, g);
    return {h.n0 + tau.colwise().sum().transpose(), h.eta0 + mass.edges, h.zeta0 + mass.non_edges};
}

double responsibility_entropy(const Responsibilities& tau) {
    double entropy = 0.0;
    for (Index i = 0; i < tau.rows(); ++i) {
        for (Index k = 0; k < tau.cols(); ++k) {
            const double t = tau(i, k);
            if (t > 0.0) {
                entropy -= t * std::log(t);
            }
        }
    }
    return entropy;
}

double lower_bound_simplified(const VariationalState& state, const Graph& g, const Hyperparameters& h) {
    check_state_shapes(state, g, h);
    double bound = dirichlet_log_normalizer_ratio(state.n, h.n0);
    for_each_free_cell(static_cast<Index>(state.classes()), g.directed(), [&](Index a, Index b) {
        bound += ln_beta(state.eta(a, b), state.zeta(a, b)) - ln_beta(h.eta0(a, b), h.zeta0(a, b));
    });
    return bound + responsibility_entropy(state.tau);
}

double lower_bound_general(const VariationalState& state, const Graph& g, const Hyperparameters& h) {
    check_state_shapes(state, g, h);
    const Index q = static_cast<Index>(state.classes());
    const Eigen::VectorXd totals = state.tau.colwise().sum().transpose();
    const BlockMass mass = block_mass(state.tau, g);

    double bound = dirichlet_log_normalizer_ratio(state.n, h.n0);
    const double psi_total = digamma(state.n.sum());
    for (Index a = 0; a < q; ++a) {
        bound += (h.n0(a) - state.n(a) + totals(a)) * (digamma(state.n(a)) - psi_total);
    }
    for_each_free_cell(q, g.directed(), [&](Index a, Index b) {
        const double eta = state.eta(a, b);
        const double zeta = state.zeta(a, b);
        const double psi_sum = digamma(eta + zeta);
        bound += (h.eta0(a, b) - eta + mass.edges(a, b)) * (digamma(eta) - psi_sum);
        bound += (h.zeta0(a, b) - zeta + mass.non_edges(a, b)) * (digamma(zeta) - psi_sum);
        bound += ln_beta(eta, zeta) - ln_beta(h.eta0(a, b), h.zeta0(a, b));
    });
    bound += responsibility_entropy(state.tau);
    if (!std::isfinite(bound)) {
        throw NumericalError("non-finite lower bound", 0);
    }
    return bound;
}

FitResult fit(const Graph& g, std::size_t q, const Hyperparameters& h, const Responsibilities& init_tau,
              const FitOptions& opts) {
    opts.validate();
    if (q == 0) {
        throw ParameterError("number of classes must be at least 1");
    }
    if (q > g.size()) {
        throw ParameterError("number of classes (" + std::to_string(q) + ") exceeds vertex count (" +
                             std::to_string(g.size()) + ")");
    }
    if (init_tau.rows() != static_cast<Index>(g.size()) || init_tau.cols() != static_cast<Index>(q)) {
        throw ParameterError("initial tau must be " + std::to_string(g.size()) + " x " + std::to_string(q));
    }
    check_simplex_rows(init_tau);
    h.validate(q, g.directed());

    FitResult result;
    VariationalState& state = result.state;
    state.tau = init_tau;
    auto refresh = [&] {
        PosteriorCounts counts = m_step(state.tau, g, h);
        state.n = std::move(counts.n);
        state.eta = std::move(counts.eta);
        state.zeta = std::move(counts.zeta);
        return lower_bound_simplified(state, g, h);
    };

    result.elbo_trace.push_back(refresh());
    for (std::size_t it = 1; it <= opts.max_outer_iters; ++it) {
        EStepResult e = e_step(state, g, h, opts);
        state.tau = std::move(e.tau);
        result.fixed_point_sweeps += e.sweeps;
        const double bound = refresh();
        if (!std::isfinite(bound)) {
            throw NumericalError("non-finite lower bound", it);
        }
        const double previous = result.elbo_trace.back();
        result.elbo_trace.push_back(bound);
        result.iterations = it;
        if (std::abs(bound - previous) < opts.eps_elbo) {
            result.converged = true;
            break;
        }
    }
    result.ilvb = result.elbo_trace.back();
    return result;
}

double ilvb(const FitResult& result) noexcept { return result.ilvb; }

Labels map_labels(const Responsibilities& tau) {
    Labels labels(static_cast<std::size_t>(tau.rows()));
    for (Index i = 0; i < tau.rows(); ++i) {
        Index best = 0;
        for (Index k = 1; k < tau.cols(); ++k) {
            if (tau(i, k) > tau(i, best)) {
                best = k;
            }
        }
        labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
    }
    return labels;
}

} // namespace vbsbm
