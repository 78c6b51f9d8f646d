#pragma once

// Variational Bayes EM for the binary stochastic block model.
//
// The posterior over (Z, alpha, pi) is approximated by the factorised family
//   q(Z) q(alpha) q(pi) = prod_i Mult(Z_i; tau_i) Dir(alpha; n) prod Beta(pi_ql; eta_ql, zeta_ql)
// with conjugate Dirichlet / Beta priors. For undirected graphs only the
// q <= l triangle of (eta, zeta) is free and the matrices are kept symmetric;
// directed graphs use every (q, l) cell and every ordered dyad i != j.

#include "vbsbm/graph.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace vbsbm {

/// N x Q responsibilities, row-major so a vertex's row is contiguous.
using Responsibilities = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Prior hyperparameters n0 (Dirichlet) and eta0 / zeta0 (Beta).
struct Hyperparameters {
    Eigen::VectorXd n0;
    Eigen::MatrixXd eta0;
    Eigen::MatrixXd zeta0;

    /// Jeffreys priors: every entry 1/2.
    static Hyperparameters jeffreys(std::size_t q);
    /// Every entry set to `value`.
    static Hyperparameters constant(std::size_t q, double value);

    std::size_t classes() const noexcept { return static_cast<std::size_t>(n0.size()); }

    /// Throws ParameterError unless shapes match q, entries are positive and
    /// finite, and eta0 / zeta0 are symmetric when the graph is undirected.
    void validate(std::size_t q, bool directed) const;
};

/// Variational posterior parameters.
struct VariationalState {
    Responsibilities tau; ///< N x Q
    Eigen::VectorXd n;    ///< Dirichlet parameters
    Eigen::MatrixXd eta;  ///< Beta first shapes
    Eigen::MatrixXd zeta; ///< Beta second shapes

    std::size_t classes() const noexcept { return static_cast<std::size_t>(tau.cols()); }
};

/// Closed-form q(alpha), q(pi) parameters for a given tau.
struct PosteriorCounts {
    Eigen::VectorXd n;
    Eigen::MatrixXd eta;
    Eigen::MatrixXd zeta;
};

enum class UpdateOrder {
    sequential,  ///< Gauss-Seidel: rows updated in place, one vertex at a time
    simultaneous ///< Jacobi: every row computed from the previous sweep
};

struct FitOptions {
    double eps_elbo = 1e-6;               ///< stop when successive bounds differ by less
    double eps_tau = 1e-6;                ///< fixed-point stop on sum |tau_old - tau_new|
    std::size_t max_outer_iters = 500;
    std::size_t max_fixed_point_iters = 100;
    UpdateOrder tau_update_order = UpdateOrder::sequential;
    double damping = 1.0;                 ///< weight on the new tau in simultaneous mode

    void validate() const;
};

struct EStepResult {
    Responsibilities tau;
    std::size_t sweeps = 0;
    double last_change = 0.0; ///< L1 change of the final sweep
    bool converged = false;
};

struct FitResult {
    VariationalState state;
    std::vector<double> elbo_trace; ///< bound after every M-step, first entry from the initial tau
    double ilvb = 0.0;
    bool converged = false;
    std::size_t iterations = 0;     ///< completed E+M cycles
    std::size_t fixed_point_sweeps = 0;
};

/// Expected edge and non-edge mass between every class pair.
///
/// Undirected: off-diagonal cells sum tau_iq tau_jl over ordered pairs
/// i != j, diagonal cells over i < j, and both matrices are symmetric.
/// Directed: every cell sums over ordered pairs i != j. For hard tau these
/// are the block edge counts and non-edge counts.
struct BlockMass {
    Eigen::MatrixXd edges;
    Eigen::MatrixXd non_edges;
};

BlockMass block_mass(const Responsibilities& tau, const Graph& g);

/// Hard responsibilities: tau_iq = 1 iff labels[i] == q.
Responsibilities hard_responsibilities(const Labels& labels, std::size_t q);

/// Fixed-point update of tau holding q(alpha), q(pi) fixed. Runs until the
/// L1 change of a sweep falls below eps_tau or max_fixed_point_iters sweeps.
/// Each row is computed in log space with max subtraction, floored at 1e-300
/// and renormalised. Throws NumericalError on a non-finite intermediate.
EStepResult e_step(const VariationalState& state, const Graph& g, const Hyperparameters& h, const FitOptions& opts);

/// n_q = n0_q + sum_i tau_iq; eta / zeta add the expected edge / non-edge
/// mass between each class pair (within-class over i < j when undirected).
PosteriorCounts m_step(const Responsibilities& tau, const Graph& g, const Hyperparameters& h);

/// Lower bound valid for any state (not only after an M-step).
double lower_bound_general(const VariationalState& state, const Graph& g, const Hyperparameters& h);

/// Lower bound in the form it takes after an M-step: Dirichlet and Beta
/// normaliser ratios plus the entropy of q(Z). Only equals the true bound
/// when (n, eta, zeta) = m_step(tau).
double lower_bound_simplified(const VariationalState& state, const Graph& g, const Hyperparameters& h);

/// Alternates M- and E-steps, starting with an M-step on init_tau, until the
/// simplified bound changes by less than eps_elbo. Non-convergence is
/// reported through FitResult::converged, not thrown.
FitResult fit(const Graph& g, std::size_t q, const Hyperparameters& h, const Responsibilities& init_tau,
              const FitOptions& opts = {});

/// The ILvb model-selection criterion: the converged simplified bound.
double ilvb(const FitResult& result) noexcept;

/// Per-row argmax, ties to the lowest class index.
Labels map_labels(const Responsibilities& tau);

/// Entropy -sum tau ln tau with 0 ln 0 = 0.
double responsibility_entropy(const Responsibilities& tau);

} // namespace vbsbm
