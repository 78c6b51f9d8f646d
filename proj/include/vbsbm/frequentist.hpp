#pragma once

// Frequentist variational EM for the SBM and the ICL criterion, used as the
// comparison baseline for ILvb.

#include "vbsbm/graph.hpp"
#include "vbsbm/vb_engine.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace vbsbm {

/// Point estimates plus the variational responsibilities.
struct FreqParams {
    Eigen::VectorXd alpha;
    Eigen::MatrixXd pi;
    Responsibilities tau;
};

struct FreqFitResult {
    FreqParams params;
    std::vector<double> bound_trace; ///< lower bound of ln p(X | alpha, pi) after every M-step
    double bound = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<std::string> warnings;
};

/// Probabilities inside logarithms are clamped to this distance from 0 and 1.
inline constexpr double kFreqProbabilityClamp = 1e-10;

/// Variational EM: fixed-point E-step on tau given (alpha, pi), closed-form
/// M-step alpha_q = mean tau_iq and pi_ql = expected edges / expected pairs.
/// A class pair with expected pair mass below 1e-12 gets the global density
/// and a warning. Stops when the bound changes by less than opts.eps_elbo.
FreqFitResult fit_freq(const Graph& g, std::size_t q, const Responsibilities& init_tau, const FitOptions& opts = {});

/// Maximised complete-data log-likelihood ln p(X, Z | alpha_hat, pi_hat) for hard labels Z.
double complete_log_likelihood(const Graph& g, const Labels& labels, std::size_t q);

/// BIC-style ICL penalty: (Q(Q+1)/4) ln(N(N-1)/2) + ((Q-1)/2) ln N for
/// undirected graphs, (Q^2/2) ln(N(N-1)) + ((Q-1)/2) ln N for directed ones.
double icl_penalty(std::size_t n_vertices, std::size_t q, bool directed);

/// ICL at the MAP labels of params.tau.
double icl(const Graph& g, const FreqParams& params, std::size_t q);

} // namespace vbsbm
