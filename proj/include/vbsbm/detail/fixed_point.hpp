#pragma once

#include "vbsbm/graph.hpp"
#include "vbsbm/vb_engine.hpp"

#include <Eigen/Dense>

namespace vbsbm::detail {

/// Per-class log-weights driving the responsibility fixed point:
///   log tau_iq = log_alpha_q + sum_{j != i} sum_l tau_jl (log_non_edge_ql + X_ij log_odds_ql) + const
/// (plus the transposed in-edge terms for directed graphs). The Bayesian
/// E-step plugs in digamma expectations, the frequentist one plain logs.
struct LogPotentials {
    Eigen::VectorXd log_alpha;
    Eigen::MatrixXd log_non_edge;
    Eigen::MatrixXd log_odds;
};

EStepResult fixed_point_tau(Responsibilities tau, const Graph& g, const LogPotentials& logs, const FitOptions& opts);

} // namespace vbsbm::detail
