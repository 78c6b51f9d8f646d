#pragma once

// Exact Bayesian quantities by brute force, for graphs small enough that
// all Q^N label assignments can be enumerated.

#include "vbsbm/graph.hpp"
#include "vbsbm/vb_engine.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace vbsbm {

struct OracleLimits {
    std::size_t max_assignments = 2'000'000;
};

/// ln p(X, Z) with alpha and pi integrated out under the conjugate priors.
/// Throws ParameterError if a label is >= q or the labelling has the wrong length.
double exact_complete_log(const Graph& g, const Labels& z, std::size_t q, const Hyperparameters& h);

/// ln p(X) = ln sum_Z p(X, Z). Throws CapacityError when Q^N exceeds the limit.
double exact_log_marginal(const Graph& g, std::size_t q, const Hyperparameters& h, const OracleLimits& limits = {});

/// Exact posterior co-clustering probabilities P(z_i = z_j | X), N x N.
/// Unlike per-vertex class posteriors these are invariant to label switching.
Eigen::MatrixXd exact_coclustering(const Graph& g, std::size_t q, const Hyperparameters& h,
                                   const OracleLimits& limits = {});

} // namespace vbsbm
