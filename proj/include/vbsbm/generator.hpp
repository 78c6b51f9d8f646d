#pragma once

#include "vbsbm/graph.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace vbsbm {

/// Parameters of a binary stochastic block model.
struct SbmParams {
    std::vector<double> alpha; ///< class proportions, on the simplex
    Eigen::MatrixXd pi;        ///< Q x Q connection probabilities

    std::size_t classes() const noexcept { return alpha.size(); }

    /// Throws ParameterError unless alpha sums to 1 (within 1e-12) with
    /// non-negative entries, pi is Q x Q in [0, 1], and pi is symmetric when
    /// `directed` is false.
    void validate(bool directed) const;
};

struct SbmSample {
    Graph graph;
    Labels labels;
};

/// Draws labels i.i.d. from alpha, then every dyad independently from
/// Bernoulli(pi[z_i, z_j]). Identical (params, n, seed) give identical output.
SbmSample sample_sbm(const SbmParams& params, std::size_t n_vertices, std::uint64_t seed, bool directed = false);

/// Diagonal lambda, off-diagonal epsilon.
Eigen::MatrixXd affiliation_matrix(std::size_t q, double lambda, double epsilon);

/// Affiliation structure on the first q - 1 classes; the last class is a hub
/// class connected with probability lambda to every class. Requires q >= 2.
Eigen::MatrixXd hub_matrix(std::size_t q, double lambda, double epsilon);

/// (1/q, ..., 1/q)
std::vector<double> equal_proportions(std::size_t q);

} // namespace vbsbm
