#pragma once

// Starting partitions for the EM fits.
//
// Vertices are compared through their adjacency rows (for directed graphs
// the out-row concatenated with the in-column), using squared Euclidean
// distance, i.e. the number of discordant entries.

#include "vbsbm/graph.hpp"
#include "vbsbm/vb_engine.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace vbsbm {

enum class InitMethod { ward, kmeans_then_ward, random };

struct InitConfig {
    InitMethod method = InitMethod::ward;
    std::size_t kmeans_k = 40;
    std::uint64_t seed = 0;
    /// Share of vertices relabelled at random in restarts 2..R of the Ward policy.
    double perturbation = 0.2;
};

/// Agglomerative Ward clustering of weighted points.
///
/// Starts from one cluster per point and repeatedly merges the pair with
/// the smallest Ward cost, updated with the Lance-Williams recurrence. Ties
/// go to the lexicographically smallest pair of cluster slots. The merge
/// sequence is computed once; cut() can then be asked for any q.
class WardDendrogram {
public:
    /// Points are the rows of `points`; `weights` (cluster sizes) default to 1.
    explicit WardDendrogram(const Eigen::MatrixXd& points, std::vector<double> weights = {});

    /// Dendrogram over the adjacency rows of g.
    static WardDendrogram from_graph(const Graph& g);

    std::size_t size() const noexcept { return n_; }

    /// Partition into q clusters (1 <= q <= size()). Clusters are numbered in
    /// order of their smallest member.
    Labels cut(std::size_t q) const;

    /// Merge costs in merge order: twice the increase in within-cluster sum of
    /// squares, so the squared distance when two single points merge.
    /// Non-decreasing for Ward linkage.
    const std::vector<double>& heights() const noexcept { return heights_; }

private:
    void build(Eigen::MatrixXd distance, std::vector<double> weights);

    std::size_t n_ = 0;
    std::vector<std::pair<std::size_t, std::size_t>> merges_; // (kept slot, absorbed slot)
    std::vector<double> heights_;
};

/// Hard Ward partition of the adjacency rows into q groups.
Labels ward_labels(const Graph& g, std::size_t q);

/// ward_labels as a hard N x Q responsibility matrix.
Responsibilities ward_init(const Graph& g, std::size_t q);

struct KMeansResult {
    Labels labels;
    Eigen::MatrixXd centroids;      ///< k x dim
    std::vector<double> sse_trace;  ///< within-cluster SSE after each assignment step
    std::size_t iterations = 0;
    bool converged = false;
};

/// Lloyd's algorithm on adjacency rows with k distinct random rows as initial
/// centres. Stops when assignments repeat or after max_iterations. Ties go to
/// the lowest cluster index; an empty cluster is re-seeded with the point
/// farthest from its centre.
KMeansResult kmeans_rows(const Graph& g, std::size_t k, std::uint64_t seed, std::size_t max_iterations = 100);

/// k-means to kmeans_k groups, Ward on the size-weighted centroids down to q,
/// every vertex inheriting the Ward group of its k-means cluster.
Labels kmeans_then_ward(const Graph& g, std::size_t q, std::size_t kmeans_k, std::uint64_t seed);

/// Uniform random labels in {0, ..., q-1}.
Labels random_labels(std::size_t n, std::size_t q, std::uint64_t seed);

/// Relabels each vertex with probability `fraction` to a uniformly drawn class.
Labels perturb_labels(const Labels& labels, std::size_t q, double fraction, std::uint64_t seed);

/// Restart policy. Restart 0 uses the deterministic method output; later
/// restarts perturb the Ward partition, draw new k-means centres, or draw
/// fresh random labels depending on the method. A precomputed dendrogram can
/// be passed to avoid rebuilding it for every q.
Labels initial_labels(const Graph& g, std::size_t q, const InitConfig& cfg, std::size_t restart,
                      const WardDendrogram* dendrogram = nullptr);

} // namespace vbsbm
