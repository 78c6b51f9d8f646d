#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace vbsbm {

/// Per-vertex class index, 0-based.
using Labels = std::vector<std::size_t>;

using Edge = std::pair<std::size_t, std::size_t>;

/// Binary relational data X on N vertices.
///
/// Stored densely (one byte per ordered pair) together with sorted
/// neighbour lists. Undirected graphs keep X symmetric; the diagonal is
/// always zero since self-loops are not modelled. Immutable once built.
class Graph {
public:
    Graph() = default;

    /// Builds a graph from an edge list. Duplicate edges collapse; for
    /// undirected graphs (i, j) and (j, i) denote the same edge.
    /// Throws ParameterError on out-of-range endpoints or self-loops.
    Graph(std::size_t n_vertices, std::span<const Edge> edges, bool directed = false);

    std::size_t size() const noexcept { return n_; }
    bool directed() const noexcept { return directed_; }
    bool self_loops() const noexcept { return false; }

    bool has_edge(std::size_t i, std::size_t j) const noexcept { return adjacency_[i * n_ + j] != 0; }

    /// Row i of X as 0/1 bytes.
    std::span<const std::uint8_t> row(std::size_t i) const noexcept {
        return {adjacency_.data() + i * n_, n_};
    }

    /// Vertices j with X_ij = 1, ascending.
    std::span<const std::uint32_t> out_neighbors(std::size_t i) const noexcept {
        return {out_.data() + out_offsets_[i], out_offsets_[i + 1] - out_offsets_[i]};
    }
    /// Vertices j with X_ji = 1, ascending. Same as out_neighbors when undirected.
    std::span<const std::uint32_t> in_neighbors(std::size_t i) const noexcept {
        return {in_.data() + in_offsets_[i], in_offsets_[i + 1] - in_offsets_[i]};
    }

    /// Unordered present edges (undirected) or ordered present pairs (directed).
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Number of modelled dyads: N(N-1)/2 undirected, N(N-1) directed.
    std::size_t pair_count() const noexcept;

    double density() const noexcept;

    /// Edges as (i, j) with i < j when undirected, all ordered pairs when directed.
    std::vector<Edge> edges() const;

    /// Graph with vertex v renamed to perm[v].
    Graph permuted(std::span<const std::size_t> perm) const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.directed_ == b.directed_ && a.adjacency_ == b.adjacency_;
    }

private:
    std::size_t n_ = 0;
    bool directed_ = false;
    std::size_t edge_count_ = 0;
    std::vector<std::uint8_t> adjacency_;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<std::uint32_t> out_;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<std::uint32_t> in_;
};

/// Reads whitespace-separated 0-based vertex pairs, one per line. Blank
/// lines and lines starting with '#' are skipped. Throws ParseError naming
/// the offending line.
Graph load_edge_list(std::istream& in, std::size_t n_vertices, bool directed = false);

/// Writes one "i j" line per edge; undirected edges once with i < j.
void write_edge_list(const Graph& g, std::ostream& out);

/// Reads N rows of N comma-separated 0/1 entries.
Graph load_adjacency_csv(std::istream& in, bool directed = false);

/// One label per line.
Labels load_labels(std::istream& in);
void write_labels(const Labels& labels, std::ostream& out);

/// Number of classes used, i.e. max label + 1 (0 for an empty vector).
std::size_t label_count(const Labels& labels) noexcept;

} // namespace vbsbm
