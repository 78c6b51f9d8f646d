#include "vbsbm/graph.hpp"

#include "vbsbm/errors.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace vbsbm {
namespace {

void build_csr(std::size_t n, const std::vector<std::uint8_t>& adjacency, bool transpose,
               std::vector<std::size_t>& offsets, std::vector<std::uint32_t>& targets) {
    offsets.assign(n + 1, 0);
    targets.clear();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto x = transpose ? adjacency[j * n + i] : adjacency[i * n + j];
            if (x) {
                targets.push_back(static_cast<std::uint32_t>(j));
            }
        }
        offsets[i + 1] = targets.size();
    }
}

bool skip_line(const std::string& line) {
    const auto first = line.find_first_not_of(" \t\r");
    return first == std::string::npos || line[first] == '#';
}

} // namespace

Graph::Graph(std::size_t n_vertices, std::span<const Edge> edges, bool directed)
    : n_(n_vertices), directed_(directed), adjacency_(n_vertices * n_vertices, 0) {
    if (n_vertices > std::numeric_limits<std::uint32_t>::max()) {
        throw ParameterError("graph too large");
    }
    for (const auto& [i, j] : edges) {
        if (i >= n_ || j >= n_) {
            throw ParameterError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                                 ") out of range for " + std::to_string(n_) + " vertices");
        }
        if (i == j) {
            throw ParameterError("self-loop at vertex " + std::to_string(i) + " not supported");
        }
        adjacency_[i * n_ + j] = 1;
        if (!directed_) {
            adjacency_[j * n_ + i] = 1;
        }
    }
    build_csr(n_, adjacency_, false, out_offsets_, out_);
    if (directed_) {
        build_csr(n_, adjacency_, true, in_offsets_, in_);
    } else {
        in_offsets_ = out_offsets_;
        in_ = out_;
    }
    edge_count_ = directed_ ? out_.size() : out_.size() / 2;
}

std::size_t Graph::pair_count() const noexcept {
    const std::size_t ordered = n_ == 0 ? 0 : n_ * (n_ - 1);
    return directed_ ? ordered : ordered / 2;
}

double Graph::density() const noexcept {
    const auto pairs = pair_count();
    return pairs == 0 ? 0.0 : static_cast<double>(edge_count_) / static_cast<double>(pairs);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> result;
    result.reserve(edge_count_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (const auto j : out_neighbors(i)) {
            if (directed_ || i < j) {
                result.emplace_back(i, j);
            }
        }
    }
    return result;
}

Graph Graph::permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) {
        throw ParameterError("permutation length does not match vertex count");
    }
    auto list = edges();
    for (auto& [i, j] : list) {
        i = perm[i];
        j = perm[j];
    }
    return Graph(n_, list, directed_);
}

Graph load_edge_list(std::istream& in, std::size_t n_vertices, bool directed) {
    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line)) {
            continue;
        }
        std::istringstream fields(line);
        long long i = -1;
        long long j = -1;
        if (!(fields >> i >> j)) {
            throw ParseError("expected two vertex indices", line_no);
        }
        std::string extra;
        if (fields >> extra) {
            throw ParseError("unexpected trailing field '" + extra + "'", line_no);
        }
        if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n_vertices ||
            static_cast<std::size_t>(j) >= n_vertices) {
            throw ParseError("vertex index out of range [0, " + std::to_string(n_vertices) + ")", line_no);
        }
        if (i == j) {
            throw ParseError("self-loop at vertex " + std::to_string(i), line_no);
        }
        edges.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    if (in.bad()) {
        throw ParseError("read failure", line_no);
    }
    return Graph(n_vertices, edges, directed);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    for (const auto& [i, j] : g.edges()) {
        out << i << ' ' << j << '\n';
    }
    if (!out) {
        throw std::ios_base::failure("failed writing edge list");
    }
}

Graph load_adjacency_csv(std::istream& in, bool directed) {
    std::vector<std::vector<std::uint8_t>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line)) {
            continue;
        }
        std::vector<std::uint8_t> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            const auto first = cell.find_first_not_of(" \t\r");
            const auto last = cell.find_last_not_of(" \t\r");
            if (first == std::string::npos || first != last || (cell[first] != '0' && cell[first] != '1')) {
                throw ParseError("entries must be 0 or 1", line_no);
            }
            row.push_back(cell[first] == '1' ? 1 : 0);
        }
        rows.push_back(std::move(row));
    }
    const auto n = rows.size();
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) {
            throw ParseError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                 " entries, expected " + std::to_string(n),
                             0);
        }
        if (rows[i][i]) {
            throw ParseError("self-loop at vertex " + std::to_string(i), 0);
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!rows[i][j]) {
                continue;
            }
            if (!directed && !rows[j][i]) {
                throw ParseError("undirected adjacency matrix is not symmetric at (" + std::to_string(i) + ", " +
                                     std::to_string(j) + ")",
                                 0);
            }
            edges.emplace_back(i, j);
        }
    }
    return Graph(n, edges, directed);
}

Labels load_labels(std::istream& in) {
    Labels labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line)) {
            continue;
        }
        std::istringstream fields(line);
        long long value = -1;
        std::string extra;
        if (!(fields >> value) || value < 0 || (fields >> extra)) {
            throw ParseError("expected one non-negative integer label", line_no);
        }
        labels.push_back(static_cast<std::size_t>(value));
    }
    return labels;
}

void write_labels(const Labels& labels, std::ostream& out) {
    for (const auto z : labels) {
        out << z << '\n';
    }
    if (!out) {
        throw std::ios_base::failure("failed writing labels");
    }
}

std::size_t label_count(const Labels& labels) noexcept {
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

} // namespace vbsbm
