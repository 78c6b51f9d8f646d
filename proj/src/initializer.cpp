#include "vbsbm/initializer.hpp"

#include "vbsbm/errors.hpp"
#include "vbsbm/random.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace vbsbm {
namespace {

using Eigen::Index;

Eigen::MatrixXd adjacency_rows(const Graph& g) {
    const auto n = static_cast<Index>(g.size());
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(n, g.directed() ? 2 * n : n);
    for (Index i = 0; i < n; ++i) {
        for (const auto j : g.out_neighbors(static_cast<std::size_t>(i))) {
            rows(i, static_cast<Index>(j)) = 1.0;
        }
        if (g.directed()) {
            for (const auto j : g.in_neighbors(static_cast<std::size_t>(i))) {
                rows(i, n + static_cast<Index>(j)) = 1.0;
            }
        }
    }
    return rows;
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& points) {
    const Eigen::MatrixXd gram = points * points.transpose();
    const Eigen::VectorXd norms = gram.diagonal();
    Eigen::MatrixXd d = (-2.0 * gram).colwise() + norms;
    d.rowwise() += norms.transpose();
    return d.cwiseMax(0.0);
}

void check_classes(std::size_t q, std::size_t n) {
    if (q == 0) {
        throw ParameterError("number of classes must be at least 1");
    }
    if (q > n) {
        throw ParameterError("number of classes (" + std::to_string(q) + ") exceeds vertex count (" +
                             std::to_string(n) + ")");
    }
}

} // namespace

WardDendrogram::WardDendrogram(const Eigen::MatrixXd& points, std::vector<double> weights)
    : n_(static_cast<std::size_t>(points.rows())) {
    if (weights.empty()) {
        weights.assign(n_, 1.0);
    }
    if (weights.size() != n_) {
        throw ParameterError("one weight per point required");
    }
    // Ward cost between singletons a, b (up to a common factor):
    // 2 w_a w_b / (w_a + w_b) * |x_a - x_b|^2, which is |x_a - x_b|^2 for unit weights.
    Eigen::MatrixXd distance = squared_distances(points);
    for (std::size_t a = 0; a < n_; ++a) {
        for (std::size_t b = 0; b < n_; ++b) {
            const double scale = 2.0 * weights[a] * weights[b] / (weights[a] + weights[b]);
            distance(static_cast<Index>(a), static_cast<Index>(b)) *= scale;
        }
    }
    build(std::move(distance), std::move(weights));
}

WardDendrogram WardDendrogram::from_graph(const Graph& g) { return WardDendrogram(adjacency_rows(g)); }

void WardDendrogram::build(Eigen::MatrixXd distance, std::vector<double> weights) {
    std::vector<std::size_t> active(n_);
    std::iota(active.begin(), active.end(), std::size_t{0});
    merges_.reserve(n_ > 0 ? n_ - 1 : 0);
    heights_.reserve(merges_.capacity());

    while (active.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_a = 0;
        std::size_t best_b = 0;
        for (std::size_t x = 0; x < active.size(); ++x) {
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                const double d = distance(static_cast<Index>(active[x]), static_cast<Index>(active[y]));
                if (d < best) {
                    best = d;
                    best_a = x;
                    best_b = y;
                }
            }
        }
        const std::size_t keep = active[best_a];
        const std::size_t gone = active[best_b];
        const double w_keep = weights[keep];
        const double w_gone = weights[gone];
        for (const auto k : active) {
            if (k == keep || k == gone) {
                continue;
            }
            const double w_k = weights[k];
            const auto ik = static_cast<Index>(k);
            const double updated = ((w_keep + w_k) * distance(ik, static_cast<Index>(keep)) +
                                    (w_gone + w_k) * distance(ik, static_cast<Index>(gone)) - w_k * best) /
                                   (w_keep + w_gone + w_k);
            distance(ik, static_cast<Index>(keep)) = updated;
            distance(static_cast<Index>(keep), ik) = updated;
        }
        weights[keep] = w_keep + w_gone;
        merges_.emplace_back(keep, gone);
        heights_.push_back(best);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    }
}

Labels WardDendrogram::cut(std::size_t q) const {
    check_classes(q, n_);
    std::vector<std::size_t> parent(n_);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t m = 0; m < n_ - q; ++m) {
        parent[find(merges_[m].second)] = find(merges_[m].first);
    }
    Labels labels(n_);
    std::vector<std::size_t> id_of_root(n_, n_);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        const auto root = find(i);
        if (id_of_root[root] == n_) {
            id_of_root[root] = next++;
        }
        labels[i] = id_of_root[root];
    }
    return labels;
}

Labels ward_labels(const Graph& g, std::size_t q) {
    check_classes(q, g.size());
    return WardDendrogram::from_graph(g).cut(q);
}

Responsibilities ward_init(const Graph& g, std::size_t q) { return hard_responsibilities(ward_labels(g, q), q); }

KMeansResult kmeans_rows(const Graph& g, std::size_t k, std::uint64_t seed, std::size_t max_iterations) {
    check_classes(k, g.size());
    const Eigen::MatrixXd points = adjacency_rows(g);
    const auto n = static_cast<Index>(points.rows());
    const auto kk = static_cast<Index>(k);

    // k distinct random rows as initial centres (partial Fisher-Yates).
    Rng rng(seed);
    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    KMeansResult result;
    result.centroids.resize(kk, points.cols());
    for (std::size_t c = 0; c < k; ++c) {
        std::swap(order[c], order[c + rng.index(order.size() - c)]);
        result.centroids.row(static_cast<Index>(c)) = points.row(static_cast<Index>(order[c]));
    }

    Labels& labels = result.labels;
    Labels previous;
    Eigen::VectorXd point_cost(n);
    for (std::size_t iter = 1; iter <= max_iterations; ++iter) {
        labels.assign(g.size(), 0);
        double sse = 0.0;
        for (Index i = 0; i < n; ++i) {
            Index best = 0;
            double best_d = (points.row(i) - result.centroids.row(0)).squaredNorm();
            for (Index c = 1; c < kk; ++c) {
                const double d = (points.row(i) - result.centroids.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
            point_cost(i) = best_d;
            sse += best_d;
        }
        result.sse_trace.push_back(sse);
        result.iterations = iter;
        if (labels == previous) {
            result.converged = true;
            break;
        }

        std::vector<std::size_t> sizes(k, 0);
        for (const auto z : labels) {
            ++sizes[z];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] != 0) {
                continue;
            }
            Index far = -1;
            for (Index i = 0; i < n; ++i) {
                if (sizes[labels[static_cast<std::size_t>(i)]] > 1 && (far < 0 || point_cost(i) > point_cost(far))) {
                    far = i;
                }
            }
            --sizes[labels[static_cast<std::size_t>(far)]];
            labels[static_cast<std::size_t>(far)] = c;
            sizes[c] = 1;
            point_cost(far) = 0.0;
        }

        result.centroids.setZero();
        for (Index i = 0; i < n; ++i) {
            result.centroids.row(static_cast<Index>(labels[static_cast<std::size_t>(i)])) += points.row(i);
        }
        for (std::size_t c = 0; c < k; ++c) {
            result.centroids.row(static_cast<Index>(c)) /= static_cast<double>(sizes[c]);
        }
        previous = labels;
    }
    return result;
}

Labels kmeans_then_ward(const Graph& g, std::size_t q, std::size_t kmeans_k, std::uint64_t seed) {
    check_classes(q, g.size());
    if (kmeans_k < q) {
        throw ParameterError("kmeans_k (" + std::to_string(kmeans_k) + ") must be at least the number of classes (" +
                             std::to_string(q) + ")");
    }
    const auto k = std::min(kmeans_k, g.size());
    const KMeansResult km = kmeans_rows(g, k, seed);

    std::vector<double> sizes(k, 0.0);
    for (const auto z : km.labels) {
        sizes[z] += 1.0;
    }
    std::vector<std::size_t> compact(k, k);
    std::vector<Index> kept;
    std::vector<double> weights;
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] > 0.0) {
            compact[c] = kept.size();
            kept.push_back(static_cast<Index>(c));
            weights.push_back(sizes[c]);
        }
    }
    if (kept.size() < q) {
        return ward_labels(g, q);
    }
    const Eigen::MatrixXd centres = km.centroids(kept, Eigen::all);
    const Labels group = WardDendrogram(centres, std::move(weights)).cut(q);

    // Renumber by first vertex so the output does not depend on k-means slot order.
    Labels labels(g.size());
    std::vector<std::size_t> renumber(q, q);
    std::size_t next = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto gid = group[compact[km.labels[i]]];
        if (renumber[gid] == q) {
            renumber[gid] = next++;
        }
        labels[i] = renumber[gid];
    }
    return labels;
}

Labels random_labels(std::size_t n, std::size_t q, std::uint64_t seed) {
    if (q == 0) {
        throw ParameterError("number of classes must be at least 1");
    }
    Rng rng(seed);
    Labels labels(n);
    for (auto& z : labels) {
        z = rng.index(q);
    }
    return labels;
}

Labels perturb_labels(const Labels& labels, std::size_t q, double fraction, std::uint64_t seed) {
    if (q == 0) {
        throw ParameterError("number of classes must be at least 1");
    }
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw ParameterError("perturbation fraction must lie in [0, 1]");
    }
    Rng rng(seed);
    Labels out = labels;
    for (auto& z : out) {
        if (rng.bernoulli(fraction)) {
            z = rng.index(q);
        }
    }
    return out;
}

Labels initial_labels(const Graph& g, std::size_t q, const InitConfig& cfg, std::size_t restart,
                      const WardDendrogram* dendrogram) {
    check_classes(q, g.size());
    switch (cfg.method) {
    case InitMethod::ward: {
        const Labels base = dendrogram ? dendrogram->cut(q) : ward_labels(g, q);
        if (restart == 0) {
            return base;
        }
        return perturb_labels(base, q, cfg.perturbation, derive_seed(cfg.seed, {q, restart}));
    }
    case InitMethod::kmeans_then_ward:
        return kmeans_then_ward(g, q, cfg.kmeans_k, derive_seed(cfg.seed, {restart}));
    case InitMethod::random:
        return random_labels(g.size(), q, derive_seed(cfg.seed, {q, restart}));
    }
    throw ParameterError("unknown initialisation method");
}

} // namespace vbsbm
