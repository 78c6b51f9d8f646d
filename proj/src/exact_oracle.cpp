#include "vbsbm/exact_oracle.hpp"

#include "vbsbm/errors.hpp"
#include "vbsbm/special_math.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace vbsbm {
namespace {

using Eigen::Index;
using special::ln_beta;
using special::ln_gamma;

void check_budget(std::size_t n, std::size_t q, const OracleLimits& limits) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > limits.max_assignments / q) {
            throw CapacityError("enumeration needs " + std::to_string(q) + "^" + std::to_string(n) +
                                " assignments, limit is " + std::to_string(limits.max_assignments));
        }
        total *= q;
    }
    if (total > limits.max_assignments) {
        throw CapacityError("enumeration needs " + std::to_string(q) + "^" + std::to_string(n) +
                            " assignments, limit is " + std::to_string(limits.max_assignments));
    }
}

/// Sufficient statistics of a labelling, maintained incrementally while
/// single labels change.
class BlockCounts {
public:
    BlockCounts(const Graph& g, std::size_t q, const Labels& z)
        : g_(g), q_(q), z_(z), sizes_(q, 0), edges_(q * q, 0), pairs_(q * q, 0) {
        for (std::size_t i = 0; i < z_.size(); ++i) {
            ++sizes_[z_[i]];
            for (std::size_t j = 0; j < i; ++j) {
                add_dyad(j, i, +1);
            }
        }
    }

    void relabel(std::size_t v, std::size_t to) {
        if (z_[v] == to) {
            return;
        }
        for (std::size_t u = 0; u < z_.size(); ++u) {
            if (u != v) {
                add_dyad(u, v, -1);
            }
        }
        --sizes_[z_[v]];
        z_[v] = to;
        ++sizes_[to];
        for (std::size_t u = 0; u < z_.size(); ++u) {
            if (u != v) {
                add_dyad(u, v, +1);
            }
        }
    }

    double log_joint(const Hyperparameters& h) const {
        double value = ln_gamma(h.n0.sum()) - ln_gamma(h.n0.sum() + static_cast<double>(z_.size()));
        for (std::size_t a = 0; a < q_; ++a) {
            const auto k = static_cast<Index>(a);
            value += ln_gamma(h.n0(k) + static_cast<double>(sizes_[a])) - ln_gamma(h.n0(k));
        }
        for (std::size_t a = 0; a < q_; ++a) {
            for (std::size_t b = g_.directed() ? 0 : a; b < q_; ++b) {
                const double e = edges_[a * q_ + b];
                const double m = pairs_[a * q_ + b];
                const auto ka = static_cast<Index>(a);
                const auto kb = static_cast<Index>(b);
                value += ln_beta(h.eta0(ka, kb) + e, h.zeta0(ka, kb) + m - e) - ln_beta(h.eta0(ka, kb), h.zeta0(ka, kb));
            }
        }
        return value;
    }

    const Labels& labels() const noexcept { return z_; }

private:
    // Adds the dyad(s) between u and v, u != v.
    void add_dyad(std::size_t u, std::size_t v, long sign) {
        if (g_.directed()) {
            bump(z_[u], z_[v], g_.has_edge(u, v), sign);
            bump(z_[v], z_[u], g_.has_edge(v, u), sign);
        } else {
            const auto a = std::min(z_[u], z_[v]);
            const auto b = std::max(z_[u], z_[v]);
            bump(a, b, g_.has_edge(u, v), sign);
        }
    }

    void bump(std::size_t a, std::size_t b, bool edge, long sign) {
        pairs_[a * q_ + b] += sign;
        if (edge) {
            edges_[a * q_ + b] += sign;
        }
    }

    const Graph& g_;
    std::size_t q_;
    Labels z_;
    std::vector<long> sizes_;
    std::vector<long> edges_;
    std::vector<long> pairs_;
};

/// Streaming log-sum-exp.
class LogSum {
public:
    void add(double x) {
        if (x <= max_) {
            sum_ += std::exp(x - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - x) + 1.0;
            max_ = x;
        }
    }
    double value() const { return max_ + std::log(sum_); }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
};

/// Calls f(counts) for every labelling in mixed-radix order.
template <typename F>
void enumerate(const Graph& g, std::size_t q, const OracleLimits& limits, F&& f) {
    if (q == 0) {
        throw ParameterError("number of classes must be at least 1");
    }
    check_budget(g.size(), q, limits);
    BlockCounts counts(g, q, Labels(g.size(), 0));
    const std::size_t n = g.size();
    while (true) {
        f(counts);
        // Odometer increment: the least significant digit is the last vertex.
        std::size_t pos = n;
        while (pos > 0) {
            --pos;
            const auto next = counts.labels()[pos] + 1;
            if (next < q) {
                counts.relabel(pos, next);
                break;
            }
            counts.relabel(pos, 0);
            if (pos == 0) {
                return;
            }
        }
        if (n == 0) {
            return;
        }
    }
}

} // namespace

double exact_complete_log(const Graph& g, const Labels& z, std::size_t q, const Hyperparameters& h) {
    if (z.size() != g.size()) {
        throw ParameterError("labelling length does not match vertex count");
    }
    for (const auto label : z) {
        if (label >= q) {
            throw ParameterError("label " + std::to_string(label) + " out of range for " + std::to_string(q) +
                                 " classes");
        }
    }
    h.validate(q, g.directed());
    return BlockCounts(g, q, z).log_joint(h);
}

double exact_log_marginal(const Graph& g, std::size_t q, const Hyperparameters& h, const OracleLimits& limits) {
    h.validate(q, g.directed());
    LogSum total;
    enumerate(g, q, limits, [&](const BlockCounts& c) { total.add(c.log_joint(h)); });
    return total.value();
}

Eigen::MatrixXd exact_coclustering(const Graph& g, std::size_t q, const Hyperparameters& h,
                                   const OracleLimits& limits) {
    h.validate(q, g.directed());
    const auto n = static_cast<Index>(g.size());
    const double log_marginal = exact_log_marginal(g, q, h, limits);
    Eigen::MatrixXd together = Eigen::MatrixXd::Zero(n, n);
    enumerate(g, q, limits, [&](const BlockCounts& c) {
        const double weight = std::exp(c.log_joint(h) - log_marginal);
        const auto& z = c.labels();
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                if (z[static_cast<std::size_t>(i)] == z[static_cast<std::size_t>(j)]) {
                    together(i, j) += weight;
                }
            }
        }
    });
    return together;
}

} // namespace vbsbm
