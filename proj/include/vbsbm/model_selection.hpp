#pragma once

#include "vbsbm/graph.hpp"
#include "vbsbm/initializer.hpp"
#include "vbsbm/vb_engine.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

namespace vbsbm {

struct SelectionConfig {
    std::size_t q_min = 1;
    std::size_t q_max = 7;
    std::size_t restarts = 5;
    FitOptions fit;
    InitMethod init_method = InitMethod::ward;
    std::size_t kmeans_k = 40;
    double perturbation = 0.2;
    std::uint64_t seed = 0;
    bool with_icl = false;   ///< also run the frequentist fits and report ICL
    std::size_t threads = 1; ///< 0 = hardware concurrency

    void validate() const;
};

/// Outcome of one (Q, restart) cell.
struct RestartRecord {
    std::size_t q = 0;
    std::size_t restart = 0;
    double ilvb = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    std::optional<double> icl;
    std::string error; ///< non-empty when the fit threw
};

struct CriterionRow {
    std::size_t q = 0;
    std::size_t best_restart = 0;
    FitResult best;          ///< max-ILvb fit over restarts
    std::optional<double> icl; ///< max ICL over restarts
};

struct SelectionReport {
    std::vector<CriterionRow> rows;        ///< ascending Q
    std::vector<RestartRecord> restarts;   ///< ordered by (Q, restart)
    std::size_t q_star = 0;
    std::optional<std::size_t> q_star_icl;

    const CriterionRow& row(std::size_t q) const;
};

/// Fits every Q in [q_min, q_max] from `restarts` initialisations and keeps
/// the fit with the largest ILvb per Q. Q* maximises ILvb; values within
/// 1e-9 of each other tie and go to the smaller Q. Throws SelectionError if
/// every restart of some Q fails.
/// `priors(q)` supplies the hyperparameters for each Q; Jeffreys by default.
SelectionReport select_q(const Graph& g, const SelectionConfig& cfg,
                         const std::function<Hyperparameters(std::size_t)>& priors = Hyperparameters::jeffreys);

/// Index of the maximal value, ties within `tolerance` going to the first.
std::size_t argmax_first(const std::vector<double>& values, double tolerance = 1e-9);

class SelectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace vbsbm
