#pragma once

// Text formats for fit and selection results. Numbers are written with 10
// significant digits.

#include "vbsbm/graph.hpp"
#include "vbsbm/model_selection.hpp"
#include "vbsbm/vb_engine.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace vbsbm {

/// printf "%.10g".
std::string format_number(double value);

/// Value rounded to the 10 significant digits it is printed with.
double round_for_output(double value);

/// Fields: q, n_vertices, directed, ilvb, converged, iterations,
/// fixed_point_sweeps, elbo_trace, map_labels, n, eta, zeta, and tau when
/// include_tau is set.
nlohmann::json fit_result_to_json(const FitResult& result, const Graph& g, bool include_tau);

/// Inverse of fit_result_to_json. state.tau is left empty (N x 0) when the
/// document carries no tau block. Throws ParseError on missing fields.
FitResult fit_result_from_json(const nlohmann::json& doc);

/// Columns: Q, restart, ilvb, converged, iterations (plus icl when present).
void write_selection_csv(const SelectionReport& report, std::ostream& out);

/// q_star, optional q_star_icl, and the per-Q criterion table.
nlohmann::json selection_summary_json(const SelectionReport& report);

} // namespace vbsbm
