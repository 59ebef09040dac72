#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gegen/ellipse_bounds.hpp"
#include "gegen/experiment.hpp"

namespace gegen {

/// %.17g, so every double round-trips.
std::string format_real(double x);

nlohmann::json to_json(const BoundBreakdown& b);

// CSV writers. The header row comes first; the nodes dump separates its tables
// with '#' comment lines.
void write_nodes_csv(std::ostream& os, const std::vector<NodesTable>& tables);
void write_fig2_csv(std::ostream& os, const std::vector<Fig2Row>& rows);
void write_fig3_csv(std::ostream& os, const Fig3Result& result);
void write_expansion_csv(std::ostream& os, const std::vector<ExpansionRow>& rows);

nlohmann::json nodes_json(const std::vector<NodesTable>& tables);
nlohmann::json fig2_json(const std::vector<Fig2Row>& rows);
nlohmann::json fig3_json(const Fig3Result& result);
nlohmann::json expansion_json(const std::vector<ExpansionRow>& rows);

/// Dominance count and slope fits of a fig3 run.
nlohmann::json fig3_summary_json(const Fig3Result& result, double slack);

}  // namespace gegen
