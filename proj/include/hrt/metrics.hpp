#pragma once

#include "hrt/layout.hpp"

#include <json.hpp>

#include <set>

namespace hrt {

/// Cells whose occupation by a stationary agent cuts some other floor cell
/// off from an interaction tile it could reach before.
std::set<GridPos> critical_cells(const Layout& layout);

struct FluencyReport {
    int free_cells = 0;
    std::set<GridPos> critical;
    double fluency = 100.0; // percent of free cells that are not critical

    nlohmann::json to_json() const;
};

FluencyReport teaming_fluency(const Layout& layout);

/// The layout grid with critical cells drawn as 'x'.
std::string render_critical(const Layout& layout, const FluencyReport& report);

} // namespace hrt
