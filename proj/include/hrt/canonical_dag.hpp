#pragma once

#include "hrt/subtask_graph.hpp"

namespace hrt {

/// The six-step soup procedure as a DAG: for every ingredient unit a pick and
/// a put-in-pot, then start cooking, pick a dish, pick the soup and serve it.
/// Picking the dish has no prerequisites. Statuses are normalized (the picks
/// start ReadyToExecute); edge costs and priorities are left at zero.
SubtaskGraph canonical_dag(const Recipe& recipe, const Layout& layout);

std::vector<SubtaskNode> canonical_nodes(const Recipe& recipe, const Layout& layout);

} // namespace hrt
