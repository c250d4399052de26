#pragma once

#include "hrt/lang/backend.hpp"
#include "hrt/manager_rules.hpp"

namespace hrt::lang {

/// Builds the five role requests for one session: the rendered template as
/// the system message, extra context plus the schema directive as the user
/// message, and the structured context the rule backend reads.
class RequestBuilder {
public:
    RequestBuilder(std::shared_ptr<const Layout> layout, RecipeBook book, std::uint64_t seed = 0);

    const Layout& layout() const { return *layout_; }
    const RecipeBook& book() const { return book_; }
    const LocationTable& locations() const { return loc_; }

    BackendRequest initial_graph(const WorldState& w, const Recipe& recipe) const;
    BackendRequest revision(const WorldState& w, const SubtaskGraph& g, const std::string& message) const;
    BackendRequest suggestion(const WorldState& w, const SubtaskGraph& g, double threshold) const;
    BackendRequest assignment(const WorldState& w, const SubtaskGraph& g, const AssignedPair& current,
                              const Exclusions& excluded) const;
    BackendRequest judge(const WorldState& prev, const WorldState& cur, const SubtaskGraph& g,
                         const AssignedPair& current, const std::array<bool, kAgentCount>& interacted) const;

private:
    BackendRequest make(TemplateId t, const Bindings& b, const std::string& extra, json context) const;

    std::shared_ptr<const Layout> layout_;
    RecipeBook book_;
    LocationTable loc_;
    std::uint64_t seed_;
    json base_;
};

} // namespace hrt::lang
