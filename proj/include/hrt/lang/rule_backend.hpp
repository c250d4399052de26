#pragma once

#include "hrt/lang/backend.hpp"

#include <mutex>

namespace hrt::lang {

/// Model-free implementation of every language role. Reads the request's
/// structured context (never the prose), so identical requests produce
/// identical bytes. Safe to share across sessions.
class RuleBackend final : public Backend {
public:
    BackendResponse complete(const BackendRequest& request) override;
    std::string name() const override { return "rule"; }
    bool deterministic() const override { return true; }

    /// The payload alone; throws std::invalid_argument on missing context.
    json payload(const BackendRequest& request);

private:
    std::shared_ptr<const Layout> layout_for(const json& context);

    std::mutex mu_;
    std::map<std::string, std::shared_ptr<const Layout>> layouts_; // keyed by layout text + recipe book
};

/// Context keys shared by every request.
json base_context(const Layout& layout, const RecipeBook& book);

} // namespace hrt::lang
