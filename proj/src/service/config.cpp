#include "hrt/service/config.hpp"

#include "hrt/errors.hpp"

#include <toml.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hrt::service {

namespace {

int env_int(const char* name, int fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0') throw ValidationError(std::string(name) + " must be an integer, got \"" + v + "\"");
    return static_cast<int>(n);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

} // namespace

ServiceConfig ServiceConfig::from_toml(std::string_view text, const std::filesystem::path& base) {
    toml::table t;
    try {
        t = toml::parse(text);
    } catch (const toml::parse_error& e) {
        throw ValidationError(std::string("service config: ") + std::string(e.description()));
    }
    ServiceConfig c;
    c.host = t["host"].value_or(c.host);
    c.port = static_cast<int>(t["port"].value_or<std::int64_t>(c.port));
    c.tick_hz = static_cast<int>(t["tick_hz"].value_or<std::int64_t>(c.tick_hz));
    c.reconnect_seconds = static_cast<int>(t["reconnect_seconds"].value_or<std::int64_t>(c.reconnect_seconds));
    c.threads = static_cast<int>(t["threads"].value_or<std::int64_t>(c.threads));
    if (auto v = t["layout"].value<std::string>()) c.layout = resolve(base, *v);
    if (auto v = t["recipe_book"].value<std::string>()) c.recipe_book = resolve(base, *v);
    if (auto v = t["record_dir"].value<std::string>()) c.record_dir = resolve(base, *v);
    if (const toml::table* b = t["backend"].as_table()) {
        if (auto k = (*b)["kind"].value<std::string>()) {
            const auto kind = backend_from_string(*k);
            if (!kind) throw ValidationError("service config: unknown backend " + *k);
            c.backend.kind = *kind;
        }
        if (auto v = (*b)["fixture"].value<std::string>()) c.backend.fixture = resolve(base, *v);
        if (auto v = (*b)["url"].value<std::string>()) c.backend.remote.url = *v;
        if (auto v = (*b)["model"].value<std::string>()) c.backend.remote.model = *v;
        if (auto v = (*b)["timeout_ms"].value<std::int64_t>()) c.backend.remote.timeout = std::chrono::milliseconds(*v);
        if (auto v = (*b)["max_reprompts"].value<std::int64_t>()) c.backend.remote.max_reprompts = static_cast<int>(*v);
    }
    return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read service config " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return from_toml(s.str(), path.parent_path());
}

void ServiceConfig::apply_env() {
    if (const char* h = std::getenv("HRT_HOST"); h && *h) host = h;
    port = env_int("HRT_PORT", port);
    tick_hz = env_int("HRT_TICK_HZ", tick_hz);
    if (const char* k = std::getenv("HRT_LLM_KEY"); k && *k) backend.api_key = k;
}

void ServiceConfig::validate() const {
    if (port < 0 || port > 65535) throw ValidationError("port must be within 0-65535");
    if (tick_hz <= 0 || tick_hz > 1000) throw ValidationError("tick_hz must be within 1-1000");
    if (reconnect_seconds < 0) throw ValidationError("reconnect_seconds must not be negative");
    if (threads < 1) throw ValidationError("threads must be at least 1");
    if (backend.kind == BackendKind::Fixture && backend.fixture.empty())
        throw ValidationError("the fixture backend needs backend.fixture");
}

SessionConfig ServiceConfig::session_config(std::uint64_t seed) const {
    SessionConfig s;
    s.book = recipe_book.empty() ? RecipeBook::standard() : load_recipe_book(recipe_book);
    s.layout = std::make_shared<const Layout>(layout.empty() ? load_layout(sample_layout_text(), s.book)
                                                             : load_layout_file(layout, s.book));
    s.backend = backend;
    s.seed = seed;
    s.tick_hz = tick_hz;
    s.reconnect_window_ticks = reconnect_seconds * tick_hz;
    return s;
}

} // namespace hrt::service
