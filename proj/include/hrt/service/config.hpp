#pragma once

#include "hrt/service/session.hpp"

#include <filesystem>

namespace hrt::service {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8765;
    int tick_hz = 5;
    std::filesystem::path layout;      // empty: the built-in sample kitchen
    std::filesystem::path recipe_book; // empty: the standard book
    BackendSpec backend{};             // backend.api_key comes from HRT_LLM_KEY only
    int reconnect_seconds = 60;
    std::filesystem::path record_dir;  // finished TrialRecords land here when set
    int threads = 2;

    /// TOML file (all keys optional), then HRT_PORT / HRT_TICK_HZ /
    /// HRT_LLM_KEY from the environment. Throws ValidationError.
    static ServiceConfig load(const std::filesystem::path& path);
    static ServiceConfig from_toml(std::string_view text, const std::filesystem::path& base = {});
    void apply_env();
    void validate() const;

    /// What every new session starts from.
    SessionConfig session_config(std::uint64_t seed) const;
};

} // namespace hrt::service
