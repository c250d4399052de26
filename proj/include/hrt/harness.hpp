#pragma once

#include "hrt/lang/remote.hpp"
#include "hrt/policies.hpp"

#include <filesystem>
#include <iosfwd>

namespace hrt {

enum class BackendKind : std::uint8_t { Rule, Remote, Fixture };

std::string_view to_string(BackendKind k);
std::optional<BackendKind> backend_from_string(std::string_view s);

struct BackendSpec {
    BackendKind kind = BackendKind::Rule;
    std::filesystem::path fixture;  // Fixture: recorded {key: reply} file
    lang::RemoteConfig remote{};    // Remote: endpoint and model
    std::string api_key;            // Remote: empty reads HRT_LLM_KEY
};

/// Remote and fixture backends answer through a watchdog that falls back to
/// the rule backend, so a trial never stalls on a bad reply.
lang::BackendPtr make_backend(const BackendSpec& spec);

struct TrialConfig {
    std::shared_ptr<const Layout> layout;
    RecipeBook book = RecipeBook::standard();
    FeedbackMode mode{};
    PolicyConfig policy{};
    std::uint64_t seed = 0;
    BackendSpec backend{};

    json to_json() const;
};

struct TrialRecord {
    json header;                   // config summary, including the layout text
    std::vector<TrialEvent> events;
    TrialStats stats;

    /// JSON-lines: header, one line per event, then {"summary": stats}.
    void write_jsonl(std::ostream& out) const;
    std::string to_jsonl() const;
    void save(const std::filesystem::path& path) const;
    static TrialRecord read_jsonl(std::istream& in);
    static TrialRecord load(const std::filesystem::path& path);
};

TrialRecord run_trial(const TrialConfig& c);

/// Re-simulates the logged human and robot actions through the world alone;
/// returns the final world. Throws ParseError on a malformed record.
WorldState replay(const TrialRecord& r);

struct SweepConfig {
    std::vector<std::string> layouts;               // layout files
    std::vector<FeedbackKind> modes;
    std::vector<PolicyKind> policies;
    int repeats = 1;
    std::uint64_t seed = 0;
    double think_noise = 0.0; // applied to every simulated human
    std::map<std::string, std::vector<ScriptedRequest>> scripts; // Requester script per layout name
    RecipeBook book = RecipeBook::standard();
    BackendSpec backend{};

    /// Relative layout paths resolve against `base`.
    static SweepConfig from_toml(std::string_view text, const std::filesystem::path& base = {});
    static SweepConfig load(const std::filesystem::path& path);
};

struct SweepRow {
    std::string layout;
    FeedbackKind mode = FeedbackKind::IFA;
    PolicyKind policy = PolicyKind::Compliant;
    int repeat = 0;
    std::uint64_t seed = 0;
    std::optional<TrialStats> stats; // empty when the trial failed
    std::string error;
};

struct SweepCell {
    std::string layout;
    FeedbackKind mode = FeedbackKind::IFA;
    PolicyKind policy = PolicyKind::Compliant;
    int trials = 0;
    int failures = 0;
    double score_mean = 0, score_std = 0;
    double robot_messages_mean = 0, robot_messages_std = 0;
    double human_messages_mean = 0;
    double dialogs_mean = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;   // config order
    std::vector<SweepCell> cells; // layout x mode x policy, config order

    std::string rows_csv() const;
    std::string cells_csv() const;
    std::string table() const;
};

/// The Requester's default request: a task preference.
std::vector<ScriptedRequest> default_script();

/// Runs every layout x mode x policy x repeat; repeat r uses seed + r. Trial
/// errors are recorded on their row and the sweep carries on.
SweepResult run_sweep(const SweepConfig& c);

} // namespace hrt
