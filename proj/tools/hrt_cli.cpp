// hrt: run trials and sweeps, inspect layouts, serve interactive sessions.

#include "hrt/errors.hpp"
#include "hrt/harness.hpp"
#include "hrt/metrics.hpp"
#ifdef HRT_HAVE_SERVICE
#include "hrt/service/server.hpp"
#endif

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace hrt;

constexpr int kValidation = 2;

struct RunArgs {
    std::string layout, mode = "IFA", policy = "compliant", backend = "rule", fixture, out, recipes;
    std::uint64_t seed = 0;
    double think_noise = 0.0;
    std::vector<std::string> chats; // "tick:message"
};

RecipeBook book_from(const std::string& path) { return path.empty() ? RecipeBook::standard() : load_recipe_book(path); }

BackendSpec backend_from(const std::string& kind, const std::string& fixture) {
    BackendSpec b;
    const auto k = backend_from_string(kind);
    if (!k) throw ValidationError("unknown backend '" + kind + "' (expected rule, remote or fixture)");
    b.kind = *k;
    b.fixture = fixture;
    if (b.kind == BackendKind::Fixture && fixture.empty()) throw ValidationError("--backend fixture needs --fixture");
    return b;
}

int cmd_run(const RunArgs& a) {
    TrialConfig c;
    c.book = book_from(a.recipes);
    c.layout = std::make_shared<const Layout>(load_layout_file(a.layout, c.book));
    try {
        c.mode = FeedbackMode::parse(a.mode, c.layout->tick_hz);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    const auto p = policy_from_string(a.policy);
    if (!p) throw ValidationError("unknown policy '" + a.policy + "'");
    c.policy.kind = *p;
    c.policy.think_noise = a.think_noise;
    for (const std::string& s : a.chats) {
        const auto colon = s.find(':');
        if (colon == std::string::npos) throw ValidationError("--chat expects TICK:MESSAGE, got '" + s + "'");
        ScriptedRequest r;
        try {
            r.tick = std::stoi(s.substr(0, colon));
        } catch (const std::exception&) {
            throw ValidationError("--chat tick must be an integer: '" + s + "'");
        }
        r.messages = {s.substr(colon + 1)};
        c.policy.script.push_back(std::move(r));
    }
    if (c.policy.kind == PolicyKind::Requester && c.policy.script.empty()) c.policy.script = default_script();
    c.seed = a.seed;
    c.backend = backend_from(a.backend, a.fixture);

    const TrialRecord r = run_trial(c);
    if (!a.out.empty()) r.save(a.out);
    std::cout << to_json(r.stats).dump(2) << "\n";
    return 0;
}

int cmd_sweep(const std::string& config, const std::string& out, const std::string& cells) {
    const SweepConfig c = SweepConfig::load(config);
    const SweepResult r = run_sweep(c);
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write " + out);
        f << r.rows_csv();
    }
    if (!cells.empty()) {
        std::ofstream f(cells);
        if (!f) throw std::runtime_error("cannot write " + cells);
        f << r.cells_csv();
    }
    std::cout << r.table();
    int failed = 0;
    for (const SweepRow& row : r.rows) failed += !row.stats;
    if (failed) std::cerr << failed << " trial(s) failed; see the error column\n";
    return failed ? 1 : 0;
}

int cmd_fluency(const std::string& layout, bool json_only) {
    const Layout l = load_layout_file(layout);
    const FluencyReport r = teaming_fluency(l);
    nlohmann::json j = r.to_json();
    j["layout"] = l.name;
    std::cout << j.dump(2) << "\n";
    if (!json_only) std::cout << render_critical(l, r);
    return 0;
}

int cmd_replay(const std::string& record) {
    const TrialRecord r = TrialRecord::load(record);
    const WorldState w = replay(r);
    const bool match = w.score == r.stats.score && w.deliveries == r.stats.deliveries;
    std::cout << nlohmann::json{{"recorded_score", r.stats.score}, {"replayed_score", w.score}, {"match", match}}.dump(2) << "\n";
    return match ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Human-robot teaming engine"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Simulate one trial with a scripted human");
    run_cmd->add_option("--layout", run.layout, "Layout file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--mode", run.mode, "IFA, PFA, AFA or SFA");
    run_cmd->add_option("--policy", run.policy, "compliant, independent, requester or idle");
    run_cmd->add_option("--seed", run.seed);
    run_cmd->add_option("--backend", run.backend, "rule, remote or fixture");
    run_cmd->add_option("--fixture", run.fixture, "Recorded replies for the fixture backend");
    run_cmd->add_option("--recipes", run.recipes, "Recipe book JSON");
    run_cmd->add_option("--think-noise", run.think_noise, "Chance the human idles on a tick")->check(CLI::Range(0.0, 1.0));
    run_cmd->add_option("--chat", run.chats, "Requester message as TICK:MESSAGE (repeatable)");
    run_cmd->add_option("--out", run.out, "Write the TrialRecord as JSON-lines");

    std::string sweep_config, sweep_out, sweep_cells;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a mode x layout x policy sweep");
    sweep_cmd->add_option("--config", sweep_config, "Sweep TOML")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--out", sweep_out, "Per-trial CSV");
    sweep_cmd->add_option("--cells", sweep_cells, "Per-cell summary CSV");

    std::string fluency_layout;
    bool fluency_json = false;
    auto* fluency_cmd = app.add_subcommand("fluency", "Critical cells and teaming fluency of a layout");
    fluency_cmd->add_option("--layout", fluency_layout)->required()->check(CLI::ExistingFile);
    fluency_cmd->add_flag("--json", fluency_json, "Skip the grid drawing");

    std::string record;
    auto* replay_cmd = app.add_subcommand("replay", "Re-simulate a saved TrialRecord and compare scores");
    replay_cmd->add_option("record", record)->required()->check(CLI::ExistingFile);

#ifdef HRT_HAVE_SERVICE
    std::string serve_config;
    auto* serve_cmd = app.add_subcommand("serve", "Run the interactive session server");
    serve_cmd->add_option("--config", serve_config, "Service TOML")->check(CLI::ExistingFile);
#endif

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kValidation;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*sweep_cmd) return cmd_sweep(sweep_config, sweep_out, sweep_cells);
        if (*fluency_cmd) return cmd_fluency(fluency_layout, fluency_json);
        if (*replay_cmd) return cmd_replay(record);
#ifdef HRT_HAVE_SERVICE
        if (*serve_cmd) {
            service::ServiceConfig cfg = serve_config.empty() ? service::ServiceConfig{} : service::ServiceConfig::load(serve_config);
            cfg.apply_env();
            service::Server server(cfg);
            server.run();
            return 0;
        }
#endif
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
