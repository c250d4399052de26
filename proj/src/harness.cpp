#include "hrt/harness.hpp"

#include "hrt/errors.hpp"
#include "hrt/lang/rule_backend.hpp"

#include <toml.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hrt {

std::string_view to_string(BackendKind k) {
    switch (k) {
    case BackendKind::Rule: return "rule";
    case BackendKind::Remote: return "remote";
    case BackendKind::Fixture: return "fixture";
    }
    return "?";
}

std::optional<BackendKind> backend_from_string(std::string_view s) {
    for (BackendKind k : {BackendKind::Rule, BackendKind::Remote, BackendKind::Fixture})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

lang::BackendPtr make_backend(const BackendSpec& spec) {
    auto rule = std::make_shared<lang::RuleBackend>();
    switch (spec.kind) {
    case BackendKind::Rule: return rule;
    case BackendKind::Fixture: {
        auto t = std::make_shared<lang::FixtureTransport>(lang::FixtureTransport::load(spec.fixture));
        return std::make_shared<lang::WatchdogBackend>(std::make_shared<lang::RemoteBackend>(spec.remote, t), rule);
    }
    case BackendKind::Remote: {
        auto t = std::make_shared<lang::HttpTransport>(spec.remote.url, spec.api_key.empty() ? lang::api_key_from_env() : spec.api_key);
        return std::make_shared<lang::WatchdogBackend>(std::make_shared<lang::RemoteBackend>(spec.remote, t), rule);
    }
    }
    return rule;
}

json TrialConfig::to_json() const {
    json script = json::array();
    for (const ScriptedRequest& r : policy.script)
        script.push_back({{"tick", r.tick}, {"messages", r.messages}, {"dialog_ticks", r.dialog_ticks}});
    return {{"layout", layout->name},
            {"layout_text", layout->to_text()},
            {"recipe_book", json::parse(recipe_book_json(book))},
            {"mode", mode.name()},
            {"interval_ticks", mode.interval_ticks},
            {"policy", to_string(policy.kind)},
            {"script", script},
            {"think_noise", policy.think_noise},
            {"seed", seed},
            {"backend", to_string(backend.kind)},
            {"trial_ticks", layout->trial_ticks()}};
}

// ---------------------------------------------------------------- records

void TrialRecord::write_jsonl(std::ostream& out) const {
    out << json{{"type", "header"}, {"config", header}}.dump() << '\n';
    for (const TrialEvent& e : events) out << to_json(e).dump() << '\n';
    out << json{{"type", "summary"}, {"stats", to_json(stats)}}.dump() << '\n';
}

std::string TrialRecord::to_jsonl() const {
    std::ostringstream out;
    write_jsonl(out);
    return out.str();
}

void TrialRecord::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_jsonl(out);
}

TrialRecord TrialRecord::read_jsonl(std::istream& in) {
    TrialRecord r;
    bool header = false, summary = false;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        const json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw ParseError("line " + std::to_string(n) + ": not a JSON object");
        if (j.contains("type") && !j.contains("kind")) {
            if (j["type"] == "header") {
                r.header = j.value("config", json::object());
                header = true;
            } else if (j["type"] == "summary") {
                r.stats = stats_from_json(j.value("stats", json::object()));
                summary = true;
            }
            continue;
        }
        if (!j.contains("tick") || !j.contains("wall") || !j.contains("kind"))
            throw ParseError("line " + std::to_string(n) + ": event needs tick, wall and kind");
        TrialEvent e;
        e.tick = j["tick"].get<int>();
        e.wall = j["wall"].get<int>();
        e.kind = j["kind"].get<std::string>();
        for (const auto& [k, v] : j.items())
            if (k != "tick" && k != "wall" && k != "kind") e.payload[k] = v;
        r.events.push_back(std::move(e));
    }
    if (!header) throw ParseError("record has no header line");
    if (!summary) throw ParseError("record has no summary line");
    return r;
}

TrialRecord TrialRecord::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return read_jsonl(in);
}

// ----------------------------------------------------------------- trials

namespace {

void run_dialog(TeamCore& core, const ScriptedRequest& req, HumanPolicy& policy) {
    const int n = static_cast<int>(req.messages.size());
    if (n == 0) return;
    const int each = req.dialog_ticks / n;
    for (int i = 0; i < n; ++i) {
        if (!core.chat(req.messages[static_cast<std::size_t>(i)])) return; // chat disabled
        const int wait = i + 1 == n ? req.dialog_ticks - each * (n - 1) : each;
        for (int t = 0; t < wait; ++t) core.paused_tick();
    }
    core.end_dialog();
    if (core.suggestion_pending()) core.respond_to_suggestion(policy.accepts_suggestions());
}

} // namespace

TrialRecord run_trial(const TrialConfig& c) {
    if (!c.layout) throw ValidationError("trial config has no layout");
    TeamConfig tc;
    tc.layout = c.layout;
    tc.book = c.book;
    tc.mode = c.mode;
    tc.backend = make_backend(c.backend);
    tc.seed = c.seed;
    TeamCore core(std::move(tc));
    HumanPolicy policy(c.policy, c.seed);

    core.start();
    int scripted_tick = -1;
    while (!core.over()) {
        const int t = core.world().tick;
        if (t != scripted_tick) {
            scripted_tick = t;
            for (const ScriptedRequest& req : policy.due(t)) run_dialog(core, req, policy);
        }
        if (core.suggestion_pending()) core.respond_to_suggestion(policy.accepts_suggestions());
        core.tick(policy.act(core));
    }

    TrialRecord r;
    r.header = c.to_json();
    r.events = core.events();
    r.stats = core.stats();
    return r;
}

WorldState replay(const TrialRecord& r) {
    if (!r.header.contains("layout_text")) throw ParseError("record header has no layout_text");
    RecipeBook book = RecipeBook::standard();
    if (r.header.contains("recipe_book")) book = parse_recipe_book(r.header["recipe_book"].dump());
    auto layout = std::make_shared<const Layout>(load_layout(r.header["layout_text"].get<std::string>(), book));
    WorldState w = WorldState::initial(layout);
    for (const TrialEvent& e : r.events) {
        if (e.kind != "step") continue;
        const auto h = action_from_string(e.payload.value("human", ""));
        const auto b = action_from_string(e.payload.value("robot", ""));
        if (!h || !b) throw ParseError("step event at tick " + std::to_string(e.tick) + " has a bad action");
        w = step(w, *h, *b).world;
    }
    return w;
}

// ------------------------------------------------------------------ sweep

std::vector<ScriptedRequest> default_script() {
    return {ScriptedRequest{40, {"I'll take care of the onions, you handle the dish and serving."}, 25}};
}

SweepConfig SweepConfig::from_toml(std::string_view text, const std::filesystem::path& base) {
    toml::table t;
    try {
        t = toml::parse(text);
    } catch (const toml::parse_error& e) {
        throw ParseError(std::string("sweep config: ") + std::string(e.description()));
    }
    SweepConfig c;
    c.seed = static_cast<std::uint64_t>(t["seed"].value_or<std::int64_t>(0));
    c.repeats = static_cast<int>(t["repeats"].value_or<std::int64_t>(1));
    if (c.repeats < 1) throw ValidationError("sweep config: repeats must be >= 1");
    c.think_noise = t["think_noise"].value_or(0.0);
    if (c.think_noise < 0.0 || c.think_noise > 1.0) throw ValidationError("sweep config: think_noise must be in [0, 1]");

    auto strings = [&](const char* key) {
        std::vector<std::string> out;
        const toml::array* a = t[key].as_array();
        if (!a) throw ValidationError(std::string("sweep config: \"") + key + "\" must be an array");
        for (const auto& v : *a) {
            const auto s = v.value<std::string>();
            if (!s) throw ValidationError(std::string("sweep config: \"") + key + "\" must hold strings");
            out.push_back(*s);
        }
        if (out.empty()) throw ValidationError(std::string("sweep config: \"") + key + "\" is empty");
        return out;
    };
    for (const std::string& l : strings("layouts")) {
        std::filesystem::path p(l);
        c.layouts.push_back((p.is_relative() && !base.empty() ? base / p : p).string());
    }
    for (const std::string& m : strings("modes")) {
        const auto k = feedback_kind_from_string(m);
        if (!k) throw ValidationError("sweep config: unknown mode " + m);
        c.modes.push_back(*k);
    }
    for (const std::string& p : strings("policies")) {
        const auto k = policy_from_string(p);
        if (!k) throw ValidationError("sweep config: unknown policy " + p);
        c.policies.push_back(*k);
    }
    if (const auto b = t["backend"].value<std::string>()) {
        const auto k = backend_from_string(*b);
        if (!k) throw ValidationError("sweep config: unknown backend " + *b);
        c.backend.kind = *k;
    }
    if (const auto f = t["fixture"].value<std::string>()) {
        std::filesystem::path p(*f);
        c.backend.fixture = p.is_relative() && !base.empty() ? base / p : p;
    }
    if (const auto r = t["recipe_book"].value<std::string>()) {
        std::filesystem::path p(*r);
        c.book = load_recipe_book(p.is_relative() && !base.empty() ? base / p : p);
    }
    if (const toml::table* scripts = t["scripts"].as_table()) {
        for (const auto& [name, node] : *scripts) {
            const toml::array* list = node.as_array();
            if (!list) throw ValidationError("sweep config: scripts." + std::string(name.str()) + " must be an array of tables");
            std::vector<ScriptedRequest> reqs;
            for (const auto& entry : *list) {
                const toml::table* e = entry.as_table();
                if (!e) throw ValidationError("sweep config: script entries must be tables");
                ScriptedRequest r;
                r.tick = static_cast<int>((*e)["tick"].value_or<std::int64_t>(0));
                r.dialog_ticks = static_cast<int>((*e)["dialog_ticks"].value_or<std::int64_t>(25));
                if (const toml::array* m = (*e)["messages"].as_array())
                    for (const auto& v : *m)
                        if (auto s = v.value<std::string>()) r.messages.push_back(*s);
                if (const auto m = (*e)["message"].value<std::string>()) r.messages.push_back(*m);
                reqs.push_back(std::move(r));
            }
            c.scripts[std::string(name.str())] = std::move(reqs);
        }
    }
    return c;
}

SweepConfig SweepConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return from_toml(s.str(), path.parent_path());
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    double m = 0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    // Sample deviation; a single trial has none.
    return {m, v.size() > 1 ? std::sqrt(s / static_cast<double>(v.size() - 1)) : 0.0};
}

std::string fixed(double v, int digits = 2) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(digits) << v;
    return o.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

SweepResult run_sweep(const SweepConfig& c) {
    if (c.layouts.empty() || c.modes.empty() || c.policies.empty()) throw ValidationError("sweep needs layouts, modes and policies");
    SweepResult out;
    for (const std::string& file : c.layouts) {
        std::shared_ptr<const Layout> layout;
        std::string load_error;
        try {
            layout = std::make_shared<const Layout>(load_layout_file(file, c.book));
        } catch (const std::exception& e) {
            load_error = e.what();
        }
        const std::string name = layout ? layout->name : std::filesystem::path(file).stem().string();
        for (FeedbackKind mode : c.modes) {
            for (PolicyKind policy : c.policies) {
                SweepCell cell;
                cell.layout = name;
                cell.mode = mode;
                cell.policy = policy;
                std::vector<double> scores, robot, human, dialogs;
                for (int r = 0; r < c.repeats; ++r) {
                    SweepRow row;
                    row.layout = name;
                    row.mode = mode;
                    row.policy = policy;
                    row.repeat = r;
                    row.seed = c.seed + static_cast<std::uint64_t>(r);
                    try {
                        if (!layout) throw ValidationError(load_error);
                        TrialConfig tc;
                        tc.layout = layout;
                        tc.book = c.book;
                        tc.mode = FeedbackMode::parse(to_string(mode), layout->tick_hz);
                        tc.policy.kind = policy;
                        tc.policy.think_noise = c.think_noise;
                        if (policy == PolicyKind::Requester) {
                            auto it = c.scripts.find(name);
                            tc.policy.script = it != c.scripts.end() ? it->second : default_script();
                        }
                        tc.seed = row.seed;
                        tc.backend = c.backend;
                        row.stats = run_trial(tc).stats;
                        scores.push_back(row.stats->score);
                        robot.push_back(row.stats->robot_messages);
                        human.push_back(row.stats->human_messages);
                        dialogs.push_back(row.stats->dialogs);
                    } catch (const std::exception& e) {
                        row.error = e.what();
                        ++cell.failures;
                    }
                    ++cell.trials;
                    out.rows.push_back(std::move(row));
                }
                std::tie(cell.score_mean, cell.score_std) = mean_std(scores);
                std::tie(cell.robot_messages_mean, cell.robot_messages_std) = mean_std(robot);
                cell.human_messages_mean = mean_std(human).first;
                cell.dialogs_mean = mean_std(dialogs).first;
                out.cells.push_back(cell);
            }
        }
    }
    return out;
}

std::string SweepResult::rows_csv() const {
    std::ostringstream o;
    o << "layout,mode,policy,repeat,seed,score,deliveries,robot_messages,suppressed_messages,human_messages,dialogs,"
         "off_script,graph_revisions,corrections,unpaused_ticks,paused_ticks,mean_robot_plan_cost,error\n";
    for (const SweepRow& r : rows) {
        o << csv_field(r.layout) << ',' << to_string(r.mode) << ',' << to_string(r.policy) << ',' << r.repeat << ','
          << r.seed << ',';
        if (r.stats) {
            const TrialStats& s = *r.stats;
            o << s.score << ',' << s.deliveries << ',' << s.robot_messages << ',' << s.suppressed_messages << ','
              << s.human_messages << ',' << s.dialogs << ',' << s.off_script << ',' << s.graph_revisions << ','
              << s.corrections << ',' << s.unpaused_ticks << ',' << s.paused_ticks << ',' << fixed(s.mean_robot_plan_cost, 3);
        } else {
            o << ",,,,,,,,,,,";
        }
        o << ',' << csv_field(r.error) << '\n';
    }
    return o.str();
}

std::string SweepResult::cells_csv() const {
    std::ostringstream o;
    o << "layout,mode,policy,trials,failures,score_mean,score_std,robot_messages_mean,robot_messages_std,"
         "human_messages_mean,dialogs_mean\n";
    for (const SweepCell& c : cells)
        o << csv_field(c.layout) << ',' << to_string(c.mode) << ',' << to_string(c.policy) << ',' << c.trials << ','
          << c.failures << ',' << fixed(c.score_mean) << ',' << fixed(c.score_std) << ',' << fixed(c.robot_messages_mean)
          << ',' << fixed(c.robot_messages_std) << ',' << fixed(c.human_messages_mean) << ',' << fixed(c.dialogs_mean)
          << '\n';
    return o.str();
}

std::string SweepResult::table() const {
    const std::vector<std::string> head{"layout", "mode", "policy", "n", "fail", "score", "robot msgs", "human msgs", "dialogs"};
    std::vector<std::vector<std::string>> body;
    for (const SweepCell& c : cells)
        body.push_back({c.layout, std::string(to_string(c.mode)), std::string(to_string(c.policy)), std::to_string(c.trials),
                        std::to_string(c.failures), fixed(c.score_mean, 1) + " ± " + fixed(c.score_std, 1),
                        fixed(c.robot_messages_mean, 1) + " ± " + fixed(c.robot_messages_std, 1),
                        fixed(c.human_messages_mean, 1), fixed(c.dialogs_mean, 1)});
    // Width in code points, so the ± sign counts once.
    auto width = [](const std::string& s) {
        std::size_t n = 0;
        for (unsigned char ch : s) n += (ch & 0xC0) != 0x80;
        return n;
    };
    std::vector<std::size_t> w(head.size());
    for (std::size_t i = 0; i < head.size(); ++i) {
        w[i] = width(head[i]);
        for (const auto& row : body) w[i] = std::max(w[i], width(row[i]));
    }
    std::ostringstream o;
    auto line = [&](const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            o << (i ? "  " : "") << cols[i];
            if (i + 1 < cols.size()) o << std::string(w[i] - width(cols[i]), ' ');
        }
        o << '\n';
    };
    line(head);
    std::vector<std::string> rule;
    for (std::size_t x : w) rule.push_back(std::string(x, '-'));
    line(rule);
    for (const auto& row : body) line(row);
    return o.str();
}

} // namespace hrt
