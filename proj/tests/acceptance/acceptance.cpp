// Headless acceptance suite. One line per criterion; exit status 1 if any fails.
// Sizes and tolerances are pinned here and must not be tuned to make a run pass.

#include "hrt/canonical_dag.hpp"
#include "hrt/graph_wire.hpp"
#include "hrt/harness.hpp"
#include "hrt/lang/render.hpp"
#include "hrt/metrics.hpp"
#include "hrt/planner.hpp"

#include "../support/episodes.hpp"
#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "../support/random_dags.hpp"
#include "../support/random_layouts.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace hrt;
using hrt::testing::data_path;
using hrt::testing::sample_layout;

namespace {

constexpr int kPlannerLayouts = 1000;
constexpr int kQueriesPerLayout = 4;
constexpr double kPlannerBudgetSeconds = 10.0;
constexpr int kPriorityDags = 200;
constexpr int kStatusSequences = 10000;
constexpr int kCallsPerSequence = 25;
constexpr int kFluencyLayouts = 1000;
constexpr double kFluencyTolerance = 0.01;
constexpr int kTrialTicks = 300;
constexpr int kRepeats = 3;
constexpr std::uint64_t kSeed = 20261014;

struct Outcome {
    bool pass = false;
    std::string detail;
};

AgentState agent_at(AgentRole r, GridPos p, Direction f) {
    AgentState a;
    a.role = r;
    a.pos = p;
    a.facing = f;
    return a;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Outcome planner_oracle() {
    std::mt19937 rng(kSeed);
    int compared = 0, mismatches = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < kPlannerLayouts; ++i) {
        const auto layout = std::make_shared<const Layout>(testing::random_layout(rng));
        const auto fixtures = layout->fixtures();
        if (fixtures.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, fixtures.size() - 1);
        for (int k = 0; k < kQueriesPerLayout; ++k) {
            std::set<GridPos> goals{fixtures[pick(rng)]};
            if (rng() % 2) goals.insert(fixtures[pick(rng)]);
            const int facing = static_cast<int>(rng() % 4);
            const bool with_other = k % 2 == 1;
            const AgentState self = agent_at(AgentRole::Human, layout->starts[0], static_cast<Direction>(facing));
            const AgentState other = agent_at(AgentRole::Robot, layout->starts[1], Direction::Up);
            PlanQuery q{layout.get(), self, std::nullopt, goals};
            if (with_other) q.other = other;
            const auto p = plan(q);
            const auto oracle = testing::bfs_oracle_cost(*layout, self.pos, facing, goals,
                                                         with_other ? std::optional<GridPos>(other.pos) : std::nullopt);
            ++compared;
            if (p.has_value() != oracle.has_value() || (p && p->cost() != *oracle)) ++mismatches;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream d;
    d << kPlannerLayouts << " layouts, " << compared << " queries, " << mismatches << " mismatches, " << secs << " s";
    return {mismatches == 0 && secs < kPlannerBudgetSeconds, d.str()};
}

Outcome priority_oracle() {
    std::mt19937 rng(kSeed);
    int nodes = 0, mismatches = 0;
    for (int t = 0; t < kPriorityDags; ++t) {
        const SubtaskGraph g = testing::random_dag(rng);
        std::map<int, std::vector<std::pair<int, long long>>> kids;
        for (const auto& [id, _] : g.nodes) kids[id];
        for (const auto& e : g.edges) kids[e.parent].push_back({e.child, e.cost});
        const auto oracle = testing::enumerate_priorities(kids, g.sink);
        const auto got = compute_priorities(g);
        for (const auto& [id, p] : oracle) {
            ++nodes;
            if (!p || !got.count(id) || got.at(id) != *p) ++mismatches;
        }
    }
    return {mismatches == 0, std::to_string(kPriorityDags) + " DAGs, " + std::to_string(nodes) + " nodes, " +
                                 std::to_string(mismatches) + " mismatches"};
}

Outcome status_machine() {
    std::mt19937 rng(kSeed);
    std::vector<SubtaskGraph> bases;
    for (const char* f : {"data/layouts/sample.layout", "data/layouts/easy.layout", "data/layouts/medium.layout",
                          "data/layouts/hard.layout"}) {
        const Layout l = load_layout_file(data_path(f));
        bases.push_back(canonical_dag(l.orders.front(), l));
    }
    int accepted = 0, refused = 0, violations = 0;
    for (int run = 0; run < kStatusSequences; ++run) {
        SubtaskGraph g = bases[static_cast<std::size_t>(run) % bases.size()];
        if (run % 3 == 1) g = add_temporary(g, "move to (1, 1)", {{1, 1}}, "").first;
        std::vector<SubtaskId> ids;
        for (const auto& [id, _] : g.nodes) ids.push_back(id);
        for (int k = 0; k < kCallsPerSequence; ++k) {
            const SubtaskId id = ids[rng() % ids.size()];
            const auto to = static_cast<SubtaskStatus>(rng() % 7);
            SubtaskGraph next;
            try {
                next = set_status(g, id, to);
            } catch (const IllegalTransition&) {
                ++refused;
                continue;
            }
            ++accepted;
            for (const auto& [nid, n] : next.nodes) {
                const SubtaskStatus was = g.node(nid).status;
                if (was != n.status && !transition_allowed(was, n.status, n.temporary)) ++violations;
                bool parents_done = true;
                for (SubtaskId p : n.parents) parents_done = parents_done && next.node(p).status == SubtaskStatus::Success;
                if (n.status == SubtaskStatus::ReadyToExecute && !parents_done) ++violations;
                if (n.status == SubtaskStatus::NotReady && parents_done) ++violations;
            }
            g = std::move(next);
        }
    }
    return {violations == 0 && accepted > 0 && refused > 0,
            std::to_string(kStatusSequences) + " sequences, " + std::to_string(accepted) + " accepted, " +
                std::to_string(refused) + " refused, " + std::to_string(violations) + " violations"};
}

Outcome scoring() {
    const RecipeBook book = RecipeBook::standard();
    const bool full = score_delivery(Ingredients(3, 0), {book.at("onion_soup")}) == 53;
    int violations = 0, pairs = 0;
    for (const Recipe& r : book.recipes()) {
        for (int on = 0; on <= 4; ++on) {
            for (int to = 0; to <= 4; ++to) {
                const Ingredients s(on, to);
                if (s.empty()) continue;
                const int pts = score_against(s, r);
                if (pts < 0 || pts > r.points) ++violations;
                if (s == r.required && pts != r.points) ++violations;
                for (Ingredient extra : {Ingredient::Onion, Ingredient::Tomato}) {
                    Ingredients more = s;
                    more.add(extra);
                    if (more.overlap(r.required) <= s.overlap(r.required)) continue;
                    ++pairs;
                    if (score_against(more, r) < pts) ++violations;
                }
            }
        }
    }
    // The same 53 must come out of the simulator, not only the scoring function.
    TrialConfig c;
    c.layout = sample_layout();
    c.seed = kSeed;
    const TrialRecord rec = run_trial(c);
    int first_points = -1;
    for (const TrialEvent& e : rec.events) {
        if (e.kind != "step" || !e.payload.contains("events")) continue;
        for (const json& w : e.payload["events"])
            if (w.value("kind", "") == "Delivered") {
                first_points = w.value("points", -1);
                break;
            }
        if (first_points >= 0) break;
    }
    std::ostringstream d;
    d << "3-onion soup " << (full ? "53" : "!= 53") << ", simulated delivery " << first_points << ", " << pairs
      << " monotone pairs, " << violations << " violations";
    return {full && first_points == 53 && violations == 0 && pairs > 0, d.str()};
}

Outcome end_to_end() {
    TrialConfig c;
    c.layout = sample_layout();
    c.mode = FeedbackMode{FeedbackKind::IFA, 100};
    c.policy.kind = PolicyKind::Compliant;
    c.seed = kSeed;
    std::vector<std::string> runs;
    TrialStats stats;
    for (int i = 0; i < kRepeats; ++i) {
        const TrialRecord r = run_trial(c);
        runs.push_back(r.to_jsonl());
        stats = r.stats;
    }
    bool identical = true;
    for (const std::string& r : runs) identical = identical && r == runs.front();
    std::ostringstream d;
    d << "score " << stats.score << ", deliveries " << stats.deliveries << ", ticks " << stats.unpaused_ticks << ", "
      << kRepeats << " runs " << (identical ? "bit-identical" : "differ");
    return {stats.score >= 53 && stats.deliveries >= 1 && stats.unpaused_ticks == kTrialTicks &&
                stats.robot_messages == 0 && identical,
            d.str()};
}

Outcome mode_gating() {
    std::ostringstream d;
    bool ok = true;
    for (FeedbackKind m : {FeedbackKind::IFA, FeedbackKind::PFA, FeedbackKind::AFA, FeedbackKind::SFA}) {
        const TrialRecord r = run_trial(testing::gating_episode(m));
        const std::string err = testing::check_gating(r, m);
        int replies = 0, suggestions = 0, instructions = 0;
        for (const TrialEvent& e : r.events) {
            if (e.kind != "robot_message") continue;
            const std::string ch = e.payload.value("channel", "");
            replies += ch == "reply";
            suggestions += ch == "suggestion";
            instructions += ch == "instruction";
        }
        // Each mode must actually exercise the channels it allows.
        bool exercised = true;
        if (m == FeedbackKind::PFA) exercised = replies > 0;
        if (m == FeedbackKind::AFA) exercised = suggestions > 0;
        if (m == FeedbackKind::SFA) exercised = instructions > 0;
        ok = ok && err.empty() && exercised;
        d << to_string(m) << ":" << r.stats.robot_messages;
        if (!err.empty()) d << " (" << err << ")";
        if (!exercised) d << " (vacuous)";
        d << " ";
    }
    return {ok, "robot messages " + d.str()};
}

Outcome pause_semantics() {
    std::ostringstream d;
    bool ok = true;
    for (FeedbackKind m : {FeedbackKind::PFA, FeedbackKind::AFA, FeedbackKind::SFA}) {
        const TrialRecord r = run_trial(testing::gating_episode(m));
        int steps = 0;
        for (const TrialEvent& e : r.events) steps += e.kind == "step";
        ok = ok && r.stats.dialogs == 3 && r.stats.unpaused_ticks == kTrialTicks && steps == kTrialTicks &&
             r.stats.paused_ticks > 0;
        d << to_string(m) << ": dialogs " << r.stats.dialogs << ", unpaused " << r.stats.unpaused_ticks << ", paused "
          << r.stats.paused_ticks << "; ";
    }
    return {ok, d.str()};
}

Outcome fluency() {
    std::mt19937 rng(kSeed);
    int mismatches = 0;
    for (int i = 0; i < kFluencyLayouts; ++i) {
        const Layout l = testing::random_layout(rng);
        if (teaming_fluency(l).critical != testing::critical_cells_oracle(l)) ++mismatches;
    }
    const std::pair<const char*, double> expected[] = {
        {"easy", 64.29}, {"medium", 44.44}, {"hard", 20.00}};
    std::ostringstream d;
    d << kFluencyLayouts << " random layouts, " << mismatches << " mismatches;";
    bool values_ok = true;
    for (const auto& [name, want] : expected) {
        const Layout l = load_layout_file(data_path(std::string("data/layouts/") + name + ".layout"));
        const FluencyReport r = teaming_fluency(l);
        const bool oracle_ok = r.critical == testing::critical_cells_oracle(l);
        const bool close = std::abs(r.fluency - want) <= kFluencyTolerance;
        values_ok = values_ok && oracle_ok && close;
        d << " " << name << " " << std::round(r.fluency * 100) / 100;
    }
    return {mismatches == 0 && values_ok, d.str()};
}

Outcome prompt_fidelity() {
    using namespace hrt::lang;
    const json bj = json::parse(slurp(data_path("tests/golden/bindings.json")));
    Bindings all;
    for (const auto& [k, v] : bj.items()) all[k] = v.get<std::string>();
    int templates = 0, diffs = 0;
    for (TemplateId t : kTemplates) {
        ++templates;
        if (template_text(t) != slurp(data_path("prompts/" + std::string(template_name(t)) + ".txt"))) ++diffs;
        Bindings mine;
        for (const std::string& s : template_slots(t))
            if (all.count(s)) mine[s] = all.at(s);
        if (t == TemplateId::GraphRevision)
            for (std::string_view s : kSelfBoundSlots) mine.erase(std::string(s));
        if (render_template(t, mine) != slurp(data_path("tests/golden/" + std::string(template_name(t)) + ".golden")))
            ++diffs;
    }

    // Wire round trip through the text parser, over graphs in every status.
    int graphs = 0, round_trip_failures = 0;
    std::mt19937 rng(kSeed);
    for (const char* f : {"data/layouts/sample.layout", "data/layouts/easy.layout", "data/layouts/medium.layout",
                          "data/layouts/hard.layout"}) {
        const Layout l = load_layout_file(data_path(f));
        const LocationTable loc(l);
        SubtaskGraph g = canonical_dag(l.orders.front(), l);
        for (int k = 0; k < 40; ++k) {
            std::vector<SubtaskId> ids;
            for (const auto& [id, _] : g.nodes) ids.push_back(id);
            try {
                g = set_status(g, ids[rng() % ids.size()], static_cast<SubtaskStatus>(rng() % 7));
            } catch (const IllegalTransition&) {
                continue;
            }
            if (k == 20) g = add_temporary(g, "move to (1, 1)", {{1, 1}}, "robot should execute").first;
            ++graphs;
            const json wire = graph_to_wire(g, loc);
            const auto parsed = parse_subtasks("Here you go:\n" + wire.dump(2) + "\n", loc);
            const auto* nodes = std::get_if<std::vector<SubtaskNode>>(&parsed);
            if (!nodes || graph_to_wire(make_graph(*nodes), loc) != wire) ++round_trip_failures;
        }
    }
    return {diffs == 0 && round_trip_failures == 0 && graphs > 0,
            std::to_string(templates) + " templates, " + std::to_string(diffs) + " byte diffs; " +
                std::to_string(graphs) + " graphs, " + std::to_string(round_trip_failures) + " round-trip failures"};
}

Outcome recommend() {
    int mismatches = 0, profiles = 0;
    for (int t = 0; t <= 10; ++t)
        for (int h = 0; h <= 10; ++h)
            for (int l = 0; l <= 10; ++l) {
                ++profiles;
                mismatches += recommend_mode({t, h, l}) != testing::quadrant_oracle(t, h, l);
            }
    return {mismatches == 0, std::to_string(profiles) + " profiles, " + std::to_string(mismatches) + " mismatches"};
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"planner oracle", planner_oracle},   {"priority oracle", priority_oracle},
        {"status machine", status_machine},   {"scoring", scoring},
        {"end-to-end", end_to_end},           {"mode gating", mode_gating},
        {"pause semantics", pause_semantics}, {"fluency", fluency},
        {"prompt fidelity", prompt_fidelity}, {"recommend_mode", recommend},
    };
    int failed = 0, n = 0;
    for (const auto& [name, check] : criteria) {
        ++n;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << n << ". " << name << ": " << o.detail << "\n";
    }
    std::cout << (n - failed) << "/" << n << " criteria passed\n";
    return failed ? 1 : 0;
}
