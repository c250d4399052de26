// Python bindings. Structured values cross the boundary as JSON text; the
// pure-Python layer in hrt/__init__.py turns them into dicts.

#include "hrt/errors.hpp"
#include "hrt/harness.hpp"
#include "hrt/metrics.hpp"
#include "hrt/planner.hpp"
#include "hrt/service/session.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace hrt;

namespace {

std::shared_ptr<const Layout> layout_from(const std::string& text) {
    return std::make_shared<const Layout>(load_layout(text.empty() ? std::string(sample_layout_text()) : text));
}

std::string run(const std::string& layout_text, const std::string& mode, const std::string& policy,
                std::uint64_t seed, const std::vector<std::tuple<int, std::string>>& script, double think_noise,
                const std::string& backend, const std::string& fixture) {
    TrialConfig c;
    c.layout = layout_from(layout_text);
    try {
        c.mode = FeedbackMode::parse(mode, c.layout->tick_hz);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    const auto p = policy_from_string(policy);
    if (!p) throw ValidationError("unknown policy '" + policy + "'");
    c.policy.kind = *p;
    c.policy.think_noise = think_noise;
    for (const auto& [tick, text] : script) c.policy.script.push_back(ScriptedRequest{tick, {text}, 25});
    if (c.policy.kind == PolicyKind::Requester && c.policy.script.empty()) c.policy.script = default_script();
    c.seed = seed;
    const auto b = backend_from_string(backend);
    if (!b) throw ValidationError("unknown backend '" + backend + "'");
    c.backend.kind = *b;
    c.backend.fixture = fixture;
    py::gil_scoped_release unlocked;
    return run_trial(c).to_jsonl();
}

std::string replay_jsonl(const std::string& jsonl) {
    std::istringstream in(jsonl);
    const WorldState w = replay(TrialRecord::read_jsonl(in));
    return json{{"score", w.score}, {"deliveries", w.deliveries}, {"tick", w.tick}}.dump();
}

std::string fluency(const std::string& layout_text) {
    const auto l = layout_from(layout_text);
    json j = teaming_fluency(*l).to_json();
    j["layout"] = l->name;
    return j.dump();
}

std::optional<std::vector<std::string>> plan_actions(const std::string& layout_text, std::pair<int, int> start,
                                                     const std::string& facing,
                                                     const std::vector<std::pair<int, int>>& goals) {
    const auto l = layout_from(layout_text);
    AgentState self;
    self.role = AgentRole::Human;
    self.pos = {start.first, start.second};
    const auto d = direction_from_string(facing);
    if (!d) throw ValidationError("unknown facing '" + facing + "'");
    self.facing = *d;
    std::set<GridPos> g;
    for (const auto& [x, y] : goals) g.insert({x, y});
    const auto p = plan(PlanQuery{l.get(), self, std::nullopt, g});
    if (!p) return std::nullopt;
    std::vector<std::string> out;
    for (AtomicAction a : p->actions) out.emplace_back(to_string(a));
    return out;
}

py::tuple sweep(const std::string& toml_text, const std::string& base_dir) {
    const SweepConfig c = SweepConfig::from_toml(toml_text, base_dir);
    SweepResult r;
    {
        py::gil_scoped_release unlocked;
        r = run_sweep(c);
    }
    return py::make_tuple(r.rows_csv(), r.cells_csv(), r.table());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Deterministic human-robot teaming engine";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("sample_layout_text", [] { return std::string(sample_layout_text()); });
    m.def("run_trial", &run, py::arg("layout_text"), py::arg("mode") = "IFA", py::arg("policy") = "compliant",
          py::arg("seed") = 0, py::arg("script") = std::vector<std::tuple<int, std::string>>{},
          py::arg("think_noise") = 0.0, py::arg("backend") = "rule", py::arg("fixture") = "",
          "Runs one simulated trial and returns its record as JSON-lines.");
    m.def("replay", &replay_jsonl, py::arg("jsonl"), "Re-simulates a record's steps; returns the final score as JSON.");
    m.def("fluency", &fluency, py::arg("layout_text"));
    m.def("render_critical", [](const std::string& text) {
        const auto l = layout_from(text);
        return render_critical(*l, teaming_fluency(*l));
    });
    m.def("recommend_mode", [](int t, int ch, int cl) { return std::string(to_string(recommend_mode({t, ch, cl}))); },
          py::arg("task_complexity"), py::arg("human_capability"), py::arg("llm_capability"));
    m.def("plan", &plan_actions, py::arg("layout_text"), py::arg("start"), py::arg("facing"), py::arg("goals"));
    m.def("sweep", &sweep, py::arg("toml_text"), py::arg("base_dir") = "",
          "Runs a sweep; returns (rows_csv, cells_csv, table).");

    py::class_<service::Session>(m, "Session")
        .def(py::init([](const std::string& id, const std::string& layout_text) {
                 service::SessionConfig c;
                 c.layout = layout_from(layout_text);
                 return std::make_unique<service::Session>(id, std::move(c));
             }),
             py::arg("id"), py::arg("layout_text") = "")
        .def("send", &service::Session::handle_frame, py::arg("frame"))
        .def("tick", &service::Session::tick)
        .def("disconnect", &service::Session::disconnect)
        .def_property_readonly("finished", &service::Session::finished)
        .def_property_readonly("phase", [](const service::Session& s) { return std::string(to_string(s.phase())); })
        .def("drain",
             [](service::Session& s) {
                 std::vector<std::string> out;
                 for (const auto& msg : s.drain()) out.push_back(msg.frame());
                 return out;
             })
        .def("snapshot", [](const service::Session& s) { return s.snapshot_body().dump(); })
        .def("record", [](const service::Session& s) { return s.record().to_jsonl(); });
}
