#include "tasksim/serialize.hpp"

#include <doctest.h>

using namespace tasksim;

namespace {

TaskGraph sample_graph() {
   TaskGraph g;
   TaskSpec root;
   root.id = 0;
   root.label = "driver";
   root.actions = {Compute{3}, Spawn{1, DeferMode::MustDefer}, Spawn{2, DeferMode::Undeferred}, TaskwaitChildren{WaitMode::Latency},
                   PollOutcome{1, YieldMode::Throughput, 2}, TaskgroupEnd{WaitMode::Throughput}};
   TaskSpec a;
   a.id = 1;
   a.priority = -4;
   a.tied = false;
   a.actions = {Compute{5}};
   TaskSpec b;
   b.id = 2;
   b.actions = {Compute{1}};
   g.tasks = {root, a, b};
   g.roots = {0};
   g.meta["generator"] = "hand";
   return g;
}

} // namespace

TEST_CASE("graph round trip") {
   const auto g = sample_graph();
   const Json j = to_json(g);
   CHECK(j["tasks"][0]["actions"][1]["defer"] == "must_defer");
   CHECK(j["tasks"][0]["actions"][4]["type"] == "poll");
   CHECK(j["tasks"][0]["actions"][3]["type"] == "taskwait_children");
   CHECK(graph_from_json(j) == g);
   CHECK(graph_from_json(Json::parse(j.dump())) == g);
}

TEST_CASE("graph parsing errors") {
   CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"roots":[]})")), ParseError);
   CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"tasks":[{"id":0,"actions":[{"type":"jump"}]}],"roots":[0]})")), ParseError);
   CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"tasks":[{"id":"x","actions":[]}],"roots":[0]})")), ParseError);
   CHECK_THROWS_AS(
      graph_from_json(Json::parse(R"({"tasks":[{"id":0,"actions":[{"type":"spawn","child":1,"defer":"later"}]}],"roots":[0]})")),
      ParseError);
}

TEST_CASE("policy and config round trip") {
   for (const auto& p : {PolicyConfig::reference(), PolicyConfig::reference(std::nullopt), PolicyConfig::fcfs(), PolicyConfig::extended(8)}) {
      CHECK(policy_from_json(to_json(p)) == p);
   }
   SimConfig c;
   c.thread_count = 3;
   c.policy = PolicyConfig::extended();
   c.spawn_overhead = 2;
   c.max_undeferred_depth = 9;
   const auto back = sim_config_from_json(to_json(c));
   CHECK(back.thread_count == 3);
   CHECK(back.policy == c.policy);
   CHECK(back.spawn_overhead == 2);
   CHECK(back.max_undeferred_depth == std::optional<std::size_t>{9});
   CHECK_THROWS_AS(policy_from_json(Json::parse(R"({"kind":"lifo"})")), ParseError);
   CHECK_THROWS_AS(policy_from_json(Json::parse(R"({"kind":"reference","bogus":1})")), ParseError);
   CHECK_FALSE(policy_from_json(Json::parse(R"({"kind":"reference","queue_bound":"unbounded"})")).queue_bound.has_value());
}

TEST_CASE("trace round trip and csv") {
   const auto g = sample_graph();
   SimConfig c;
   c.thread_count = 2;
   const auto t = simulate(g, c);
   const Json j = to_json(t, {{"argv", "simulate g.json"}});
   CHECK(j["meta"]["argv"] == "simulate g.json");
   CHECK(trace_from_json(j) == t);

   const auto csv = trace_to_csv(t, {{"argv", "x"}});
   CHECK(csv.rfind("# argv=x\nthread,task,start,end,kind\n", 0) == 0);
   CHECK(csv.find("0,0,0,3,compute") != std::string::npos);
   CHECK(csv.find("undeferred_nested") != std::string::npos);
}

TEST_CASE("generator params from json") {
   const auto p = enclave_params_from_json(Json::parse(R"({"K":2,"enclaves_per_traversal":[3,1],"cells_per_traversal":[2,2],
      "enclave_cost_range":[5,9],"defer_mode":"must_defer","wait_mode":"latency"})"));
   CHECK(p.K == 2);
   CHECK(p.enclave_cost_range == std::pair<Ticks, Ticks>{5, 9});
   CHECK(p.defer_mode == DeferMode::MustDefer);
   CHECK(p.wait_mode == WaitMode::Latency);
   CHECK(p.traversal_cell_cost == 10);
   CHECK_THROWS_AS(enclave_params_from_json(Json::parse(R"({"k":2})")), ParseError);
   CHECK(starvation_params_from_json(Json::parse(R"({"C":5})")).C == 5);
   CHECK(nested_params_from_json(Json::parse(R"({"loop_on_critical_task_only":false})")).loop_on_critical_task_only == false);
   CHECK(two_timestep_params_from_json(Json::parse(R"({"straggler_enclave_cost":12})")).straggler_enclave_cost == 12);
}

TEST_CASE("report json") {
   const auto g = sample_graph();
   SimConfig c;
   const auto t = simulate(g, c);
   const Json r = to_json(analyze(g, t), {{"k", "v"}});
   CHECK(r["makespan"] == t.makespan);
   CHECK(r["meta"]["k"] == "v");
   const Json cmp = to_json(compare(g, t, t));
   CHECK(cmp["reduction_percent"] == 0.0);
}

TEST_CASE("gantt svg has one row per thread") {
   const auto g = sample_graph();
   SimConfig c;
   c.thread_count = 4;
   const auto t = simulate(g, c);
   const auto svg = gantt_svg(g, t, {{"argv", "report"}});
   std::size_t rows = 0;
   for (std::size_t pos = 0; (pos = svg.find("class=\"thread\"", pos)) != std::string::npos; ++pos) ++rows;
   CHECK(rows == 4);
   CHECK(svg.find("<rect") != std::string::npos);
   CHECK(svg.find("stroke=\"#000000\" stroke-width=\"1\"") != std::string::npos); // spawn ticks
   CHECK(svg.find("argv=report") != std::string::npos);
}
