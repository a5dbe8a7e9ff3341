#include "tasksim/cli.hpp"

#include "tasksim/analysis.hpp"
#include "tasksim/engine.hpp"
#include "tasksim/generators.hpp"
#include "tasksim/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

namespace tasksim {

namespace {

struct GenerateOptions {
   std::string params_file;
   std::string output;

   std::uint32_t k = 4;
   std::uint32_t timesteps = 1;
   std::vector<std::uint32_t> enclaves;
   std::vector<std::uint32_t> cells;
   Ticks cell_cost = 10;
   Ticks enclave_min = 50;
   Ticks enclave_max = 150;
   std::uint64_t seed = 0;
   std::string defer = "runtime";
   std::string yield = "default";
   std::string wait = "throughput";

   std::uint32_t t = 2;
   std::uint32_t c = 4;
   std::uint32_t e = 2;
   Ticks poll_cost = 1;
   Ticks enclave_cost = 10;

   std::uint32_t chunks = 4;
   Ticks chunk_cost = 10;
   bool all_loops = false;
   Ticks prefix = 5;
   Ticks suffix = 5;
   Priority chunk_priority = 0;
   Ticks peer_blocking = 0;

   Ticks traversal_cost = 10;
   Ticks straggler = 40;
};

struct SimulateOptions {
   std::string graph;
   std::string config_file;
   std::string output;
   std::string csv;
   std::string policy = "reference";
   std::string queue_bound;
   bool no_throttle = false;
   bool fair_yield = false;
   bool latency_wait = false;
   bool priority_steal = false;
   bool scatter_defer = false;
   std::uint32_t threads = 4;
   Ticks spawn_overhead = 0;
   Ticks steal_overhead = 0;
   Ticks max_time = 0;
   std::uint64_t max_poll_retries = 0;
};

struct CompareOptions {
   std::string graph;
   std::string baseline;
   std::string variant;
   std::string output;
};

struct ReportOptions {
   std::string graph;
   std::string trace;
   std::string output;
   std::string text;
   std::string svg;
};

std::string joined(const std::vector<std::string>& args) {
   std::string out;
   for (const auto& a : args) out += (out.empty() ? "" : " ") + a;
   return out;
}

Meta invocation_meta(const std::vector<std::string>& args) { return {{"tool", "tasksim"}, {"argv", joined(args)}}; }

bool given(const CLI::App* app, const char* name) { return app->count(name) > 0; }

std::optional<std::size_t> parse_bound(const std::string& s) {
   if (s == "unbounded" || s == "inf") return std::nullopt;
   try {
      std::size_t pos = 0;
      const long long v = std::stoll(s, &pos);
      if (pos != s.size() || v <= 0) throw ConfigError("");
      return static_cast<std::size_t>(v);
   } catch (const std::exception&) {
      throw ConfigError("--queue-bound expects a positive integer or 'unbounded', got '" + s + "'");
   }
}

std::vector<std::uint32_t> broadcast(const std::vector<std::uint32_t>& v, std::uint32_t k, std::uint32_t fallback) {
   if (v.empty()) return std::vector<std::uint32_t>(k, fallback);
   if (v.size() == 1) return std::vector<std::uint32_t>(k, v[0]);
   return v;
}

void add_output(CLI::App* sub, GenerateOptions& o) {
   sub->add_option("-o,--output", o.output, "Graph JSON path (stdout when omitted)");
   sub->add_option("--params", o.params_file, "JSON file with generator params; flags override it");
}

int finish_generate(const TaskGraph& g, const GenerateOptions& o, const std::vector<std::string>& args, std::ostream& out) {
   TaskGraph graph = g;
   for (const auto& [k, v] : invocation_meta(args)) graph.meta[k] = v;
   require_valid(graph);
   const std::string text = to_json(graph).dump(2) + "\n";
   if (o.output.empty()) {
      out << text;
   } else {
      write_text_file(o.output, text);
   }
   out << "tasks=" << graph.size() << " total_work=" << total_work(graph) << "\n";
   return kExitOk;
}

int run_generate(CLI::App* gen, GenerateOptions& o, const std::vector<std::string>& args, std::ostream& out) {
   const Json params = o.params_file.empty() ? Json::object() : read_json_file(o.params_file);
   if (auto* sub = gen->get_subcommand("enclave"); sub->parsed()) {
      EnclaveWorkloadParams p = enclave_params_from_json(params);
      if (given(sub, "--k") || params.empty()) p.K = o.k;
      if (given(sub, "--timesteps")) p.timesteps = o.timesteps;
      if (given(sub, "--enclaves") || p.enclaves_per_traversal.empty()) p.enclaves_per_traversal = broadcast(o.enclaves, p.K, 10);
      if (given(sub, "--cells") || p.cells_per_traversal.empty()) p.cells_per_traversal = broadcast(o.cells, p.K, 100);
      if (given(sub, "--cell-cost")) p.traversal_cell_cost = o.cell_cost;
      if (given(sub, "--enclave-min")) p.enclave_cost_range.first = o.enclave_min;
      if (given(sub, "--enclave-max")) p.enclave_cost_range.second = o.enclave_max;
      if (given(sub, "--seed")) p.seed = o.seed;
      if (given(sub, "--defer")) p.defer_mode = defer_mode_from_string(o.defer);
      if (given(sub, "--yield")) p.yield_mode = yield_mode_from_string(o.yield);
      if (given(sub, "--wait")) p.wait_mode = wait_mode_from_string(o.wait);
      return finish_generate(gen_enclave_pattern(p), o, args, out);
   }
   if (auto* sub = gen->get_subcommand("starvation"); sub->parsed()) {
      StarvationParams p = starvation_params_from_json(params);
      if (given(sub, "--t")) p.T = o.t;
      if (given(sub, "--c")) p.C = o.c;
      if (given(sub, "--e")) p.E = o.e;
      if (given(sub, "--poll-cost")) p.poll_cost = o.poll_cost;
      if (given(sub, "--enclave-cost")) p.enclave_cost = o.enclave_cost;
      if (given(sub, "--seed")) p.seed = o.seed;
      return finish_generate(gen_starvation_pattern(p), o, args, out);
   }
   if (auto* sub = gen->get_subcommand("nested"); sub->parsed()) {
      NestedLoopParams p = nested_params_from_json(params);
      if (given(sub, "--k")) p.K = o.k;
      if (given(sub, "--chunks")) p.loop_chunks = o.chunks;
      if (given(sub, "--chunk-cost")) p.chunk_cost = o.chunk_cost;
      if (given(sub, "--all-loops")) p.loop_on_critical_task_only = !o.all_loops;
      if (given(sub, "--prefix")) p.serial_prefix_cost = o.prefix;
      if (given(sub, "--suffix")) p.serial_suffix_cost = o.suffix;
      if (given(sub, "--chunk-priority")) p.chunk_priority = o.chunk_priority;
      if (given(sub, "--peer-blocking")) p.peer_blocking_cost = o.peer_blocking;
      if (given(sub, "--seed")) p.seed = o.seed;
      return finish_generate(gen_nested_loop_pattern(p), o, args, out);
   }
   auto* sub = gen->get_subcommand("two-timestep");
   TwoTimestepParams p = two_timestep_params_from_json(params);
   if (given(sub, "--k")) p.K = o.k;
   if (given(sub, "--traversal-cost")) p.traversal_cost = o.traversal_cost;
   if (given(sub, "--straggler")) p.straggler_enclave_cost = o.straggler;
   if (given(sub, "--wait")) p.wait_mode = wait_mode_from_string(o.wait);
   return finish_generate(gen_two_timestep_pattern(p), o, args, out);
}

SimConfig build_config(const CLI::App* sim, const SimulateOptions& o) {
   SimConfig cfg;
   if (!o.config_file.empty()) cfg = sim_config_from_json(read_json_file(o.config_file));
   if (given(sim, "--policy") || o.config_file.empty()) {
      const PolicyKind kind = policy_kind_from_string(o.policy);
      const auto bound = cfg.policy.queue_bound;
      cfg.policy = kind == PolicyKind::GlobalFCFS ? PolicyConfig::fcfs()
                   : kind == PolicyKind::Extended ? PolicyConfig::extended(bound)
                                                  : PolicyConfig::reference(bound);
   }
   const bool any_feature = o.fair_yield || o.latency_wait || o.priority_steal || o.scatter_defer;
   if (any_feature) {
      PolicyConfig& p = cfg.policy;
      p.fair_yield = o.fair_yield;
      p.honor_latency_wait = o.latency_wait;
      p.priority_aware = o.priority_steal;
      p.honor_defer = o.scatter_defer;
      p.scatter_on_overflow = o.scatter_defer;
   }
   if (!o.queue_bound.empty()) cfg.policy.queue_bound = parse_bound(o.queue_bound);
   if (o.no_throttle) cfg.policy.queue_bound = std::nullopt;
   if (given(sim, "--threads") || o.config_file.empty()) cfg.thread_count = o.threads;
   if (given(sim, "--spawn-overhead")) cfg.spawn_overhead = o.spawn_overhead;
   if (given(sim, "--steal-overhead")) cfg.steal_overhead = o.steal_overhead;
   if (given(sim, "--max-time")) cfg.max_virtual_time = o.max_time;
   if (given(sim, "--max-poll-retries")) cfg.max_poll_retries_without_progress = o.max_poll_retries;
   cfg.check();
   return cfg;
}

int run_simulate(const CLI::App* sim, const SimulateOptions& o, const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
   const TaskGraph graph = graph_from_json(read_json_file(o.graph));
   const SimConfig cfg = build_config(sim, o);
   if (cfg.policy.kind != PolicyKind::Extended && (o.fair_yield || o.latency_wait || o.priority_steal || o.scatter_defer)) {
      err << "warning: feature flags only affect --policy extended\n";
   }
   const ScheduleTrace trace = simulate(graph, cfg);
   Meta meta = invocation_meta(args);
   meta["config"] = to_json(cfg).dump();
   const std::string text = to_json(trace, meta).dump(2) + "\n";
   if (o.output.empty()) {
      out << text;
   } else {
      write_text_file(o.output, text);
   }
   if (!o.csv.empty()) write_text_file(o.csv, trace_to_csv(trace, meta));
   out << "makespan=" << trace.makespan << " outcome=" << to_string(trace.outcome) << "\n";
   switch (trace.outcome) {
      case Outcome::Completed: return kExitOk;
      case Outcome::StarvationDetected: return kExitStarvation;
      case Outcome::TimeLimitExceeded: return kExitTimeLimit;
   }
   return kExitOk;
}

int run_compare(const CompareOptions& o, const std::vector<std::string>& args, std::ostream& out) {
   const TaskGraph graph = graph_from_json(read_json_file(o.graph));
   const ScheduleTrace base = trace_from_json(read_json_file(o.baseline));
   const ScheduleTrace var = trace_from_json(read_json_file(o.variant));
   const ComparisonReport report = compare(graph, base, var);
   out << render_table(report);
   if (!o.output.empty()) write_text_file(o.output, to_json(report, invocation_meta(args)).dump(2) + "\n");
   return kExitOk;
}

int run_report(const ReportOptions& o, const std::vector<std::string>& args, std::ostream& out) {
   const TaskGraph graph = graph_from_json(read_json_file(o.graph));
   const ScheduleTrace trace = trace_from_json(read_json_file(o.trace));
   const AnalysisReport report = analyze(graph, trace);
   const Meta meta = invocation_meta(args);
   std::string table;
   for (const auto& [k, v] : meta) table += "# " + k + "=" + v + "\n";
   table += render_table(report);
   out << render_table(report);
   if (!o.text.empty()) write_text_file(o.text, table);
   if (!o.output.empty()) write_text_file(o.output, to_json(report, meta).dump(2) + "\n");
   if (!o.svg.empty()) write_text_file(o.svg, gantt_svg(graph, trace, meta));
   return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
   CLI::App app{"Discrete-event simulator of task-scheduling policies", "tasksim"};
   app.require_subcommand(1);

   GenerateOptions g;
   auto* gen = app.add_subcommand("generate", "Write a synthetic task graph as JSON");
   gen->require_subcommand(1);

   auto* enclave = gen->add_subcommand("enclave", "Traversal/enclave producer-consumer sweeps");
   enclave->add_option("--k", g.k, "Traversals per step");
   enclave->add_option("--timesteps", g.timesteps, "Number of steps");
   enclave->add_option("--enclaves", g.enclaves, "Enclaves per traversal (one value is broadcast)")->delimiter(',');
   enclave->add_option("--cells", g.cells, "Cells per traversal (one value is broadcast)")->delimiter(',');
   enclave->add_option("--cell-cost", g.cell_cost, "Compute per traversal cell");
   enclave->add_option("--enclave-min", g.enclave_min, "Lowest enclave cost");
   enclave->add_option("--enclave-max", g.enclave_max, "Highest enclave cost");
   enclave->add_option("--seed", g.seed);
   enclave->add_option("--defer", g.defer, "runtime|must_defer|undeferred");
   enclave->add_option("--yield", g.yield, "default|latency|throughput");
   enclave->add_option("--wait", g.wait, "throughput|latency");
   add_output(enclave, g);

   auto* starvation = gen->add_subcommand("starvation", "Consumers polling enclaves queued behind them");
   starvation->add_option("--t", g.t, "Threads the pattern targets");
   starvation->add_option("--c", g.c, "Consumers");
   starvation->add_option("--e", g.e, "Enclaves");
   starvation->add_option("--poll-cost", g.poll_cost);
   starvation->add_option("--enclave-cost", g.enclave_cost);
   starvation->add_option("--seed", g.seed);
   add_output(starvation, g);

   auto* nested = gen->add_subcommand("nested", "Traversals with a nested parallel loop");
   nested->add_option("--k", g.k, "Traversals");
   nested->add_option("--chunks", g.chunks, "Loop chunks per looped traversal");
   nested->add_option("--chunk-cost", g.chunk_cost);
   nested->add_flag("--all-loops", g.all_loops, "Every traversal runs a loop, not only the critical one");
   nested->add_option("--prefix", g.prefix, "Serial compute before the loop");
   nested->add_option("--suffix", g.suffix, "Serial compute after the loop");
   nested->add_option("--chunk-priority", g.chunk_priority);
   nested->add_option("--peer-blocking", g.peer_blocking, "Cost of the background roots that occupy the peers");
   nested->add_option("--seed", g.seed);
   add_output(nested, g);

   auto* two = gen->add_subcommand("two-timestep", "Two traversal groups separated by a wait");
   two->add_option("--k", g.k, "Traversals per group");
   two->add_option("--traversal-cost", g.traversal_cost);
   two->add_option("--straggler", g.straggler, "Enclave cost; the last traversal runs cost + straggler/2");
   two->add_option("--wait", g.wait, "throughput|latency");
   add_output(two, g);

   SimulateOptions s;
   auto* sim = app.add_subcommand("simulate", "Replay a graph under a policy");
   sim->add_option("graph", s.graph, "Graph JSON")->required();
   sim->add_option("-o,--output", s.output, "Trace JSON path (stdout when omitted)");
   sim->add_option("--csv", s.csv, "Also write segments as CSV");
   sim->add_option("--config", s.config_file, "SimConfig JSON; flags override it");
   sim->add_option("--policy", s.policy, "reference|fcfs|extended")->check(CLI::IsMember({"reference", "fcfs", "extended"}));
   sim->add_option("--queue-bound", s.queue_bound, "Per-thread queue bound or 'unbounded'");
   sim->add_flag("--no-throttle", s.no_throttle, "Same as --queue-bound unbounded");
   sim->add_flag("--fair-yield", s.fair_yield, "Extended: re-queue yielders behind everything");
   sim->add_flag("--latency-wait", s.latency_wait, "Extended: honour latency waits");
   sim->add_flag("--priority-steal", s.priority_steal, "Extended: priority-aware picks and loop scatter");
   sim->add_flag("--scatter-defer", s.scatter_defer, "Extended: honour must_defer by scattering on overflow");
   sim->add_option("--threads", s.threads, "Worker threads")->check(CLI::PositiveNumber);
   sim->add_option("--spawn-overhead", s.spawn_overhead);
   sim->add_option("--steal-overhead", s.steal_overhead);
   sim->add_option("--max-time", s.max_time, "Virtual time limit");
   sim->add_option("--max-poll-retries", s.max_poll_retries, "Failed polls tolerated without progress");

   CompareOptions c;
   auto* cmp = app.add_subcommand("compare", "Compare two traces of the same graph");
   cmp->add_option("graph", c.graph)->required();
   cmp->add_option("baseline", c.baseline)->required();
   cmp->add_option("variant", c.variant)->required();
   cmp->add_option("-o,--output", c.output, "ComparisonReport JSON path");

   ReportOptions r;
   auto* rep = app.add_subcommand("report", "Analyse a trace");
   rep->add_option("graph", r.graph)->required();
   rep->add_option("trace", r.trace)->required();
   rep->add_option("-o,--output", r.output, "AnalysisReport JSON path");
   rep->add_option("--text", r.text, "Plain-text table path");
   rep->add_option("--svg", r.svg, "Gantt chart path");

   std::vector<std::string> reversed(args.rbegin(), args.rend());
   try {
      app.parse(reversed);
   } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
   }

   try {
      if (gen->parsed()) return run_generate(gen, g, args, out);
      if (sim->parsed()) return run_simulate(sim, s, args, out, err);
      if (cmp->parsed()) return run_compare(c, args, out);
      if (rep->parsed()) return run_report(r, args, out);
   } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
   }
   return kExitUsage;
}

} // namespace tasksim
