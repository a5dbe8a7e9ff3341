#include "tasksim/serialize.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace tasksim {

std::string to_string(DeferMode mode) {
   switch (mode) {
      case DeferMode::RuntimeChoice: return "runtime";
      case DeferMode::MustDefer: return "must_defer";
      case DeferMode::Undeferred: return "undeferred";
   }
   return "?";
}

std::string to_string(YieldMode mode) {
   switch (mode) {
      case YieldMode::Default: return "default";
      case YieldMode::Latency: return "latency";
      case YieldMode::Throughput: return "throughput";
   }
   return "?";
}

std::string to_string(WaitMode mode) { return mode == WaitMode::Latency ? "latency" : "throughput"; }

DeferMode defer_mode_from_string(const std::string& s) {
   if (s == "runtime") return DeferMode::RuntimeChoice;
   if (s == "must_defer") return DeferMode::MustDefer;
   if (s == "undeferred") return DeferMode::Undeferred;
   throw ParseError("unknown defer mode '" + s + "'");
}

YieldMode yield_mode_from_string(const std::string& s) {
   if (s == "default") return YieldMode::Default;
   if (s == "latency") return YieldMode::Latency;
   if (s == "throughput") return YieldMode::Throughput;
   throw ParseError("unknown yield mode '" + s + "'");
}

WaitMode wait_mode_from_string(const std::string& s) {
   if (s == "throughput") return WaitMode::Throughput;
   if (s == "latency") return WaitMode::Latency;
   throw ParseError("unknown wait mode '" + s + "'");
}

PolicyKind policy_kind_from_string(const std::string& s) {
   if (s == "reference") return PolicyKind::ReferenceDeque;
   if (s == "fcfs") return PolicyKind::GlobalFCFS;
   if (s == "extended") return PolicyKind::Extended;
   throw ParseError("unknown policy '" + s + "'");
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
   using Ts::operator()...;
};

const Json& field(const Json& j, const char* key) {
   if (!j.is_object()) throw ParseError(std::string("expected an object holding '") + key + "'");
   auto it = j.find(key);
   if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
   return *it;
}

template <class T>
T get(const Json& j, const char* key) {
   try {
      return field(j, key).get<T>();
   } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("field '") + key + "': " + e.what());
   }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
   if (!j.contains(key)) return fallback;
   return get<T>(j, key);
}

Json meta_json(const Meta& meta) {
   Json m = Json::object();
   for (const auto& [k, v] : meta) m[k] = v;
   return m;
}

Json action_to_json(const Action& a) {
   return std::visit(Overloaded{
                        [](const Compute& c) { return Json{{"type", "compute"}, {"duration", c.duration}}; },
                        [](const Spawn& s) { return Json{{"type", "spawn"}, {"child", s.child}, {"defer", to_string(s.defer)}}; },
                        [](const PollOutcome& p) {
                           return Json{{"type", "poll"}, {"target", p.target}, {"yield_mode", to_string(p.yield_mode)}, {"poll_cost", p.poll_cost}};
                        },
                        [](const TaskwaitChildren& w) { return Json{{"type", "taskwait_children"}, {"mode", to_string(w.mode)}}; },
                        [](const TaskgroupEnd& w) { return Json{{"type", "taskgroup_end"}, {"mode", to_string(w.mode)}}; },
                     },
                     a);
}

Action action_from_json(const Json& j) {
   const auto type = get<std::string>(j, "type");
   if (type == "compute") return Compute{get<Ticks>(j, "duration")};
   if (type == "spawn") return Spawn{get<TaskId>(j, "child"), defer_mode_from_string(get_or<std::string>(j, "defer", "runtime"))};
   if (type == "poll") {
      return PollOutcome{get<TaskId>(j, "target"), yield_mode_from_string(get_or<std::string>(j, "yield_mode", "default")),
                         get_or<Ticks>(j, "poll_cost", 0)};
   }
   if (type == "taskwait_children") return TaskwaitChildren{wait_mode_from_string(get_or<std::string>(j, "mode", "throughput"))};
   if (type == "taskgroup_end") return TaskgroupEnd{wait_mode_from_string(get_or<std::string>(j, "mode", "throughput"))};
   throw ParseError("unknown action type '" + type + "'");
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const char* what) {
   if (!j.is_object()) throw ParseError(std::string(what) + " must be a JSON object");
   for (const auto& [k, v] : j.items()) {
      if (!allowed.count(k)) throw ParseError(std::string("unknown ") + what + " field '" + k + "'");
   }
}

SegmentKind segment_kind_from_string(const std::string& s) {
   for (auto k : {SegmentKind::Compute, SegmentKind::PollSpin, SegmentKind::UndeferredNested}) {
      if (to_string(k) == s) return k;
   }
   throw ParseError("unknown segment kind '" + s + "'");
}

EventKind event_kind_from_string(const std::string& s) {
   for (auto k : {EventKind::Spawned, EventKind::Stolen, EventKind::Scattered, EventKind::Throttled, EventKind::Yielded,
                  EventKind::WaitEntered, EventKind::WaitExited, EventKind::Completed}) {
      if (to_string(k) == s) return k;
   }
   throw ParseError("unknown event kind '" + s + "'");
}

Outcome outcome_from_string(const std::string& s) {
   for (auto k : {Outcome::Completed, Outcome::StarvationDetected, Outcome::TimeLimitExceeded}) {
      if (to_string(k) == s) return k;
   }
   throw ParseError("unknown outcome '" + s + "'");
}

} // namespace

Json to_json(const TaskGraph& graph) {
   Json tasks = Json::array();
   for (const TaskSpec& t : graph.tasks) {
      Json actions = Json::array();
      for (const Action& a : t.actions) actions.push_back(action_to_json(a));
      tasks.push_back({{"id", t.id}, {"priority", t.priority}, {"tied", t.tied}, {"label", t.label}, {"actions", actions}});
   }
   Json j{{"tasks", tasks}, {"roots", graph.roots}};
   if (!graph.meta.empty()) j["meta"] = meta_json(graph.meta);
   return j;
}

TaskGraph graph_from_json(const Json& j) {
   TaskGraph g;
   const Json& tasks = field(j, "tasks");
   if (!tasks.is_array()) throw ParseError("'tasks' must be an array");
   for (const Json& tj : tasks) {
      TaskSpec t;
      t.id = get<TaskId>(tj, "id");
      t.priority = get_or<Priority>(tj, "priority", 0);
      t.tied = get_or<bool>(tj, "tied", true);
      t.label = get_or<std::string>(tj, "label", "");
      const Json& actions = field(tj, "actions");
      if (!actions.is_array()) throw ParseError("'actions' must be an array");
      for (const Json& a : actions) t.actions.push_back(action_from_json(a));
      g.tasks.push_back(std::move(t));
   }
   g.roots = get<std::vector<TaskId>>(j, "roots");
   if (j.contains("meta")) {
      for (const auto& [k, v] : field(j, "meta").items()) g.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
   }
   return g;
}

Json to_json(const PolicyConfig& cfg) {
   Json j{{"kind", to_string(cfg.kind)},
          {"honor_defer", cfg.honor_defer},
          {"priority_aware", cfg.priority_aware},
          {"scatter_on_overflow", cfg.scatter_on_overflow},
          {"scattered_priority", cfg.scattered_priority},
          {"fair_yield", cfg.fair_yield},
          {"honor_latency_wait", cfg.honor_latency_wait}};
   j["queue_bound"] = cfg.queue_bound ? Json(*cfg.queue_bound) : Json(nullptr);
   return j;
}

PolicyConfig policy_from_json(const Json& j) {
   reject_unknown(j, {"kind", "queue_bound", "honor_defer", "priority_aware", "scatter_on_overflow", "scattered_priority", "fair_yield",
                      "honor_latency_wait"},
                  "policy");
   PolicyConfig cfg;
   cfg.kind = policy_kind_from_string(get<std::string>(j, "kind"));
   if (j.contains("queue_bound")) {
      const Json& b = j["queue_bound"];
      if (b.is_null() || (b.is_string() && b.get<std::string>() == "unbounded")) {
         cfg.queue_bound = std::nullopt;
      } else {
         cfg.queue_bound = get<std::size_t>(j, "queue_bound");
      }
   }
   cfg.honor_defer = get_or(j, "honor_defer", cfg.honor_defer);
   cfg.priority_aware = get_or(j, "priority_aware", cfg.priority_aware);
   cfg.scatter_on_overflow = get_or(j, "scatter_on_overflow", cfg.scatter_on_overflow);
   cfg.scattered_priority = get_or(j, "scattered_priority", cfg.scattered_priority);
   cfg.fair_yield = get_or(j, "fair_yield", cfg.fair_yield);
   cfg.honor_latency_wait = get_or(j, "honor_latency_wait", cfg.honor_latency_wait);
   return cfg;
}

Json to_json(const SimConfig& cfg) {
   Json j{{"thread_count", cfg.thread_count},
          {"policy", to_json(cfg.policy)},
          {"spawn_overhead", cfg.spawn_overhead},
          {"steal_overhead", cfg.steal_overhead},
          {"max_virtual_time", cfg.max_virtual_time},
          {"max_poll_retries_without_progress", cfg.max_poll_retries_without_progress}};
   j["max_undeferred_depth"] = cfg.max_undeferred_depth ? Json(*cfg.max_undeferred_depth) : Json(nullptr);
   return j;
}

SimConfig sim_config_from_json(const Json& j) {
   reject_unknown(j, {"thread_count", "policy", "spawn_overhead", "steal_overhead", "max_virtual_time", "max_poll_retries_without_progress",
                      "max_undeferred_depth"},
                  "config");
   SimConfig cfg;
   cfg.thread_count = get_or(j, "thread_count", cfg.thread_count);
   if (j.contains("policy")) cfg.policy = policy_from_json(j["policy"]);
   cfg.spawn_overhead = get_or(j, "spawn_overhead", cfg.spawn_overhead);
   cfg.steal_overhead = get_or(j, "steal_overhead", cfg.steal_overhead);
   cfg.max_virtual_time = get_or(j, "max_virtual_time", cfg.max_virtual_time);
   cfg.max_poll_retries_without_progress = get_or(j, "max_poll_retries_without_progress", cfg.max_poll_retries_without_progress);
   if (j.contains("max_undeferred_depth") && !j["max_undeferred_depth"].is_null()) {
      cfg.max_undeferred_depth = get<std::size_t>(j, "max_undeferred_depth");
   }
   return cfg;
}

Json to_json(const ScheduleTrace& trace, const Meta& meta) {
   Json segments = Json::array();
   for (const Segment& s : trace.segments) {
      segments.push_back({{"thread", s.thread}, {"task", s.task}, {"start", s.start}, {"end", s.end}, {"kind", to_string(s.kind)}});
   }
   Json events = Json::array();
   for (const TraceEvent& e : trace.events) {
      events.push_back({{"time", e.time}, {"kind", to_string(e.kind)}, {"task", e.task}, {"thread", e.thread}});
   }
   return Json{{"meta", meta_json(meta)},
               {"thread_count", trace.thread_count},
               {"makespan", trace.makespan},
               {"outcome", to_string(trace.outcome)},
               {"idle_with_ready_work", trace.idle_with_ready_work},
               {"segments", segments},
               {"events", events}};
}

ScheduleTrace trace_from_json(const Json& j) {
   ScheduleTrace t;
   t.thread_count = get<std::uint32_t>(j, "thread_count");
   t.makespan = get<Ticks>(j, "makespan");
   t.outcome = outcome_from_string(get<std::string>(j, "outcome"));
   t.idle_with_ready_work = get_or<std::uint64_t>(j, "idle_with_ready_work", 0);
   for (const Json& s : field(j, "segments")) {
      t.segments.push_back({get<ThreadIndex>(s, "thread"), get<TaskId>(s, "task"), get<Ticks>(s, "start"), get<Ticks>(s, "end"),
                            segment_kind_from_string(get<std::string>(s, "kind"))});
   }
   for (const Json& e : field(j, "events")) {
      t.events.push_back({get<Ticks>(e, "time"), event_kind_from_string(get<std::string>(e, "kind")), get<TaskId>(e, "task"),
                          get<ThreadIndex>(e, "thread")});
   }
   return t;
}

Json to_json(const AnalysisReport& r, const Meta& meta) {
   return Json{{"meta", meta_json(meta)},
               {"outcome", to_string(r.outcome)},
               {"makespan", r.makespan},
               {"critical_path_length", r.critical_path_length},
               {"critical_path", r.critical_path},
               {"total_work", r.total_work},
               {"compute_ticks", r.compute_ticks},
               {"poll_spin_ticks", r.poll_spin_ticks},
               {"occupancy", r.occupancy.value()},
               {"occupancy_rational", {r.occupancy.num, r.occupancy.den}},
               {"per_thread_busy", r.per_thread_busy},
               {"throttled_spawns", r.throttled_spawns},
               {"undeferred_on_critical_path", r.undeferred_on_critical_path},
               {"steals", r.steals},
               {"scatters", r.scatters},
               {"yields", r.yields},
               {"loop_chunks", r.loop_chunks},
               {"loop_chunks_on_spawner", r.loop_chunks_on_spawner},
               {"group_start_latency", r.group_start_latency},
               {"group2_immediate_starts", r.group2_immediate_starts},
               {"starvation", r.starvation},
               {"flaws", r.flaws}};
}

Json to_json(const ComparisonReport& c, const Meta& meta) {
   Json deltas = Json::object();
   for (const auto& [k, v] : c.flaw_deltas) deltas[k] = v;
   return Json{{"meta", meta_json(meta)},
               {"baseline_makespan", c.baseline_makespan},
               {"variant_makespan", c.variant_makespan},
               {"reduction_percent", c.reduction_percent.value()},
               {"reduction_percent_rational", {c.reduction_percent.num, c.reduction_percent.den}},
               {"flaw_deltas", deltas}};
}

EnclaveWorkloadParams enclave_params_from_json(const Json& j, EnclaveWorkloadParams p) {
   reject_unknown(j, {"K", "timesteps", "enclaves_per_traversal", "traversal_cell_cost", "enclave_cost_range", "cells_per_traversal", "seed",
                      "defer_mode", "yield_mode", "wait_mode"},
                  "enclave params");
   p.K = get_or(j, "K", p.K);
   p.timesteps = get_or(j, "timesteps", p.timesteps);
   p.enclaves_per_traversal = get_or(j, "enclaves_per_traversal", p.enclaves_per_traversal);
   p.traversal_cell_cost = get_or(j, "traversal_cell_cost", p.traversal_cell_cost);
   if (j.contains("enclave_cost_range")) {
      const auto range = get<std::vector<Ticks>>(j, "enclave_cost_range");
      if (range.size() != 2) throw ParseError("enclave_cost_range must be [min, max]");
      p.enclave_cost_range = {range[0], range[1]};
   }
   p.cells_per_traversal = get_or(j, "cells_per_traversal", p.cells_per_traversal);
   p.seed = get_or(j, "seed", p.seed);
   if (j.contains("defer_mode")) p.defer_mode = defer_mode_from_string(get<std::string>(j, "defer_mode"));
   if (j.contains("yield_mode")) p.yield_mode = yield_mode_from_string(get<std::string>(j, "yield_mode"));
   if (j.contains("wait_mode")) p.wait_mode = wait_mode_from_string(get<std::string>(j, "wait_mode"));
   return p;
}

StarvationParams starvation_params_from_json(const Json& j, StarvationParams p) {
   reject_unknown(j, {"T", "C", "E", "poll_cost", "enclave_cost", "seed"}, "starvation params");
   p.T = get_or(j, "T", p.T);
   p.C = get_or(j, "C", p.C);
   p.E = get_or(j, "E", p.E);
   p.poll_cost = get_or(j, "poll_cost", p.poll_cost);
   p.enclave_cost = get_or(j, "enclave_cost", p.enclave_cost);
   p.seed = get_or(j, "seed", p.seed);
   return p;
}

NestedLoopParams nested_params_from_json(const Json& j, NestedLoopParams p) {
   reject_unknown(j, {"K", "loop_chunks", "chunk_cost", "loop_on_critical_task_only", "serial_prefix_cost", "serial_suffix_cost",
                      "chunk_priority", "peer_blocking_cost", "seed"},
                  "nested params");
   p.K = get_or(j, "K", p.K);
   p.loop_chunks = get_or(j, "loop_chunks", p.loop_chunks);
   p.chunk_cost = get_or(j, "chunk_cost", p.chunk_cost);
   p.loop_on_critical_task_only = get_or(j, "loop_on_critical_task_only", p.loop_on_critical_task_only);
   p.serial_prefix_cost = get_or(j, "serial_prefix_cost", p.serial_prefix_cost);
   p.serial_suffix_cost = get_or(j, "serial_suffix_cost", p.serial_suffix_cost);
   p.chunk_priority = get_or(j, "chunk_priority", p.chunk_priority);
   p.peer_blocking_cost = get_or(j, "peer_blocking_cost", p.peer_blocking_cost);
   p.seed = get_or(j, "seed", p.seed);
   return p;
}

TwoTimestepParams two_timestep_params_from_json(const Json& j, TwoTimestepParams p) {
   reject_unknown(j, {"K", "traversal_cost", "straggler_enclave_cost", "wait_mode"}, "two-timestep params");
   p.K = get_or(j, "K", p.K);
   p.traversal_cost = get_or(j, "traversal_cost", p.traversal_cost);
   p.straggler_enclave_cost = get_or(j, "straggler_enclave_cost", p.straggler_enclave_cost);
   if (j.contains("wait_mode")) p.wait_mode = wait_mode_from_string(get<std::string>(j, "wait_mode"));
   return p;
}

std::string trace_to_csv(const ScheduleTrace& trace, const Meta& meta) {
   std::ostringstream out;
   for (const auto& [k, v] : meta) out << "# " << k << "=" << v << "\n";
   out << "thread,task,start,end,kind\n";
   for (const Segment& s : trace.segments) {
      out << s.thread << "," << s.task << "," << s.start << "," << s.end << "," << to_string(s.kind) << "\n";
   }
   return out.str();
}

namespace {

std::string xml_escape(const std::string& s) {
   std::string out;
   for (char c : s) {
      switch (c) {
         case '&': out += "&amp;"; break;
         case '<': out += "&lt;"; break;
         case '>': out += "&gt;"; break;
         case '"': out += "&quot;"; break;
         default: out += c;
      }
   }
   return out;
}

std::string label_prefix(const std::string& label) {
   const auto cut = label.find('/');
   return cut == std::string::npos ? label : label.substr(0, cut);
}

const char* colour_for(const std::string& prefix, std::size_t index) {
   static const std::map<std::string, const char*> fixed{
      {"traversal", "#4e79a7"}, {"enclave", "#f28e2b"}, {"consumer", "#59a14f"},
      {"loop-chunk", "#e15759"}, {"background", "#bab0ac"}, {"driver", "#76b7b2"},
   };
   static const char* palette[] = {"#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#86bcb6"};
   auto it = fixed.find(prefix);
   return it != fixed.end() ? it->second : palette[index % std::size(palette)];
}

} // namespace

std::string gantt_svg(const TaskGraph& graph, const ScheduleTrace& trace, const Meta& meta) {
   constexpr double kWidth = 1000.0;
   constexpr int kRow = 24;
   constexpr int kLeft = 60;
   constexpr int kTop = 20;
   Ticks horizon = std::max<Ticks>(trace.makespan, 1);
   for (const Segment& s : trace.segments) horizon = std::max(horizon, s.end);
   const double scale = kWidth / static_cast<double>(horizon);
   const int height = kTop + static_cast<int>(trace.thread_count) * kRow + 30;

   std::map<std::string, std::size_t> prefixes;
   for (const TaskSpec& t : graph.tasks) prefixes.emplace(label_prefix(t.label), prefixes.size());
   auto label_of = [&](TaskId id) { return id < graph.size() ? graph.tasks[id].label : std::string(); };

   std::ostringstream out;
   out << std::fixed << std::setprecision(2);
   out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kLeft + kWidth + 20 << "\" height=\"" << height << "\">\n";
   out << "<!--";
   for (const auto& [k, v] : meta) out << " " << xml_escape(k) << "=" << xml_escape(v) << ";";
   out << " -->\n";
   for (std::uint32_t th = 0; th < trace.thread_count; ++th) {
      const int y = kTop + static_cast<int>(th) * kRow;
      out << "<g class=\"thread\" id=\"thread-" << th << "\">\n";
      out << "<text x=\"4\" y=\"" << y + 16 << "\" font-size=\"12\">T" << th << "</text>\n";
      out << "<line x1=\"" << kLeft << "\" y1=\"" << y + kRow - 2 << "\" x2=\"" << kLeft + kWidth << "\" y2=\"" << y + kRow - 2
          << "\" stroke=\"#dddddd\"/>\n";
      for (const Segment& s : trace.segments) {
         if (s.thread != th) continue;
         const std::string prefix = label_prefix(label_of(s.task));
         const double x = kLeft + static_cast<double>(s.start) * scale;
         const double w = std::max(0.5, static_cast<double>(s.end - s.start) * scale);
         out << "<rect x=\"" << x << "\" y=\"" << y + 2 << "\" width=\"" << w << "\" height=\"" << kRow - 6 << "\" fill=\""
             << colour_for(prefix, prefixes[prefix]) << "\"" << (s.kind == SegmentKind::PollSpin ? " fill-opacity=\"0.35\"" : "")
             << (s.kind == SegmentKind::UndeferredNested ? " stroke=\"#000000\" stroke-dasharray=\"2,1\"" : "") << "><title>task "
             << s.task << " " << xml_escape(label_of(s.task)) << " [" << s.start << "," << s.end << ") " << to_string(s.kind)
             << "</title></rect>\n";
      }
      for (const TraceEvent& e : trace.events) {
         if (e.kind != EventKind::Spawned || e.thread != th) continue;
         const double x = kLeft + static_cast<double>(e.time) * scale;
         out << "<line x1=\"" << x << "\" y1=\"" << y + 2 << "\" x2=\"" << x << "\" y2=\"" << y + 8
             << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
      }
      out << "</g>\n";
   }
   out << "<text x=\"" << kLeft << "\" y=\"" << height - 8 << "\" font-size=\"11\">0 .. " << horizon << " ticks</text>\n";
   out << "</svg>\n";
   return out.str();
}

Json read_json_file(const std::string& path) {
   std::ifstream in(path);
   if (!in) throw ParseError("cannot open '" + path + "'");
   try {
      return Json::parse(in);
   } catch (const nlohmann::json::exception& e) {
      throw ParseError("'" + path + "': " + e.what());
   }
}

void write_text_file(const std::string& path, const std::string& text) {
   std::ofstream out(path, std::ios::binary);
   if (!out) throw Error("cannot write '" + path + "'");
   out << text;
   if (!out) throw Error("failed writing '" + path + "'");
}

} // namespace tasksim
