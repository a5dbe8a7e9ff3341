#include "tasksim/analysis.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace tasksim {

Rational Rational::make(std::int64_t num, std::int64_t den) {
   if (den == 0) return {0, 1};
   if (den < 0) {
      num = -num;
      den = -den;
   }
   const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
   return {num / g, den / g};
}

std::string to_string(TraceViolation::Kind kind) {
   switch (kind) {
      case TraceViolation::Kind::UnknownTask: return "UnknownTask";
      case TraceViolation::Kind::EmptySegment: return "EmptySegment";
      case TraceViolation::Kind::OverlappingSegments: return "OverlappingSegments";
      case TraceViolation::Kind::WorkNotConserved: return "WorkNotConserved";
      case TraceViolation::Kind::MultipleCompletion: return "MultipleCompletion";
      case TraceViolation::Kind::MissingCompletion: return "MissingCompletion";
      case TraceViolation::Kind::TiedResidency: return "TiedResidency";
      case TraceViolation::Kind::LowerBound: return "LowerBound";
      case TraceViolation::Kind::IdleWithReadyWork: return "IdleWithReadyWork";
   }
   return "Unknown";
}

namespace {

void check_matches(const TaskGraph& graph, const ScheduleTrace& trace) {
   for (const Segment& s : trace.segments) {
      if (s.task >= graph.size()) throw TraceMismatch("trace segment references unknown task " + std::to_string(s.task));
      if (s.thread >= trace.thread_count) throw TraceMismatch("trace segment references unknown thread " + std::to_string(s.thread));
   }
   for (const TraceEvent& e : trace.events) {
      if (e.task >= graph.size()) throw TraceMismatch("trace event references unknown task " + std::to_string(e.task));
   }
}

std::optional<CriticalPath> try_critical_path(const TaskGraph& graph) {
   try {
      return critical_path(graph);
   } catch (const CyclicDependency&) {
      return std::nullopt;
   }
}

std::vector<Ticks> first_starts(const TaskGraph& graph, const ScheduleTrace& trace) {
   std::vector<Ticks> out(graph.size(), -1);
   for (const Segment& s : trace.segments) {
      if (out[s.task] < 0 || s.start < out[s.task]) out[s.task] = s.start;
   }
   return out;
}

bool is_compute(SegmentKind k) { return k != SegmentKind::PollSpin; }

Ticks ceil_div(Ticks a, Ticks b) { return (a + b - 1) / b; }

} // namespace

std::optional<Ticks> task_span(const ScheduleTrace& trace, TaskId task) {
   std::optional<Ticks> start;
   for (const Segment& s : trace.segments) {
      if (s.task == task && (!start || s.start < *start)) start = s.start;
   }
   for (const TraceEvent& e : trace.events) {
      if (e.kind == EventKind::Completed && e.task == task) return e.time - start.value_or(e.time);
   }
   return std::nullopt;
}

AnalysisReport analyze(const TaskGraph& graph, const ScheduleTrace& trace) {
   check_matches(graph, trace);
   AnalysisReport r;
   r.outcome = trace.outcome;
   r.makespan = trace.makespan;
   r.total_work = total_work(graph);
   r.starvation = trace.outcome == Outcome::StarvationDetected;
   const auto cp = try_critical_path(graph);
   if (cp) {
      r.critical_path_length = cp->length;
      r.critical_path = cp->path;
   }

   const std::uint32_t threads = trace.thread_count;
   std::vector<Ticks> busy(threads, 0);
   for (const Segment& s : trace.segments) {
      const Ticks len = s.end - s.start;
      busy[s.thread] += len;
      if (is_compute(s.kind)) {
         r.compute_ticks += len;
      } else {
         r.poll_spin_ticks += len;
      }
   }
   const Ticks capacity = r.makespan * static_cast<Ticks>(threads);
   r.occupancy = capacity > 0 ? Rational::make(r.compute_ticks, capacity) : Rational{0, 1};
   for (Ticks b : busy) r.per_thread_busy.push_back(r.makespan > 0 ? static_cast<double>(b) / static_cast<double>(r.makespan) : 0.0);

   for (const TraceEvent& e : trace.events) {
      switch (e.kind) {
         case EventKind::Throttled: ++r.throttled_spawns; break;
         case EventKind::Stolen: ++r.steals; break;
         case EventKind::Scattered: ++r.scatters; break;
         case EventKind::Yielded: ++r.yields; break;
         default: break;
      }
   }

   const auto parents = spawn_parents(graph);
   const std::set<TaskId> on_path(r.critical_path.begin(), r.critical_path.end());
   for (const Segment& s : trace.segments) {
      if (s.kind == SegmentKind::UndeferredNested && parents[s.task] && on_path.count(*parents[s.task])) {
         ++r.undeferred_on_critical_path;
      }
   }

   // Thread each task first ran on.
   std::vector<std::optional<ThreadIndex>> ran_on(graph.size());
   {
      std::vector<Ticks> first(graph.size(), -1);
      for (const Segment& s : trace.segments) {
         if (first[s.task] < 0 || s.start < first[s.task]) {
            first[s.task] = s.start;
            ran_on[s.task] = s.thread;
         }
      }
   }
   std::map<TaskId, std::pair<std::size_t, std::size_t>> chunks_by_parent; // on spawner, total
   for (const TaskSpec& t : graph.tasks) {
      if (t.label != kLabelLoopChunk || !ran_on[t.id]) continue;
      ++r.loop_chunks;
      auto& entry = chunks_by_parent[parents[t.id].value_or(t.id)];
      ++entry.second;
      if (parents[t.id] && ran_on[*parents[t.id]] == ran_on[t.id]) {
         ++r.loop_chunks_on_spawner;
         ++entry.first;
      }
   }
   const bool serialized_loop = std::any_of(chunks_by_parent.begin(), chunks_by_parent.end(), [](const auto& kv) {
      return kv.second.first >= 2 && 2 * kv.second.first > kv.second.second;
   });

   // Release instant: the earliest spawn of a second-group traversal.
   std::optional<Ticks> release;
   for (const TraceEvent& e : trace.events) {
      if (e.kind == EventKind::Spawned && graph.tasks[e.task].label == kLabelGroup2Traversal) {
         release = release ? std::min(*release, e.time) : e.time;
      }
   }
   if (release) {
      const auto starts = first_starts(graph, trace);
      Ticks last = *release;
      for (const TaskSpec& t : graph.tasks) {
         if (t.label != kLabelGroup2Traversal || starts[t.id] < 0) continue;
         last = std::max(last, starts[t.id]);
         if (starts[t.id] == *release) ++r.group2_immediate_starts;
      }
      r.group_start_latency = last - *release;
   }

   if (r.throttled_spawns > 0 && r.undeferred_on_critical_path > 0) r.flaws.emplace_back("throttling");
   if (serialized_loop) r.flaws.emplace_back("serialized-loop");
   if (r.starvation) r.flaws.emplace_back("starvation");
   if (r.group_start_latency > 0) r.flaws.emplace_back("wait-latency");
   return r;
}

ComparisonReport compare(const TaskGraph& graph, const ScheduleTrace& baseline, const ScheduleTrace& variant) {
   const AnalysisReport a = analyze(graph, baseline);
   const AnalysisReport b = analyze(graph, variant);
   ComparisonReport c;
   c.baseline_makespan = a.makespan;
   c.variant_makespan = b.makespan;
   c.reduction_percent = a.makespan > 0 ? Rational::make(100 * (a.makespan - b.makespan), a.makespan) : Rational{0, 1};
   auto delta = [&](const char* name, double x, double y) { c.flaw_deltas[name] = y - x; };
   delta("makespan", static_cast<double>(a.makespan), static_cast<double>(b.makespan));
   delta("occupancy", a.occupancy.value(), b.occupancy.value());
   delta("throttled_spawns", static_cast<double>(a.throttled_spawns), static_cast<double>(b.throttled_spawns));
   delta("undeferred_on_critical_path", static_cast<double>(a.undeferred_on_critical_path),
         static_cast<double>(b.undeferred_on_critical_path));
   delta("group_start_latency", static_cast<double>(a.group_start_latency), static_cast<double>(b.group_start_latency));
   delta("poll_spin_ticks", static_cast<double>(a.poll_spin_ticks), static_cast<double>(b.poll_spin_ticks));
   delta("starvation", a.starvation ? 1.0 : 0.0, b.starvation ? 1.0 : 0.0);
   return c;
}

std::vector<TraceViolation> validate_trace(const TaskGraph& graph, const ScheduleTrace& trace) {
   using K = TraceViolation::Kind;
   std::vector<TraceViolation> out;
   auto add = [&](K kind, std::uint32_t subject, const std::string& msg) {
      out.push_back({kind, subject, to_string(kind) + "(" + std::to_string(subject) + ")" + (msg.empty() ? "" : ": " + msg)});
   };
   const std::size_t n = graph.size();

   std::vector<std::vector<const Segment*>> per_thread(trace.thread_count);
   std::vector<Ticks> executed(n, 0);
   std::vector<std::optional<ThreadIndex>> tied_thread(n);
   std::vector<bool> tied_reported(n, false);
   for (const Segment& s : trace.segments) {
      if (s.task >= n || s.thread >= trace.thread_count) {
         add(K::UnknownTask, s.task, "segment outside the graph or thread range");
         continue;
      }
      if (s.end <= s.start) add(K::EmptySegment, s.task, "");
      per_thread[s.thread].push_back(&s);
      if (is_compute(s.kind)) executed[s.task] += s.end - s.start;
      if (graph.tasks[s.task].tied) {
         if (!tied_thread[s.task]) {
            tied_thread[s.task] = s.thread;
         } else if (*tied_thread[s.task] != s.thread && !tied_reported[s.task]) {
            add(K::TiedResidency, s.task, "tied task ran on two threads");
            tied_reported[s.task] = true;
         }
      }
   }
   for (std::uint32_t th = 0; th < per_thread.size(); ++th) {
      auto& segs = per_thread[th];
      std::sort(segs.begin(), segs.end(), [](const Segment* a, const Segment* b) { return a->start < b->start; });
      for (std::size_t i = 1; i < segs.size(); ++i) {
         if (segs[i]->start < segs[i - 1]->end) {
            add(K::OverlappingSegments, th, "");
            break;
         }
      }
   }

   const bool completed = trace.outcome == Outcome::Completed;
   std::vector<std::size_t> completions(n, 0);
   for (const TraceEvent& e : trace.events) {
      if (e.task >= n) {
         add(K::UnknownTask, e.task, "event outside the graph");
         continue;
      }
      if (e.kind == EventKind::Completed) ++completions[e.task];
   }
   for (std::size_t t = 0; t < n; ++t) {
      const auto id = static_cast<std::uint32_t>(t);
      const Ticks want = compute_work(graph.tasks[t]);
      if (completions[t] > 1) add(K::MultipleCompletion, id, "");
      if (completed && completions[t] == 0) add(K::MissingCompletion, id, "");
      const bool conserved = (completed || completions[t] > 0) ? executed[t] == want : executed[t] <= want;
      if (!conserved) add(K::WorkNotConserved, id, std::to_string(executed[t]) + " of " + std::to_string(want) + " ticks");
   }

   if (completed && trace.thread_count > 0) {
      const Ticks work = total_work(graph);
      if (trace.makespan < ceil_div(work, trace.thread_count)) add(K::LowerBound, 0, "makespan below total_work / threads");
      if (const auto cp = try_critical_path(graph); cp && trace.makespan < cp->length) {
         add(K::LowerBound, 0, "makespan below the critical path");
      }
   }
   if (trace.idle_with_ready_work > 0) add(K::IdleWithReadyWork, 0, std::to_string(trace.idle_with_ready_work) + " idle instants");
   return out;
}

namespace {

std::string fixed(double v, int digits) {
   std::ostringstream out;
   out << std::fixed << std::setprecision(digits) << v;
   return out.str();
}

void row(std::ostringstream& out, const std::string& key, const std::string& value) {
   out << std::left << std::setw(29) << key << ' ' << value << "\n";
}

} // namespace

std::string render_table(const AnalysisReport& r) {
   std::ostringstream out;
   row(out, "outcome", to_string(r.outcome));
   row(out, "makespan", std::to_string(r.makespan));
   row(out, "critical_path_length", std::to_string(r.critical_path_length));
   row(out, "total_work", std::to_string(r.total_work));
   row(out, "occupancy", fixed(r.occupancy.value(), 4) + " (" + std::to_string(r.occupancy.num) + "/" + std::to_string(r.occupancy.den) + ")");
   row(out, "poll_spin_ticks", std::to_string(r.poll_spin_ticks));
   std::string busy;
   for (std::size_t i = 0; i < r.per_thread_busy.size(); ++i) busy += (i ? " " : "") + fixed(r.per_thread_busy[i], 3);
   row(out, "per_thread_busy", busy);
   row(out, "throttled_spawns", std::to_string(r.throttled_spawns));
   row(out, "undeferred_on_critical_path", std::to_string(r.undeferred_on_critical_path));
   row(out, "steals", std::to_string(r.steals));
   row(out, "scatters", std::to_string(r.scatters));
   row(out, "yields", std::to_string(r.yields));
   row(out, "loop_chunks_on_spawner", std::to_string(r.loop_chunks_on_spawner) + " of " + std::to_string(r.loop_chunks));
   row(out, "group_start_latency", std::to_string(r.group_start_latency));
   row(out, "starvation", r.starvation ? "yes" : "no");
   std::string flaws;
   for (const auto& f : r.flaws) flaws += (flaws.empty() ? "" : ", ") + f;
   row(out, "flaws", flaws.empty() ? "none" : flaws);
   return out.str();
}

std::string render_table(const ComparisonReport& c) {
   std::ostringstream out;
   row(out, "baseline_makespan", std::to_string(c.baseline_makespan));
   row(out, "variant_makespan", std::to_string(c.variant_makespan));
   row(out, "reduction_percent", fixed(c.reduction_percent.value(), 2));
   for (const auto& [name, d] : c.flaw_deltas) row(out, "delta " + name, fixed(d, 4));
   return out.str();
}

} // namespace tasksim
