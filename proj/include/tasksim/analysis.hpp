#pragma once

#include "tasksim/engine.hpp"
#include "tasksim/task_graph.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tasksim {

/// Exact non-negative-denominator fraction.
struct Rational {
   std::int64_t num = 0;
   std::int64_t den = 1;

   static Rational make(std::int64_t num, std::int64_t den);
   double value() const { return static_cast<double>(num) / static_cast<double>(den); }
   bool operator==(const Rational&) const = default;
};

struct AnalysisReport {
   Outcome outcome = Outcome::Completed;
   Ticks makespan = 0;
   Ticks critical_path_length = 0;
   std::vector<TaskId> critical_path;
   Ticks total_work = 0;
   /// Compute and undeferred-nested ticks actually executed.
   Ticks compute_ticks = 0;
   /// Busy-but-wasted ticks.
   Ticks poll_spin_ticks = 0;
   /// compute_ticks / (makespan * threads).
   Rational occupancy;
   /// Per thread: ticks covered by any segment / makespan.
   std::vector<double> per_thread_busy;
   std::size_t throttled_spawns = 0;
   std::size_t undeferred_on_critical_path = 0;
   std::size_t steals = 0;
   std::size_t scatters = 0;
   std::size_t yields = 0;
   /// Loop chunks that ran on the thread of the task that spawned them.
   std::size_t loop_chunks_on_spawner = 0;
   std::size_t loop_chunks = 0;
   Ticks group_start_latency = 0;
   /// Second-group traversals whose first segment starts at the release instant.
   std::size_t group2_immediate_starts = 0;
   bool starvation = false;
   /// Names of the detected flaw patterns: throttling, serialized-loop, starvation, wait-latency.
   std::vector<std::string> flaws;
};

struct ComparisonReport {
   Ticks baseline_makespan = 0;
   Ticks variant_makespan = 0;
   /// 100 * (baseline - variant) / baseline.
   Rational reduction_percent;
   /// variant minus baseline, per metric.
   std::map<std::string, double> flaw_deltas;
};

struct TraceViolation {
   enum class Kind {
      UnknownTask,
      EmptySegment,
      OverlappingSegments,
      WorkNotConserved,
      MultipleCompletion,
      MissingCompletion,
      TiedResidency,
      LowerBound,
      IdleWithReadyWork,
   };
   Kind kind;
   /// Task id, or thread index for OverlappingSegments and IdleWithReadyWork.
   std::uint32_t subject = 0;
   std::string message;
   bool operator==(const TraceViolation& o) const { return kind == o.kind && subject == o.subject; }
};

std::string to_string(TraceViolation::Kind kind);

/// Throws TraceMismatch when the trace references tasks the graph lacks.
AnalysisReport analyze(const TaskGraph& graph, const ScheduleTrace& trace);

/// Throws TraceMismatch unless both traces fit the graph.
ComparisonReport compare(const TaskGraph& graph, const ScheduleTrace& baseline, const ScheduleTrace& variant);

/// Empty iff the trace is a faithful execution of the graph.
std::vector<TraceViolation> validate_trace(const TaskGraph& graph, const ScheduleTrace& trace);

/// First segment start to completion; nullopt if the task never completed.
std::optional<Ticks> task_span(const ScheduleTrace& trace, TaskId task);

std::string render_table(const AnalysisReport& report);
std::string render_table(const ComparisonReport& report);

} // namespace tasksim
