#pragma once

#include "tasksim/policy.hpp"
#include "tasksim/task_graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tasksim {

struct SimConfig {
   std::uint32_t thread_count = 4;
   PolicyConfig policy;
   Ticks spawn_overhead = 0;
   Ticks steal_overhead = 0;
   /// Livelock guard on the virtual clock.
   Ticks max_virtual_time = Ticks{1} << 50;
   /// Failed poll checks tolerated between two progress events.
   std::uint64_t max_poll_retries_without_progress = 100000;
   /// Diagnostics cap on undeferred nesting; nullopt is unbounded.
   std::optional<std::size_t> max_undeferred_depth;

   /// Throws ConfigError.
   void check() const;
};

enum class SegmentKind { Compute, PollSpin, UndeferredNested };

struct Segment {
   ThreadIndex thread = 0;
   TaskId task = 0;
   Ticks start = 0;
   Ticks end = 0;
   SegmentKind kind = SegmentKind::Compute;
   bool operator==(const Segment&) const = default;
};

enum class EventKind { Spawned, Stolen, Scattered, Throttled, Yielded, WaitEntered, WaitExited, Completed };

struct TraceEvent {
   Ticks time = 0;
   EventKind kind = EventKind::Spawned;
   TaskId task = 0;
   ThreadIndex thread = 0;
   bool operator==(const TraceEvent&) const = default;
};

enum class Outcome { Completed, StarvationDetected, TimeLimitExceeded };

struct ScheduleTrace {
   std::uint32_t thread_count = 0;
   std::vector<Segment> segments;
   std::vector<TraceEvent> events;
   Ticks makespan = 0;
   Outcome outcome = Outcome::Completed;
   /// Settled instants at which a thread without latency restrictions sat idle
   /// while its policy could have handed it a task. Zero for a correct engine.
   std::uint64_t idle_with_ready_work = 0;

   bool operator==(const ScheduleTrace&) const = default;
};

/// Deterministic discrete-event replay of `graph` under `cfg`.
/// Throws InvalidGraph or ConfigError.
ScheduleTrace simulate(const TaskGraph& graph, const SimConfig& cfg);

/// One simulate() per config, in order. A failing run is rethrown with its index.
std::vector<ScheduleTrace> simulate_batch(const TaskGraph& graph, const std::vector<SimConfig>& cfgs);

std::string to_string(SegmentKind kind);
std::string to_string(EventKind kind);
std::string to_string(Outcome outcome);

} // namespace tasksim
