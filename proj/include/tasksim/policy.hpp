#pragma once

#include "tasksim/task_graph.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>

namespace tasksim {

enum class PolicyKind { ReferenceDeque, GlobalFCFS, Extended };

/// Scheduling decision procedure configuration. Victim order is always
/// round-robin starting at thief+1.
struct PolicyConfig {
   PolicyKind kind = PolicyKind::ReferenceDeque;
   /// nullopt means unbounded.
   std::optional<std::size_t> queue_bound = 256;
   bool honor_defer = false;
   bool priority_aware = false;
   bool scatter_on_overflow = false;
   Priority scattered_priority = kMinPriority;
   bool fair_yield = false;
   bool honor_latency_wait = false;

   static PolicyConfig reference(std::optional<std::size_t> bound = 256);
   static PolicyConfig fcfs();
   /// All extensions on.
   static PolicyConfig extended(std::optional<std::size_t> bound = 256);

   /// Applies the per-kind forced settings (reference ignores every extension,
   /// FCFS has an unbounded queue). Throws ConfigError for a zero bound.
   PolicyConfig normalized() const;

   bool operator==(const PolicyConfig&) const = default;
};

struct QueueEntry {
   TaskId task = 0;
   Priority priority = 0;
   /// Enqueue order; lower is older.
   std::uint64_t seq = 0;
   bool operator==(const QueueEntry&) const = default;
};

using TaskQueue = std::deque<QueueEntry>;

struct SpawnContext {
   /// One entry per engine queue (a single entry under GlobalFCFS).
   std::span<const std::size_t> queue_lengths;
   /// Highest priority currently queued anywhere.
   std::optional<Priority> max_queued_priority;
   /// Priority fixed for the spawner's current loop-chunk burst, if one is running.
   std::optional<Priority> loop_burst_priority;
   /// Victims already served in the current burst.
   std::uint32_t loop_victims_used = 0;
};

struct SpawnDecision {
   enum class Kind { EnqueueLocal, ScatterTo, ExecuteUndeferred };
   Kind kind = Kind::EnqueueLocal;
   ThreadIndex target = 0;
   /// Priority override for the queued entry.
   std::optional<Priority> priority;
   /// Undeferred because of the queue bound rather than the task's own defer mode.
   bool throttled = false;
   /// Set when the decision belongs to a loop-chunk burst.
   bool loop_burst = false;

   bool operator==(const SpawnDecision&) const = default;
};

SpawnDecision on_spawn(const PolicyConfig& cfg, ThreadIndex spawning_thread, const TaskSpec& task, DeferMode defer,
                       const SpawnContext& ctx);

struct Pick {
   std::size_t queue = 0;
   std::size_t position = 0;
   bool operator==(const Pick&) const = default;
};

/// Filter the engine applies for tied residency and latency reservations.
using PickFilter = std::function<bool(const QueueEntry&, std::size_t queue)>;

std::optional<Pick> on_idle(const PolicyConfig& cfg, ThreadIndex thread, std::span<const TaskQueue> queues,
                            const PickFilter& eligible = {});

struct YieldDecision {
   enum class Kind { ResumeImmediately, RequeueBack, RequeueFront };
   Kind kind = Kind::RequeueFront;
   Priority priority = 0;
   bool operator==(const YieldDecision&) const = default;
};

YieldDecision on_yield(const PolicyConfig& cfg, Priority task_priority, YieldMode mode, const TaskQueue& local_queue);

enum class WaitDecision { ExecuteOtherTasks, IdleUntilComplete };

WaitDecision on_wait(const PolicyConfig& cfg, WaitMode mode);

std::string to_string(PolicyKind kind);
std::string to_string(SpawnDecision::Kind kind);
std::string to_string(YieldDecision::Kind kind);

} // namespace tasksim
