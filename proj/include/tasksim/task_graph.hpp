#pragma once

#include "tasksim/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tasksim {

// Labels the generators emit and the engine/analysis recognise.
inline constexpr const char* kLabelTraversal = "traversal";
inline constexpr const char* kLabelEnclave = "enclave";
inline constexpr const char* kLabelConsumer = "consumer";
inline constexpr const char* kLabelLoopChunk = "loop-chunk";
inline constexpr const char* kLabelBackground = "background";
inline constexpr const char* kLabelDriver = "driver";
inline constexpr const char* kLabelGroup1Traversal = "traversal/1";
inline constexpr const char* kLabelGroup2Traversal = "traversal/2";

enum class DeferMode { RuntimeChoice, MustDefer, Undeferred };
enum class YieldMode { Default, Latency, Throughput };
enum class WaitMode { Throughput, Latency };

struct Compute {
   Ticks duration = 0;
   bool operator==(const Compute&) const = default;
};

struct Spawn {
   TaskId child = 0;
   DeferMode defer = DeferMode::RuntimeChoice;
   bool operator==(const Spawn&) const = default;
};

/// Busy-wait on another task's completion, yielding between failed checks.
struct PollOutcome {
   TaskId target = 0;
   YieldMode yield_mode = YieldMode::Default;
   Ticks poll_cost = 0;
   bool operator==(const PollOutcome&) const = default;
};

/// Waits for the direct children spawned so far.
struct TaskwaitChildren {
   WaitMode mode = WaitMode::Throughput;
   bool operator==(const TaskwaitChildren&) const = default;
};

/// Waits for every descendant spawned since the previous TaskgroupEnd of the same task.
struct TaskgroupEnd {
   WaitMode mode = WaitMode::Throughput;
   bool operator==(const TaskgroupEnd&) const = default;
};

using Action = std::variant<Compute, Spawn, PollOutcome, TaskwaitChildren, TaskgroupEnd>;

struct TaskSpec {
   TaskId id = 0;
   Priority priority = 0;
   bool tied = true;
   std::vector<Action> actions;
   std::string label;
   bool operator==(const TaskSpec&) const = default;
};

struct TaskGraph {
   std::vector<TaskSpec> tasks;
   /// Initial pool, in submission order.
   std::vector<TaskId> roots;
   /// Free-form provenance (generator name, parameters, ...). Not interpreted.
   std::map<std::string, std::string> meta;

   const TaskSpec& task(TaskId id) const { return tasks.at(id); }
   std::size_t size() const { return tasks.size(); }
   bool operator==(const TaskGraph&) const = default;
};

struct Violation {
   enum class Kind {
      NonDenseId,
      UnknownTask,
      NonPositiveDuration,
      NegativePollCost,
      DuplicateSpawn,
      SelfSpawn,
      SpawnCycle,
      RootSpawned,
      DuplicateRoot,
      Unreachable,
      UnknownPollTarget,
   };
   Kind kind;
   TaskId task;
   std::string message;
   bool operator==(const Violation& o) const { return kind == o.kind && task == o.task; }
};

std::string to_string(Violation::Kind kind);

/// Structural check; an empty result means the graph satisfies every invariant.
std::vector<Violation> validate(const TaskGraph& graph);

/// Throws InvalidGraph carrying the first violations if the graph is not valid.
void require_valid(const TaskGraph& graph);

/// Sum of all Compute durations. Poll costs are excluded.
Ticks total_work(const TaskGraph& graph);

Ticks compute_work(const TaskSpec& task);

struct CriticalPath {
   Ticks length = 0;
   /// Tasks whose Compute actions lie on the path, consecutive repeats collapsed.
   std::vector<TaskId> path;
};

/// Longest dependency-respecting chain of Compute work. Ties go to the
/// lexicographically smallest task sequence. Throws CyclicDependency.
CriticalPath critical_path(const TaskGraph& graph);

/// Parent in the spawn forest; nullopt for roots.
std::vector<std::optional<TaskId>> spawn_parents(const TaskGraph& graph);

/// Tasks a wait action at `action_index` of `waiter` must see completed.
/// Returns an empty set when the action is not a wait.
std::vector<TaskId> synchronization_set(const TaskGraph& graph, TaskId waiter, std::size_t action_index);

} // namespace tasksim
