#include "tasksim/policy.hpp"

#include <algorithm>

namespace tasksim {

PolicyConfig PolicyConfig::reference(std::optional<std::size_t> bound) {
   PolicyConfig cfg;
   cfg.kind = PolicyKind::ReferenceDeque;
   cfg.queue_bound = bound;
   return cfg;
}

PolicyConfig PolicyConfig::fcfs() {
   PolicyConfig cfg;
   cfg.kind = PolicyKind::GlobalFCFS;
   cfg.queue_bound = std::nullopt;
   return cfg;
}

PolicyConfig PolicyConfig::extended(std::optional<std::size_t> bound) {
   PolicyConfig cfg;
   cfg.kind = PolicyKind::Extended;
   cfg.queue_bound = bound;
   cfg.honor_defer = true;
   cfg.priority_aware = true;
   cfg.scatter_on_overflow = true;
   cfg.fair_yield = true;
   cfg.honor_latency_wait = true;
   return cfg;
}

PolicyConfig PolicyConfig::normalized() const {
   if (queue_bound && *queue_bound == 0) throw ConfigError("queue_bound must be positive");
   PolicyConfig cfg = *this;
   switch (kind) {
      case PolicyKind::ReferenceDeque:
         cfg.honor_defer = false;
         cfg.priority_aware = false;
         cfg.scatter_on_overflow = false;
         cfg.fair_yield = false;
         cfg.honor_latency_wait = false;
         break;
      case PolicyKind::GlobalFCFS:
         cfg.queue_bound = std::nullopt;
         cfg.priority_aware = false;
         cfg.scatter_on_overflow = false;
         break;
      case PolicyKind::Extended:
         break;
   }
   return cfg;
}

namespace {

bool has_space(const PolicyConfig& cfg, std::size_t length) {
   return !cfg.queue_bound || length < *cfg.queue_bound;
}

SpawnDecision enqueue_local(std::optional<Priority> priority = std::nullopt) {
   return {SpawnDecision::Kind::EnqueueLocal, 0, priority, false, false};
}

SpawnDecision undeferred(bool throttled) {
   return {SpawnDecision::Kind::ExecuteUndeferred, 0, std::nullopt, throttled, false};
}

} // namespace

SpawnDecision on_spawn(const PolicyConfig& cfg, ThreadIndex spawner, const TaskSpec& task, DeferMode defer,
                       const SpawnContext& ctx) {
   if (defer == DeferMode::Undeferred) return undeferred(false);
   if (cfg.kind == PolicyKind::GlobalFCFS) return enqueue_local();

   const std::size_t threads = ctx.queue_lengths.size();
   const bool local_space = has_space(cfg, ctx.queue_lengths[spawner]);

   // Loop chunks invade the other threads with a priority above everything queued.
   if (cfg.kind == PolicyKind::Extended && cfg.priority_aware && task.label == kLabelLoopChunk) {
      const Priority prio = ctx.loop_burst_priority
                               ? *ctx.loop_burst_priority
                               : std::max(ctx.max_queued_priority.value_or(task.priority), task.priority) + 1;
      for (std::size_t i = ctx.loop_victims_used; i + 1 < threads; ++i) {
         const auto victim = static_cast<ThreadIndex>((spawner + 1 + i) % threads);
         if (has_space(cfg, ctx.queue_lengths[victim])) {
            return {SpawnDecision::Kind::ScatterTo, victim, prio, false, true};
         }
      }
      if (local_space) {
         SpawnDecision d = enqueue_local(prio);
         d.loop_burst = true;
         return d;
      }
      return undeferred(true);
   }

   if (local_space) return enqueue_local();

   const bool must_defer = cfg.kind == PolicyKind::Extended && cfg.honor_defer && defer == DeferMode::MustDefer;
   if (!must_defer) return undeferred(true);
   if (!cfg.scatter_on_overflow) return enqueue_local(); // the local deque grows on demand
   for (std::size_t i = 1; i < threads; ++i) {
      const auto victim = static_cast<ThreadIndex>((spawner + i) % threads);
      if (has_space(cfg, ctx.queue_lengths[victim])) {
         return {SpawnDecision::Kind::ScatterTo, victim, cfg.scattered_priority, false, false};
      }
   }
   return undeferred(true);
}

std::optional<Pick> on_idle(const PolicyConfig& cfg, ThreadIndex thread, std::span<const TaskQueue> queues,
                            const PickFilter& eligible) {
   auto ok = [&](const QueueEntry& e, std::size_t q) { return !eligible || eligible(e, q); };
   if (queues.empty()) return std::nullopt;

   if (cfg.kind == PolicyKind::GlobalFCFS) {
      const TaskQueue& q = queues[0];
      for (std::size_t i = 0; i < q.size(); ++i) {
         if (ok(q[i], 0)) return Pick{0, i};
      }
      return std::nullopt;
   }

   const std::size_t n = queues.size();
   if (cfg.kind == PolicyKind::Extended && cfg.priority_aware) {
      std::optional<Pick> best;
      const QueueEntry* best_entry = nullptr;
      for (std::size_t r = 0; r < n; ++r) {
         const std::size_t qi = (thread + r) % n;
         const TaskQueue& q = queues[qi];
         for (std::size_t i = 0; i < q.size(); ++i) {
            const QueueEntry& e = q[i];
            if (!ok(e, qi)) continue;
            bool take = !best_entry || e.priority > best_entry->priority;
            if (!take && best_entry && e.priority == best_entry->priority && best->queue == qi) {
               take = e.seq < best_entry->seq || (e.seq == best_entry->seq && e.task < best_entry->task);
            }
            if (take) {
               best = Pick{qi, i};
               best_entry = &e;
            }
         }
      }
      return best;
   }

   // LIFO on the own deque, FIFO steal from victims in round-robin order.
   const TaskQueue& own = queues[thread % n];
   for (std::size_t i = own.size(); i-- > 0;) {
      if (ok(own[i], thread % n)) return Pick{thread % n, i};
   }
   for (std::size_t r = 1; r < n; ++r) {
      const std::size_t qi = (thread + r) % n;
      const TaskQueue& q = queues[qi];
      for (std::size_t i = 0; i < q.size(); ++i) {
         if (ok(q[i], qi)) return Pick{qi, i};
      }
   }
   return std::nullopt;
}

YieldDecision on_yield(const PolicyConfig& cfg, Priority task_priority, YieldMode mode, const TaskQueue& local) {
   using K = YieldDecision::Kind;
   auto fair = [&] {
      if (local.empty()) return YieldDecision{K::RequeueBack, task_priority};
      Priority lowest = local.front().priority;
      for (const QueueEntry& e : local) lowest = std::min(lowest, e.priority);
      return YieldDecision{K::RequeueBack, lowest == kMinPriority ? kMinPriority : lowest - 1};
   };
   switch (cfg.kind) {
      case PolicyKind::ReferenceDeque: return {K::RequeueFront, task_priority};
      case PolicyKind::GlobalFCFS: return {K::RequeueBack, task_priority};
      case PolicyKind::Extended:
         switch (mode) {
            case YieldMode::Latency: return {K::ResumeImmediately, task_priority};
            case YieldMode::Throughput: return cfg.fair_yield ? fair() : YieldDecision{K::RequeueBack, task_priority};
            case YieldMode::Default: return cfg.fair_yield ? fair() : YieldDecision{K::RequeueFront, task_priority};
         }
   }
   return {K::RequeueFront, task_priority};
}

WaitDecision on_wait(const PolicyConfig& cfg, WaitMode mode) {
   if (mode == WaitMode::Latency && cfg.honor_latency_wait) return WaitDecision::IdleUntilComplete;
   return WaitDecision::ExecuteOtherTasks;
}

std::string to_string(PolicyKind kind) {
   switch (kind) {
      case PolicyKind::ReferenceDeque: return "reference";
      case PolicyKind::GlobalFCFS: return "fcfs";
      case PolicyKind::Extended: return "extended";
   }
   return "?";
}

std::string to_string(SpawnDecision::Kind kind) {
   switch (kind) {
      case SpawnDecision::Kind::EnqueueLocal: return "EnqueueLocal";
      case SpawnDecision::Kind::ScatterTo: return "ScatterTo";
      case SpawnDecision::Kind::ExecuteUndeferred: return "ExecuteUndeferred";
   }
   return "?";
}

std::string to_string(YieldDecision::Kind kind) {
   switch (kind) {
      case YieldDecision::Kind::ResumeImmediately: return "ResumeImmediately";
      case YieldDecision::Kind::RequeueBack: return "RequeueBack";
      case YieldDecision::Kind::RequeueFront: return "RequeueFront";
   }
   return "?";
}

} // namespace tasksim
