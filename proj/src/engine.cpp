#include "tasksim/engine.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_set>

namespace tasksim {

void SimConfig::check() const {
   if (thread_count == 0) throw ConfigError("thread_count must be positive");
   if (spawn_overhead < 0 || steal_overhead < 0) throw ConfigError("overheads must be non-negative");
   if (max_virtual_time <= 0) throw ConfigError("max_virtual_time must be positive");
   if (max_poll_retries_without_progress == 0) throw ConfigError("max_poll_retries_without_progress must be positive");
   if (max_undeferred_depth && *max_undeferred_depth == 0) throw ConfigError("max_undeferred_depth must be positive");
   (void)policy.normalized();
}

namespace {

using WaitKey = std::pair<TaskId, std::size_t>;

enum class TaskState { Pending, Queued, OnStack, Completed };
enum class Timed { None, Compute, Spin, Overhead };

struct TaskRt {
   TaskState state = TaskState::Pending;
   std::size_t pc = 0;
   std::optional<ThreadIndex> home;
   Priority priority = 0;
   bool undeferred = false;
   std::optional<TaskId> undeferred_parent;
   std::optional<TaskId> blocked_on;

   bool in_wait = false;
   WaitDecision wait_decision = WaitDecision::ExecuteOtherTasks;
   std::size_t wait_pending = 0;
   std::unordered_set<TaskId> wait_members;

   bool after_spin = false;

   std::optional<Priority> burst_priority;
   std::uint32_t victims_used = 0;

   Ticks completed_at = -1;
};

struct ThreadRt {
   std::vector<TaskId> stack;
   Timed timed = Timed::None;
   Ticks busy_until = 0;
   bool sleeping = false;
   /// Parked sleepers ignore epoch changes and wait for wake_time.
   bool parked = false;
   std::uint64_t sleep_epoch = 0;
   /// Epoch at which the thread last evaluated its own state.
   std::uint64_t observed_epoch = 0;
   std::optional<Ticks> wake_time;
   bool needs_pick = false;
   std::optional<YieldDecision> pending_yield;
   std::optional<WaitKey> reserved;
};

template <class... Ts>
struct Overloaded : Ts... {
   using Ts::operator()...;
};

class Simulator {
public:
   Simulator(const TaskGraph& graph, const SimConfig& cfg)
       : graph_(graph), cfg_(cfg), policy_(cfg.policy.normalized()), tasks_(graph.size()), watchers_(graph.size()),
         threads_(cfg.thread_count) {
      const bool fcfs = policy_.kind == PolicyKind::GlobalFCFS;
      queues_.resize(fcfs ? 1 : cfg.thread_count);
      for (const TaskSpec& t : graph.tasks) tasks_[t.id].priority = t.priority;
      compute_covering();
      trace_.thread_count = cfg.thread_count;
   }

   ScheduleTrace run() {
      place_roots();
      for (;;) {
         for (ThreadIndex th = 0; th < threads_.size(); ++th) {
            ThreadRt& t = threads_[th];
            if (t.timed != Timed::None && t.busy_until == now_) finish_timed(th);
         }
         settle();
         if (aborted_) break;
         if (completed_ == tasks_.size()) {
            trace_.outcome = Outcome::Completed;
            break;
         }
         check_work_conservation();
         std::optional<Ticks> next;
         for (const ThreadRt& t : threads_) {
            if (t.timed != Timed::None) next = next ? std::min(*next, t.busy_until) : t.busy_until;
            if (t.sleeping && t.wake_time) next = next ? std::min(*next, *t.wake_time) : *t.wake_time;
         }
         if (!next) {
            trace_.outcome = Outcome::StarvationDetected;
            break;
         }
         if (*next > cfg_.max_virtual_time) {
            now_ = cfg_.max_virtual_time;
            trace_.outcome = Outcome::TimeLimitExceeded;
            break;
         }
         now_ = *next;
      }
      if (trace_.outcome == Outcome::Completed) {
         Ticks last = first_start_.value_or(0);
         for (const TaskRt& r : tasks_) last = std::max(last, r.completed_at);
         trace_.makespan = last - first_start_.value_or(0);
      } else {
         trace_.makespan = now_ - first_start_.value_or(0);
      }
      return std::move(trace_);
   }

private:
   const TaskGraph& graph_;
   const SimConfig& cfg_;
   PolicyConfig policy_;
   std::vector<TaskRt> tasks_;
   std::vector<std::vector<TaskId>> watchers_;
   std::vector<std::optional<WaitKey>> covering_;
   std::vector<ThreadRt> threads_;
   std::vector<TaskQueue> queues_;
   ScheduleTrace trace_;

   Ticks now_ = 0;
   std::optional<Ticks> first_start_;
   std::uint64_t seq_ = 0;
   std::uint64_t epoch_ = 0;
   std::size_t completed_ = 0;
   bool aborted_ = false;

   std::unordered_set<std::string> signatures_;
   std::uint64_t retries_ = 0;

   bool fcfs() const { return policy_.kind == PolicyKind::GlobalFCFS; }
   std::size_t own_queue(ThreadIndex th) const { return fcfs() ? 0 : th; }

   void event(EventKind kind, TaskId task, ThreadIndex th) { trace_.events.push_back({now_, kind, task, th}); }

   void progress() {
      signatures_.clear();
      retries_ = 0;
   }

   // The first wait of the spawning task after the spawn covers the child.
   void compute_covering() {
      covering_.assign(graph_.size(), std::nullopt);
      for (const TaskSpec& t : graph_.tasks) {
         std::vector<TaskId> open;
         for (std::size_t i = 0; i < t.actions.size(); ++i) {
            const Action& a = t.actions[i];
            if (const auto* s = std::get_if<Spawn>(&a)) {
               open.push_back(s->child);
            } else if (std::holds_alternative<TaskwaitChildren>(a) || std::holds_alternative<TaskgroupEnd>(a)) {
               for (TaskId c : open) covering_[c] = WaitKey{t.id, i};
               open.clear();
            }
         }
      }
   }

   std::optional<WaitMode> wait_mode_at(const WaitKey& key) const {
      const Action& a = graph_.tasks[key.first].actions[key.second];
      if (const auto* w = std::get_if<TaskwaitChildren>(&a)) return w->mode;
      if (const auto* g = std::get_if<TaskgroupEnd>(&a)) return g->mode;
      return std::nullopt;
   }

   void push_entry(std::size_t q, TaskId task, Priority prio, bool at_head) {
      QueueEntry e{task, prio, seq_++};
      if (at_head) {
         queues_[q].push_front(e);
      } else {
         queues_[q].push_back(e);
      }
      tasks_[task].state = TaskState::Queued;
      tasks_[task].priority = prio;
      ++epoch_;
   }

   // Each owner's LIFO pop returns its roots in submission order.
   void place_roots() {
      std::vector<std::vector<TaskId>> per_queue(queues_.size());
      for (std::size_t i = 0; i < graph_.roots.size(); ++i) per_queue[i % queues_.size()].push_back(graph_.roots[i]);
      std::vector<std::uint64_t> root_seq(graph_.size(), 0);
      for (std::size_t i = 0; i < graph_.roots.size(); ++i) root_seq[graph_.roots[i]] = i;
      for (std::size_t q = 0; q < queues_.size(); ++q) {
         auto& roots = per_queue[q];
         if (!fcfs()) std::reverse(roots.begin(), roots.end());
         for (TaskId r : roots) {
            queues_[q].push_back({r, graph_.tasks[r].priority, root_seq[r]});
            tasks_[r].state = TaskState::Queued;
         }
      }
      seq_ = graph_.roots.size();
   }

   void start_on(ThreadIndex th, TaskId id) {
      TaskRt& r = tasks_[id];
      r.state = TaskState::OnStack;
      if (!r.home) {
         r.home = th;
         if (!first_start_) first_start_ = now_;
      }
      threads_[th].stack.push_back(id);
   }

   void make_timed(ThreadIndex th, Timed kind, Ticks duration) {
      threads_[th].timed = kind;
      threads_[th].busy_until = now_ + duration;
   }

   void sleep(ThreadIndex th, std::optional<Ticks> wake_time = std::nullopt, bool parked = false) {
      ThreadRt& t = threads_[th];
      t.sleeping = true;
      t.parked = parked;
      t.sleep_epoch = t.observed_epoch;
      t.wake_time = wake_time;
   }

   void finish_timed(ThreadIndex th) {
      ThreadRt& t = threads_[th];
      const Timed kind = t.timed;
      t.timed = Timed::None;
      if (kind == Timed::Compute) {
         ++tasks_[t.stack.back()].pc;
      } else if (kind == Timed::Spin) {
         tasks_[t.stack.back()].after_spin = true;
      }
   }

   void settle() {
      const std::size_t guard = 64 * (tasks_.size() + threads_.size()) + 100000;
      for (std::size_t pass = 0;; ++pass) {
         if (pass > guard) {
            abort(Outcome::StarvationDetected);
            return;
         }
         bool changed = false;
         for (ThreadIndex th = 0; th < threads_.size(); ++th) {
            changed |= advance(th);
            if (aborted_) return;
         }
         for (int group = 0; group < 2; ++group) {
            for (ThreadIndex th = 0; th < threads_.size(); ++th) {
               ThreadRt& t = threads_[th];
               if (!t.needs_pick || t.stack.empty() != (group == 0)) continue;
               changed |= pick(th);
            }
         }
         if (!changed) return;
      }
   }

   void abort(Outcome outcome) {
      aborted_ = true;
      trace_.outcome = outcome;
   }

   bool advance(ThreadIndex th) {
      ThreadRt& t = threads_[th];
      if (t.timed != Timed::None || t.needs_pick) return false;
      if (t.sleeping) {
         const bool wake = (!t.parked && epoch_ != t.sleep_epoch) || (t.wake_time && now_ >= *t.wake_time);
         if (!wake) return false;
         t.sleeping = false;
         t.parked = false;
         t.wake_time.reset();
      }
      t.observed_epoch = epoch_;
      bool changed = false;
      for (;;) {
         if (t.stack.empty()) {
            t.needs_pick = true;
            return changed;
         }
         const TaskId id = t.stack.back();
         TaskRt& r = tasks_[id];
         if (r.blocked_on) {
            t.needs_pick = true;
            return changed;
         }
         if (r.in_wait) {
            if (r.wait_pending == 0) {
               exit_wait(th, id);
               changed = true;
               continue;
            }
            t.needs_pick = true;
            return changed;
         }
         if (r.after_spin) {
            r.after_spin = false;
            handle_yield(th, id);
            return true;
         }
         const auto& actions = graph_.tasks[id].actions;
         if (r.pc == actions.size()) {
            complete(th, id);
            changed = true;
            continue;
         }
         const Action& action = actions[r.pc];
         bool stop = false;
         std::visit(Overloaded{
                       [&](const Compute& c) {
                          trace_.segments.push_back({th, id, now_, now_ + c.duration,
                                                     r.undeferred ? SegmentKind::UndeferredNested : SegmentKind::Compute});
                          make_timed(th, Timed::Compute, c.duration);
                          progress();
                          stop = true;
                       },
                       [&](const Spawn& s) { stop = spawn(th, id, s); },
                       [&](const PollOutcome& p) {
                          if (tasks_[p.target].state == TaskState::Completed) {
                             ++r.pc;
                             return;
                          }
                          stop = true;
                          if (!poll_failed(th, id)) return;
                          if (p.poll_cost > 0) {
                             trace_.segments.push_back({th, id, now_, now_ + p.poll_cost, SegmentKind::PollSpin});
                             make_timed(th, Timed::Spin, p.poll_cost);
                          } else {
                             handle_yield(th, id);
                          }
                       },
                       [&](const TaskwaitChildren& w) { enter_wait(th, id, w.mode); },
                       [&](const TaskgroupEnd& w) { enter_wait(th, id, w.mode); },
                    },
                    action);
         changed = true;
         if (stop || aborted_) return changed;
      }
   }

   bool spawn(ThreadIndex th, TaskId id, const Spawn& s) {
      TaskRt& r = tasks_[id];
      const TaskSpec& child = graph_.tasks[s.child];
      std::vector<std::size_t> lengths(queues_.size());
      for (std::size_t q = 0; q < queues_.size(); ++q) lengths[q] = queues_[q].size();
      SpawnContext ctx;
      ctx.queue_lengths = lengths;
      if (policy_.kind == PolicyKind::Extended && policy_.priority_aware && child.label == kLabelLoopChunk) {
         for (const TaskQueue& q : queues_) {
            for (const QueueEntry& e : q) {
               ctx.max_queued_priority = ctx.max_queued_priority ? std::max(*ctx.max_queued_priority, e.priority) : e.priority;
            }
         }
      }
      ctx.loop_burst_priority = r.burst_priority;
      ctx.loop_victims_used = r.victims_used;
      const SpawnDecision d = on_spawn(policy_, fcfs() ? 0 : th, child, s.defer, ctx);
      event(EventKind::Spawned, s.child, th);
      ++r.pc;
      if (d.loop_burst) {
         r.burst_priority = d.priority;
         if (d.kind == SpawnDecision::Kind::ScatterTo) {
            const auto n = static_cast<ThreadIndex>(threads_.size());
            r.victims_used = (d.target + n - th - 1) % n + 1;
         }
      }
      const Priority prio = d.priority.value_or(child.priority);
      switch (d.kind) {
         case SpawnDecision::Kind::EnqueueLocal: push_entry(own_queue(th), s.child, prio, false); break;
         case SpawnDecision::Kind::ScatterTo:
            event(EventKind::Scattered, s.child, d.target);
            push_entry(d.target, s.child, prio, !d.loop_burst);
            break;
         case SpawnDecision::Kind::ExecuteUndeferred: {
            if (d.throttled) event(EventKind::Throttled, s.child, th);
            TaskRt& c = tasks_[s.child];
            c.undeferred = true;
            c.undeferred_parent = id;
            r.blocked_on = s.child;
            start_on(th, s.child);
            if (cfg_.max_undeferred_depth) {
               std::size_t depth = 0;
               for (TaskId f : threads_[th].stack) depth += tasks_[f].undeferred ? 1 : 0;
               if (depth > *cfg_.max_undeferred_depth) {
                  throw Error("undeferred nesting depth " + std::to_string(depth) + " exceeds the configured cap");
               }
            }
            break;
         }
      }
      if (cfg_.spawn_overhead > 0) {
         make_timed(th, Timed::Overhead, cfg_.spawn_overhead);
         return true;
      }
      return false;
   }

   void enter_wait(ThreadIndex th, TaskId id, WaitMode mode) {
      TaskRt& r = tasks_[id];
      r.burst_priority.reset();
      r.victims_used = 0;
      event(EventKind::WaitEntered, id, th);
      r.wait_pending = 0;
      r.wait_members.clear();
      r.wait_decision = on_wait(policy_, mode);
      for (TaskId m : synchronization_set(graph_, id, r.pc)) {
         if (tasks_[m].state == TaskState::Completed) continue;
         ++r.wait_pending;
         watchers_[m].push_back(id);
         if (r.wait_decision == WaitDecision::IdleUntilComplete) r.wait_members.insert(m);
      }
      r.in_wait = true;
   }

   void exit_wait(ThreadIndex th, TaskId id) {
      TaskRt& r = tasks_[id];
      r.in_wait = false;
      r.wait_members.clear();
      event(EventKind::WaitExited, id, th);
      const WaitKey key{id, r.pc};
      ++r.pc;
      for (ThreadRt& t : threads_) {
         if (t.reserved == key) t.reserved.reset();
      }
      ++epoch_;
   }

   void complete(ThreadIndex th, TaskId id) {
      TaskRt& r = tasks_[id];
      r.state = TaskState::Completed;
      r.completed_at = now_;
      event(EventKind::Completed, id, th);
      ++completed_;
      ++epoch_;
      progress();
      for (TaskId w : watchers_[id]) --tasks_[w].wait_pending;
      watchers_[id].clear();
      ThreadRt& t = threads_[th];
      t.stack.pop_back();
      if (r.undeferred_parent && tasks_[*r.undeferred_parent].blocked_on == id) tasks_[*r.undeferred_parent].blocked_on.reset();
      // A latency wait keeps the threads that served it until the waiter resumes.
      if (t.stack.empty() && covering_[id]) {
         const WaitKey key = *covering_[id];
         const auto mode = wait_mode_at(key);
         if (mode && on_wait(policy_, *mode) == WaitDecision::IdleUntilComplete && tasks_[key.first].pc <= key.second &&
             tasks_[key.first].state != TaskState::Completed) {
            t.reserved = key;
         }
      }
   }

   void handle_yield(ThreadIndex th, TaskId id) {
      const auto& poll = std::get<PollOutcome>(graph_.tasks[id].actions[tasks_[id].pc]);
      const YieldDecision d = on_yield(policy_, tasks_[id].priority, poll.yield_mode, queues_[own_queue(th)]);
      event(EventKind::Yielded, id, th);
      if (d.kind == YieldDecision::Kind::ResumeImmediately) {
         sleep(th);
         return;
      }
      threads_[th].pending_yield = d;
      threads_[th].needs_pick = true;
   }

   bool poll_ready(TaskId id) const {
      const auto& actions = graph_.tasks[id].actions;
      const auto pc = tasks_[id].pc;
      if (pc >= actions.size()) return true;
      const auto* poll = std::get_if<PollOutcome>(&actions[pc]);
      return !poll || tasks_[poll->target].state == TaskState::Completed;
   }

   // Returns false when the poller was parked instead of spinning.
   bool poll_failed(ThreadIndex th, TaskId id) {
      std::optional<Ticks> next_real, next_any;
      for (const ThreadRt& t : threads_) {
         if (t.timed == Timed::None) continue;
         next_any = next_any ? std::min(*next_any, t.busy_until) : t.busy_until;
         if (t.timed == Timed::Compute || t.timed == Timed::Overhead) {
            next_real = next_real ? std::min(*next_real, t.busy_until) : t.busy_until;
         }
      }
      if (!next_real && ++retries_ > cfg_.max_poll_retries_without_progress) {
         abort(Outcome::StarvationDetected);
         return false;
      }
      if (!signatures_.insert(signature(th, id)).second) {
         if (!next_real) {
            abort(Outcome::StarvationDetected);
            return false;
         }
         // Zero-time churn: park until real work advances the clock.
         signatures_.clear();
         sleep(th, next_any, true);
         return false;
      }
      return true;
   }

   std::string signature(ThreadIndex th, TaskId id) const {
      // Priorities only matter relative to each other, so they are stored as dense ranks.
      std::vector<Priority> prios;
      for (const ThreadRt& t : threads_) {
         for (TaskId f : t.stack) {
            prios.push_back(tasks_[f].priority);
            if (tasks_[f].burst_priority) prios.push_back(*tasks_[f].burst_priority);
         }
      }
      for (const TaskQueue& q : queues_) {
         for (const QueueEntry& e : q) prios.push_back(e.priority);
      }
      std::sort(prios.begin(), prios.end());
      prios.erase(std::unique(prios.begin(), prios.end()), prios.end());
      const auto rank_of = [&](Priority p) -> std::int64_t { return std::lower_bound(prios.begin(), prios.end(), p) - prios.begin(); };

      std::vector<std::int64_t> v{th, id};
      for (const ThreadRt& t : threads_) {
         v.push_back(-7);
         v.push_back(static_cast<std::int64_t>(t.timed));
         v.push_back(t.timed == Timed::None ? 0 : t.busy_until - now_);
         v.push_back(t.sleeping ? (t.parked ? 3 : epoch_ != t.sleep_epoch ? 2 : 1) : 0);
         v.push_back(t.wake_time ? *t.wake_time - now_ : -1);
         v.push_back(t.needs_pick);
         v.push_back(t.pending_yield ? static_cast<std::int64_t>(t.pending_yield->kind) : -1);
         v.push_back(t.reserved ? t.reserved->first : -1);
         v.push_back(t.reserved ? static_cast<std::int64_t>(t.reserved->second) : -1);
         for (TaskId f : t.stack) {
            const TaskRt& r = tasks_[f];
            v.insert(v.end(), {f, static_cast<std::int64_t>(r.pc), r.in_wait, static_cast<std::int64_t>(r.wait_pending), r.after_spin,
                               r.blocked_on ? *r.blocked_on : -1, r.burst_priority ? rank_of(*r.burst_priority) : -1, r.victims_used,
                               rank_of(r.priority)});
         }
      }
      std::vector<std::uint64_t> seqs;
      for (const TaskQueue& q : queues_) {
         for (const QueueEntry& e : q) seqs.push_back(e.seq);
      }
      std::sort(seqs.begin(), seqs.end());
      for (const TaskQueue& q : queues_) {
         v.push_back(-9);
         for (const QueueEntry& e : q) {
            const auto rank = std::lower_bound(seqs.begin(), seqs.end(), e.seq) - seqs.begin();
            v.insert(v.end(), {e.task, rank_of(e.priority), rank});
         }
      }
      std::string out(v.size() * sizeof(std::int64_t), '\0');
      std::memcpy(out.data(), v.data(), out.size());
      return out;
   }

   PickFilter filter_for(ThreadIndex th) const {
      const ThreadRt& t = threads_[th];
      const std::unordered_set<TaskId>* members = nullptr;
      if (!t.stack.empty()) {
         const TaskRt& top = tasks_[t.stack.back()];
         if (top.in_wait && top.wait_decision == WaitDecision::IdleUntilComplete) members = &top.wait_members;
      }
      const std::optional<WaitKey> reserved = t.reserved;
      return [this, th, members, reserved](const QueueEntry& e, std::size_t) {
         const TaskRt& r = tasks_[e.task];
         if (graph_.tasks[e.task].tied && r.home && *r.home != th) return false;
         if (members) return members->count(e.task) > 0;
         if (reserved) return covering_[e.task] == reserved;
         return true;
      };
   }

   bool pick(ThreadIndex th) {
      ThreadRt& t = threads_[th];
      t.needs_pick = false;
      const auto choice = on_idle(policy_, th, queues_, filter_for(th));
      if (!choice) {
         // A failed yield keeps the poller on the thread until something changes.
         const bool yielding = t.pending_yield.has_value();
         t.pending_yield.reset();
         if (yielding && poll_ready(t.stack.back())) return true;
         sleep(th);
         return false;
      }
      TaskQueue& q = queues_[choice->queue];
      const QueueEntry entry = q[choice->position];
      q.erase(q.begin() + static_cast<std::ptrdiff_t>(choice->position));
      if (t.pending_yield) {
         const YieldDecision d = *t.pending_yield;
         t.pending_yield.reset();
         const TaskId yielded = t.stack.back();
         t.stack.pop_back();
         // Deque owners pop the tail; the FCFS queue is served from the head.
         const bool front = d.kind == YieldDecision::Kind::RequeueFront;
         const Priority prio = front ? tasks_[yielded].priority : d.priority;
         push_entry(own_queue(th), yielded, prio, front == fcfs());
      }
      const bool stolen = !fcfs() && choice->queue != th;
      if (stolen) event(EventKind::Stolen, entry.task, th);
      start_on(th, entry.task);
      if (stolen && cfg_.steal_overhead > 0) make_timed(th, Timed::Overhead, cfg_.steal_overhead);
      return true;
   }

   void check_work_conservation() {
      for (ThreadIndex th = 0; th < threads_.size(); ++th) {
         const ThreadRt& t = threads_[th];
         if (t.timed != Timed::None || t.reserved) continue;
         if (!t.stack.empty()) {
            const TaskRt& top = tasks_[t.stack.back()];
            const bool idle_wait = top.in_wait && top.wait_decision == WaitDecision::ExecuteOtherTasks;
            if (!idle_wait && !top.blocked_on) continue;
         }
         if (on_idle(policy_, th, queues_, filter_for(th))) ++trace_.idle_with_ready_work;
      }
   }
};

} // namespace

ScheduleTrace simulate(const TaskGraph& graph, const SimConfig& cfg) {
   require_valid(graph);
   cfg.check();
   return Simulator(graph, cfg).run();
}

std::vector<ScheduleTrace> simulate_batch(const TaskGraph& graph, const std::vector<SimConfig>& cfgs) {
   std::vector<ScheduleTrace> out;
   out.reserve(cfgs.size());
   for (std::size_t i = 0; i < cfgs.size(); ++i) {
      try {
         out.push_back(simulate(graph, cfgs[i]));
      } catch (const ConfigError& e) {
         throw ConfigError("run " + std::to_string(i) + ": " + e.what());
      } catch (const InvalidGraph& e) {
         throw InvalidGraph("run " + std::to_string(i) + ": " + e.what());
      } catch (const Error& e) {
         throw Error("run " + std::to_string(i) + ": " + e.what());
      }
   }
   return out;
}

std::string to_string(SegmentKind kind) {
   switch (kind) {
      case SegmentKind::Compute: return "compute";
      case SegmentKind::PollSpin: return "poll_spin";
      case SegmentKind::UndeferredNested: return "undeferred_nested";
   }
   return "?";
}

std::string to_string(EventKind kind) {
   switch (kind) {
      case EventKind::Spawned: return "spawned";
      case EventKind::Stolen: return "stolen";
      case EventKind::Scattered: return "scattered";
      case EventKind::Throttled: return "throttled";
      case EventKind::Yielded: return "yielded";
      case EventKind::WaitEntered: return "wait_entered";
      case EventKind::WaitExited: return "wait_exited";
      case EventKind::Completed: return "completed";
   }
   return "?";
}

std::string to_string(Outcome outcome) {
   switch (outcome) {
      case Outcome::Completed: return "completed";
      case Outcome::StarvationDetected: return "starvation_detected";
      case Outcome::TimeLimitExceeded: return "time_limit_exceeded";
   }
   return "?";
}

} // namespace tasksim
