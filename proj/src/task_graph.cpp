#include "tasksim/task_graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace tasksim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
   using Ts::operator()...;
};

Violation make_violation(Violation::Kind kind, TaskId task, const std::string& detail) {
   std::ostringstream out;
   out << to_string(kind) << "(" << task << ")";
   if (!detail.empty()) out << ": " << detail;
   return {kind, task, out.str()};
}

} // namespace

std::string to_string(Violation::Kind kind) {
   switch (kind) {
      case Violation::Kind::NonDenseId: return "NonDenseId";
      case Violation::Kind::UnknownTask: return "UnknownTask";
      case Violation::Kind::NonPositiveDuration: return "NonPositiveDuration";
      case Violation::Kind::NegativePollCost: return "NegativePollCost";
      case Violation::Kind::DuplicateSpawn: return "DuplicateSpawn";
      case Violation::Kind::SelfSpawn: return "SelfSpawn";
      case Violation::Kind::SpawnCycle: return "SpawnCycle";
      case Violation::Kind::RootSpawned: return "RootSpawned";
      case Violation::Kind::DuplicateRoot: return "DuplicateRoot";
      case Violation::Kind::Unreachable: return "Unreachable";
      case Violation::Kind::UnknownPollTarget: return "UnknownPollTarget";
   }
   return "Unknown";
}

std::vector<Violation> validate(const TaskGraph& graph) {
   std::vector<Violation> out;
   const auto n = graph.tasks.size();
   auto known = [n](TaskId id) { return id < n; };

   std::vector<bool> is_root(n, false);
   for (TaskId r : graph.roots) {
      if (!known(r)) {
         out.push_back(make_violation(Violation::Kind::UnknownTask, r, "root does not exist"));
         continue;
      }
      if (is_root[r]) out.push_back(make_violation(Violation::Kind::DuplicateRoot, r, ""));
      is_root[r] = true;
   }

   std::vector<std::optional<TaskId>> parent(n);
   std::vector<bool> duplicate_reported(n, false);
   for (std::size_t i = 0; i < n; ++i) {
      const TaskSpec& t = graph.tasks[i];
      if (t.id != i) {
         out.push_back(make_violation(Violation::Kind::NonDenseId, t.id, "stored at index " + std::to_string(i)));
      }
      const auto self = static_cast<TaskId>(i);
      for (const Action& a : t.actions) {
         std::visit(Overloaded{
                       [&](const Compute& c) {
                          if (c.duration <= 0) out.push_back(make_violation(Violation::Kind::NonPositiveDuration, self, ""));
                       },
                       [&](const Spawn& s) {
                          if (!known(s.child)) {
                             out.push_back(make_violation(Violation::Kind::UnknownTask, self, "spawns missing task " + std::to_string(s.child)));
                          } else if (s.child == self) {
                             out.push_back(make_violation(Violation::Kind::SelfSpawn, self, ""));
                          } else if (parent[s.child]) {
                             if (!duplicate_reported[s.child]) {
                                out.push_back(make_violation(Violation::Kind::DuplicateSpawn, s.child, ""));
                                duplicate_reported[s.child] = true;
                             }
                          } else {
                             parent[s.child] = self;
                             if (is_root[s.child]) out.push_back(make_violation(Violation::Kind::RootSpawned, s.child, ""));
                          }
                       },
                       [&](const PollOutcome& p) {
                          if (!known(p.target)) out.push_back(make_violation(Violation::Kind::UnknownPollTarget, self, "target " + std::to_string(p.target)));
                          if (p.poll_cost < 0) out.push_back(make_violation(Violation::Kind::NegativePollCost, self, ""));
                       },
                       [](const TaskwaitChildren&) {},
                       [](const TaskgroupEnd&) {},
                    },
                    a);
      }
   }

   // Every task must hang off a root; a parent chain that never reaches one is a cycle.
   std::vector<int> state(n, 0); // 0 unknown, 1 reaches root, 2 cycle/orphan
   for (std::size_t i = 0; i < n; ++i) {
      if (state[i] != 0) continue;
      std::vector<std::size_t> chain;
      std::vector<bool> on_chain(n, false);
      std::size_t cur = i;
      int verdict = 0;
      while (true) {
         if (state[cur] != 0) {
            verdict = state[cur];
            break;
         }
         if (on_chain[cur]) {
            verdict = 2;
            out.push_back(make_violation(Violation::Kind::SpawnCycle, static_cast<TaskId>(cur), "spawns one of its ancestors"));
            break;
         }
         on_chain[cur] = true;
         chain.push_back(cur);
         if (is_root[cur]) {
            verdict = 1;
            break;
         }
         if (!parent[cur]) {
            verdict = 2;
            // self-spawned tasks are already reported
            bool self_spawn = std::any_of(out.begin(), out.end(), [&](const Violation& v) {
               return v.kind == Violation::Kind::SelfSpawn && v.task == cur;
            });
            if (!self_spawn) out.push_back(make_violation(Violation::Kind::Unreachable, static_cast<TaskId>(cur), "neither a root nor spawned"));
            break;
         }
         cur = *parent[cur];
      }
      for (std::size_t c : chain) state[c] = verdict;
   }
   return out;
}

void require_valid(const TaskGraph& graph) {
   auto violations = validate(graph);
   if (violations.empty()) return;
   std::ostringstream msg;
   msg << "invalid task graph:";
   for (std::size_t i = 0; i < violations.size() && i < 5; ++i) msg << " " << violations[i].message << ";";
   if (violations.size() > 5) msg << " (" << violations.size() - 5 << " more)";
   throw InvalidGraph(msg.str());
}

Ticks compute_work(const TaskSpec& task) {
   Ticks sum = 0;
   for (const Action& a : task.actions) {
      if (const auto* c = std::get_if<Compute>(&a)) sum += c->duration;
   }
   return sum;
}

Ticks total_work(const TaskGraph& graph) {
   Ticks sum = 0;
   for (const TaskSpec& t : graph.tasks) sum += compute_work(t);
   return sum;
}

std::vector<std::optional<TaskId>> spawn_parents(const TaskGraph& graph) {
   std::vector<std::optional<TaskId>> parent(graph.tasks.size());
   for (const TaskSpec& t : graph.tasks) {
      for (const Action& a : t.actions) {
         if (const auto* s = std::get_if<Spawn>(&a); s && s->child < parent.size() && !parent[s->child]) parent[s->child] = t.id;
      }
   }
   return parent;
}

namespace {

void collect_descendants(const TaskGraph& graph, TaskId root, std::vector<TaskId>& out) {
   std::vector<TaskId> stack{root};
   while (!stack.empty()) {
      TaskId cur = stack.back();
      stack.pop_back();
      for (const Action& a : graph.tasks[cur].actions) {
         if (const auto* s = std::get_if<Spawn>(&a)) {
            out.push_back(s->child);
            stack.push_back(s->child);
         }
      }
   }
}

} // namespace

std::vector<TaskId> synchronization_set(const TaskGraph& graph, TaskId waiter, std::size_t action_index) {
   const auto& actions = graph.tasks.at(waiter).actions;
   std::vector<TaskId> out;
   if (action_index >= actions.size()) return out;
   const Action& a = actions[action_index];
   if (std::holds_alternative<TaskwaitChildren>(a)) {
      for (std::size_t i = 0; i < action_index; ++i) {
         if (const auto* s = std::get_if<Spawn>(&actions[i])) out.push_back(s->child);
      }
   } else if (std::holds_alternative<TaskgroupEnd>(a)) {
      std::size_t begin = 0;
      for (std::size_t i = action_index; i-- > 0;) {
         if (std::holds_alternative<TaskgroupEnd>(actions[i])) {
            begin = i + 1;
            break;
         }
      }
      for (std::size_t i = begin; i < action_index; ++i) {
         if (const auto* s = std::get_if<Spawn>(&actions[i])) {
            out.push_back(s->child);
            collect_descendants(graph, s->child, out);
         }
      }
   }
   return out;
}

CriticalPath critical_path(const TaskGraph& graph) {
   const auto n = graph.tasks.size();
   // Node layout: task t owns points base[t] .. base[t] + actions; point i sits before action i.
   std::vector<std::size_t> base(n + 1, 0);
   for (std::size_t t = 0; t < n; ++t) base[t + 1] = base[t] + graph.tasks[t].actions.size() + 1;
   const std::size_t nodes = base[n];
   auto end_of = [&](TaskId t) { return base[t + 1] - 1; };

   struct Edge {
      std::size_t to;
      Ticks weight;
      TaskId task; // owner of the weighted compute edge
   };
   std::vector<std::vector<Edge>> out(nodes);
   std::vector<std::size_t> indegree(nodes, 0);
   auto add = [&](std::size_t from, std::size_t to, Ticks w, TaskId task) {
      out[from].push_back({to, w, task});
      ++indegree[to];
   };

   for (std::size_t t = 0; t < n; ++t) {
      const auto id = static_cast<TaskId>(t);
      const auto& actions = graph.tasks[t].actions;
      for (std::size_t i = 0; i < actions.size(); ++i) {
         const std::size_t here = base[t] + i;
         const Action& a = actions[i];
         if (const auto* c = std::get_if<Compute>(&a)) {
            add(here, here + 1, c->duration, id);
            continue;
         }
         add(here, here + 1, 0, id);
         if (const auto* s = std::get_if<Spawn>(&a)) {
            add(here, base[s->child], 0, id);
         } else if (const auto* p = std::get_if<PollOutcome>(&a)) {
            add(end_of(p->target), here + 1, 0, id);
         } else {
            for (TaskId member : synchronization_set(graph, id, i)) add(end_of(member), here + 1, 0, id);
         }
      }
   }

   struct Best {
      Ticks length = 0;
      std::vector<TaskId> seq;
   };
   auto better = [](Ticks len, const std::vector<TaskId>& seq, const Best& cur) {
      return len > cur.length || (len == cur.length && seq < cur.seq);
   };

   std::vector<Best> best(nodes);
   std::deque<std::size_t> ready;
   for (std::size_t v = 0; v < nodes; ++v) {
      if (indegree[v] == 0) ready.push_back(v);
   }
   std::size_t visited = 0;
   Best result;
   while (!ready.empty()) {
      std::size_t v = ready.front();
      ready.pop_front();
      ++visited;
      if (better(best[v].length, best[v].seq, result)) result = best[v];
      for (const Edge& e : out[v]) {
         std::vector<TaskId> seq = best[v].seq;
         if (e.weight > 0 && (seq.empty() || seq.back() != e.task)) seq.push_back(e.task);
         const Ticks len = best[v].length + e.weight;
         if (better(len, seq, best[e.to])) {
            best[e.to].length = len;
            best[e.to].seq = std::move(seq);
         }
         if (--indegree[e.to] == 0) ready.push_back(e.to);
      }
   }
   if (visited != nodes) throw CyclicDependency("poll and synchronization edges form a cycle");
   return {result.length, result.seq};
}

} // namespace tasksim
