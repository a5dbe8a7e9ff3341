#include "tasksim/analysis.hpp"
#include "tasksim/engine.hpp"
#include "tasksim/generators.hpp"

#include <doctest.h>

#include <algorithm>

using namespace tasksim;

namespace {

TaskSpec task(TaskId id, std::vector<Action> actions, bool tied = true, std::string label = "") {
   TaskSpec t;
   t.id = id;
   t.tied = tied;
   t.actions = std::move(actions);
   t.label = std::move(label);
   return t;
}

SimConfig config(std::uint32_t threads, PolicyConfig policy) {
   SimConfig c;
   c.thread_count = threads;
   c.policy = policy;
   return c;
}

std::size_t count(const ScheduleTrace& t, EventKind kind) {
   return static_cast<std::size_t>(std::count_if(t.events.begin(), t.events.end(), [&](const TraceEvent& e) { return e.kind == kind; }));
}

std::vector<Segment> segments_of(const ScheduleTrace& t, TaskId id) {
   std::vector<Segment> out;
   for (const Segment& s : t.segments) {
      if (s.task == id) out.push_back(s);
   }
   return out;
}

Ticks first_start(const ScheduleTrace& t, TaskId id) {
   const auto segs = segments_of(t, id);
   REQUIRE_FALSE(segs.empty());
   return segs.front().start;
}

// K=2: traversal 0 spawns 6 enclaves over 12 cells, traversal 1 has 4 cells.
TaskGraph small_throttled_graph() {
   EnclaveWorkloadParams p;
   p.K = 2;
   p.enclaves_per_traversal = {6, 0};
   p.cells_per_traversal = {12, 4};
   p.traversal_cell_cost = 10;
   p.enclave_cost_range = {15, 15};
   return gen_enclave_pattern(p);
}

} // namespace

TEST_CASE("single task on one thread") {
   TaskGraph g;
   g.tasks = {task(0, {Compute{10}})};
   g.roots = {0};
   const auto t = simulate(g, config(1, PolicyConfig::reference()));
   CHECK(t.makespan == 10);
   CHECK(t.outcome == Outcome::Completed);
   REQUIRE(t.segments.size() == 1);
   CHECK(t.segments[0] == Segment{0, 0, 0, 10, SegmentKind::Compute});
}

TEST_CASE("fork join children are stolen by idle threads") {
   TaskGraph g;
   g.tasks = {task(0, {Compute{1}, Spawn{1}, Spawn{2}, TaskwaitChildren{}}), task(1, {Compute{5}}), task(2, {Compute{5}})};
   g.roots = {0};
   const auto t = simulate(g, config(4, PolicyConfig::reference()));
   CHECK(t.makespan == 6);
   CHECK(count(t, EventKind::Stolen) == 2);
   for (TaskId c : {1u, 2u}) {
      const auto segs = segments_of(t, c);
      REQUIRE(segs.size() == 1);
      CHECK(segs[0].start == 1);
      CHECK(segs[0].end == 6);
      CHECK(segs[0].thread != 0);
   }
}

TEST_CASE("waiting thread runs its own children when alone") {
   TaskGraph g;
   g.tasks = {task(0, {Compute{1}, Spawn{1}, Spawn{2}, TaskwaitChildren{}}), task(1, {Compute{5}}), task(2, {Compute{5}})};
   g.roots = {0};
   const auto t = simulate(g, config(1, PolicyConfig::reference()));
   CHECK(t.makespan == 11);
   // LIFO: the last child spawned runs first.
   CHECK(first_start(t, 2) == 1);
   CHECK(first_start(t, 1) == 6);
}

TEST_CASE("throttled enclave workload, hand-stepped") {
   const auto g = small_throttled_graph();
   const auto bounded = simulate(g, config(2, PolicyConfig::reference(2)));
   CHECK(bounded.outcome == Outcome::Completed);
   CHECK(bounded.makespan == 135);
   CHECK(count(bounded, EventKind::Throttled) == 1);
   // The third enclave is spawned into a full deque and runs inside the traversal.
   const auto nested = segments_of(bounded, 4);
   REQUIRE(nested.size() == 1);
   CHECK(nested[0] == Segment{0, 4, 30, 45, SegmentKind::UndeferredNested});

   const auto unbounded = simulate(g, config(2, PolicyConfig::reference(std::nullopt)));
   CHECK(unbounded.makespan == 130);
   CHECK(count(unbounded, EventKind::Throttled) == 0);
}

TEST_CASE("starvation under the reference policy, progress with fair yield") {
   const auto g = gen_starvation_pattern({2, 4, 2});
   const auto ref = simulate(g, config(2, PolicyConfig::reference()));
   CHECK(ref.outcome == Outcome::StarvationDetected);
   // The enclaves never start.
   CHECK(segments_of(ref, 4).empty());
   CHECK(segments_of(ref, 5).empty());

   const auto fair = simulate(g, config(2, PolicyConfig::extended()));
   CHECK(fair.outcome == Outcome::Completed);
   CHECK(count(fair, EventKind::Completed) == 6);

   // Fair yield alone is enough.
   PolicyConfig only_fair = PolicyConfig::extended();
   only_fair.priority_aware = false;
   only_fair.honor_latency_wait = false;
   only_fair.honor_defer = false;
   only_fair.scatter_on_overflow = false;
   CHECK(simulate(g, config(2, only_fair)).outcome == Outcome::Completed);
}

TEST_CASE("starvation with zero poll cost is still detected") {
   StarvationParams p;
   p.poll_cost = 0;
   const auto t = simulate(gen_starvation_pattern(p), config(2, PolicyConfig::reference()));
   CHECK(t.outcome == Outcome::StarvationDetected);
   CHECK(t.makespan == 0);
}

TEST_CASE("poll retry bound trips") {
   auto cfg = config(2, PolicyConfig::reference());
   cfg.max_poll_retries_without_progress = 3;
   CHECK(simulate(gen_starvation_pattern({2, 4, 2}), cfg).outcome == Outcome::StarvationDetected);
}

TEST_CASE("time limit") {
   TaskGraph g;
   g.tasks = {task(0, {Compute{100}})};
   g.roots = {0};
   auto cfg = config(1, PolicyConfig::reference());
   cfg.max_virtual_time = 50;
   const auto t = simulate(g, cfg);
   CHECK(t.outcome == Outcome::TimeLimitExceeded);
   CHECK(t.makespan == 50);
}

TEST_CASE("poller waits for a producer on another thread") {
   TaskGraph g;
   g.tasks = {task(0, {PollOutcome{1, YieldMode::Default, 2}, Compute{3}}, false), task(1, {Compute{7}})};
   g.roots = {0, 1};
   const auto t = simulate(g, config(2, PolicyConfig::reference()));
   CHECK(t.outcome == Outcome::Completed);
   CHECK(t.makespan == 10);
   const auto spins = std::count_if(t.segments.begin(), t.segments.end(), [](const Segment& s) { return s.kind == SegmentKind::PollSpin; });
   CHECK(spins == 1); // one retry, then the poller sleeps until the producer completes
}

TEST_CASE("two-timestep waits, hand-stepped") {
   SUBCASE("throughput wait under the reference policy") {
      const auto g = gen_two_timestep_pattern(4, 10, 40, WaitMode::Throughput);
      const auto t = simulate(g, config(4, PolicyConfig::reference()));
      CHECK(t.outcome == Outcome::Completed);
      CHECK(t.makespan == 90);
      std::vector<Ticks> starts;
      for (TaskId id = 9; id <= 12; ++id) starts.push_back(first_start(t, id));
      std::sort(starts.begin(), starts.end());
      CHECK(starts == std::vector<Ticks>{30, 40, 50, 50});
   }
   SUBCASE("latency wait under the extended policy") {
      const auto g = gen_two_timestep_pattern(4, 10, 40, WaitMode::Latency);
      const auto t = simulate(g, config(4, PolicyConfig::extended()));
      CHECK(t.outcome == Outcome::Completed);
      CHECK(t.makespan == 80);
      for (TaskId id = 9; id <= 12; ++id) CHECK(first_start(t, id) == 30);
   }
}

TEST_CASE("latency waits keep foreign work off the waiting thread") {
   // Root 0 spawns 1 and waits with latency; root 2 is unrelated work queued on thread 0.
   TaskGraph g;
   g.tasks = {task(0, {Spawn{1}, TaskwaitChildren{WaitMode::Latency}, Compute{1}}), task(1, {Compute{4}}), task(2, {Compute{10}}),
              task(3, {Compute{10}})};
   g.roots = {0, 2, 3};
   const auto t = simulate(g, config(2, PolicyConfig::extended()));
   CHECK(t.outcome == Outcome::Completed);
   Ticks entered = -1, exited = -1;
   for (const auto& e : t.events) {
      if (e.task == 0 && e.kind == EventKind::WaitEntered) entered = e.time;
      if (e.task == 0 && e.kind == EventKind::WaitExited) exited = e.time;
   }
   REQUIRE(entered >= 0);
   for (const Segment& s : t.segments) {
      if (s.thread == 0 && s.task != 1 && s.task != 0) CHECK((s.end <= entered || s.start >= exited));
   }
}

TEST_CASE("nested loop scatter shortens the critical task") {
   NestedLoopParams p;
   p.peer_blocking_cost = 30;
   const auto g = gen_nested_loop_pattern(p);
   const auto ref = simulate(g, config(4, PolicyConfig::reference()));
   const auto ext = simulate(g, config(4, PolicyConfig::extended()));
   CHECK(task_span(ref, 0) == 50);
   CHECK(task_span(ext, 0) == 20);
   CHECK(ref.makespan == 50);
   CHECK(ext.makespan == 45);
   CHECK(count(ext, EventKind::Scattered) == 3);
}

TEST_CASE("must-defer overflow is scattered under extended") {
   EnclaveWorkloadParams p;
   p.K = 2;
   p.enclaves_per_traversal = {6, 0};
   p.cells_per_traversal = {12, 4};
   p.enclave_cost_range = {15, 15};
   p.defer_mode = DeferMode::MustDefer;
   const auto g = gen_enclave_pattern(p);
   const auto t = simulate(g, config(2, PolicyConfig::extended(2)));
   CHECK(t.outcome == Outcome::Completed);
   CHECK(count(t, EventKind::Throttled) == 0);
   for (const Segment& s : t.segments) CHECK(s.kind != SegmentKind::UndeferredNested);
}

TEST_CASE("explicit undeferred spawns nest recursively") {
   TaskGraph g;
   g.tasks = {task(0, {Compute{1}, Spawn{1, DeferMode::Undeferred}, Compute{1}}), task(1, {Spawn{2, DeferMode::Undeferred}, Compute{2}}),
              task(2, {Compute{3}})};
   g.roots = {0};
   const auto t = simulate(g, config(2, PolicyConfig::reference()));
   CHECK(t.makespan == 7);
   CHECK(count(t, EventKind::Throttled) == 0);
   CHECK(segments_of(t, 2).front() == Segment{0, 2, 1, 4, SegmentKind::UndeferredNested});
   CHECK(segments_of(t, 1).front() == Segment{0, 1, 4, 6, SegmentKind::UndeferredNested});

   auto capped = config(2, PolicyConfig::reference());
   capped.max_undeferred_depth = 1;
   CHECK_THROWS_AS(simulate(g, capped), Error);
}

TEST_CASE("tied tasks resume on their home thread") {
   // Task 0 is tied and yields while polling; thread 1 is idle but may not take it.
   TaskGraph g;
   g.tasks = {task(0, {Compute{1}, PollOutcome{1, YieldMode::Throughput, 1}, Compute{1}}, true), task(1, {Compute{6}}),
              task(2, {Compute{2}})};
   g.roots = {0, 1, 2};
   for (const auto& pol : {PolicyConfig::reference(), PolicyConfig::extended(), PolicyConfig::fcfs()}) {
      const auto t = simulate(g, config(2, pol));
      REQUIRE(t.outcome == Outcome::Completed);
      const auto segs = segments_of(t, 0);
      for (const Segment& s : segs) CHECK(s.thread == segs.front().thread);
      CHECK(validate_trace(g, t).empty());
   }
}

TEST_CASE("overheads delay work without creating segments") {
   TaskGraph g;
   g.tasks = {task(0, {Compute{1}, Spawn{1}, TaskwaitChildren{}}), task(1, {Compute{5}})};
   g.roots = {0};
   auto cfg = config(2, PolicyConfig::reference());
   cfg.spawn_overhead = 2;
   cfg.steal_overhead = 3;
   const auto t = simulate(g, cfg);
   // spawn at 1, overhead until 3; thread 1 steals at 1 and pays 3 → starts at 4.
   CHECK(first_start(t, 1) == 4);
   CHECK(t.makespan == 9);
   CHECK(t.segments.size() == 2);
}

TEST_CASE("fcfs serves roots in submission order") {
   TaskGraph g;
   g.tasks = {task(0, {Compute{3}}), task(1, {Compute{3}}), task(2, {Compute{3}})};
   g.roots = {2, 0, 1};
   const auto t = simulate(g, config(1, PolicyConfig::fcfs()));
   CHECK(first_start(t, 2) == 0);
   CHECK(first_start(t, 0) == 3);
   CHECK(first_start(t, 1) == 6);
}

TEST_CASE("config and graph errors") {
   TaskGraph g;
   g.tasks = {task(0, {Compute{1}})};
   g.roots = {0};
   CHECK_THROWS_AS(simulate(g, config(0, PolicyConfig::reference())), ConfigError);
   CHECK_THROWS_AS(simulate(g, config(1, PolicyConfig::reference(0))), ConfigError);
   auto neg = config(1, PolicyConfig::reference());
   neg.spawn_overhead = -1;
   CHECK_THROWS_AS(simulate(g, neg), ConfigError);
   TaskGraph bad;
   bad.tasks = {task(0, {Spawn{0}})};
   bad.roots = {0};
   CHECK_THROWS_AS(simulate(bad, config(1, PolicyConfig::reference())), InvalidGraph);
}

TEST_CASE("simulate_batch") {
   const auto g = small_throttled_graph();
   CHECK(simulate_batch(g, {}).empty());
   const auto cfg = config(2, PolicyConfig::reference(2));
   const auto twice = simulate_batch(g, {cfg, cfg});
   REQUIRE(twice.size() == 2);
   CHECK(twice[0] == twice[1]);
   const auto mixed = simulate_batch(g, {cfg, config(2, PolicyConfig::fcfs())});
   CHECK(mixed[0] == simulate(g, cfg));
   CHECK(mixed[1] == simulate(g, config(2, PolicyConfig::fcfs())));
   try {
      simulate_batch(g, {cfg, config(0, PolicyConfig::fcfs())});
      FAIL("expected ConfigError");
   } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).rfind("run 1:", 0) == 0);
   }
}

TEST_CASE("empty graph completes immediately") {
   const auto t = simulate(TaskGraph{}, config(2, PolicyConfig::reference()));
   CHECK(t.outcome == Outcome::Completed);
   CHECK(t.makespan == 0);
}
