#include "tasksim/policy.hpp"

#include <doctest.h>

#include <vector>

using namespace tasksim;

namespace {

TaskSpec plain_task(std::string label = "") {
   TaskSpec t;
   t.label = std::move(label);
   t.actions = {Compute{1}};
   return t;
}

SpawnDecision spawn_with(const PolicyConfig& cfg, ThreadIndex spawner, DeferMode defer, const std::vector<std::size_t>& lengths,
                         const TaskSpec& t = plain_task()) {
   SpawnContext ctx;
   ctx.queue_lengths = lengths;
   return on_spawn(cfg.normalized(), spawner, t, defer, ctx);
}

TaskQueue queue_of(std::vector<std::pair<TaskId, Priority>> entries, std::uint64_t first_seq = 0) {
   TaskQueue q;
   for (auto [id, prio] : entries) q.push_back({id, prio, first_seq++});
   return q;
}

} // namespace

TEST_CASE("normalization forces per-kind settings") {
   PolicyConfig ref = PolicyConfig::extended();
   ref.kind = PolicyKind::ReferenceDeque;
   const auto n = ref.normalized();
   CHECK_FALSE(n.honor_defer);
   CHECK_FALSE(n.priority_aware);
   CHECK_FALSE(n.fair_yield);
   CHECK_FALSE(n.honor_latency_wait);
   CHECK_FALSE(n.scatter_on_overflow);

   PolicyConfig f = PolicyConfig::fcfs();
   f.queue_bound = 4;
   CHECK_FALSE(f.normalized().queue_bound.has_value());

   PolicyConfig zero = PolicyConfig::reference(0);
   CHECK_THROWS_AS(zero.normalized(), ConfigError);
}

TEST_CASE("reference throttles at the queue bound") {
   const auto cfg = PolicyConfig::reference(256);
   CHECK(spawn_with(cfg, 0, DeferMode::RuntimeChoice, {255, 0}).kind == SpawnDecision::Kind::EnqueueLocal);
   const auto full = spawn_with(cfg, 0, DeferMode::RuntimeChoice, {256, 0});
   CHECK(full.kind == SpawnDecision::Kind::ExecuteUndeferred);
   CHECK(full.throttled);
}

TEST_CASE("reference ignores MustDefer") {
   const auto d = spawn_with(PolicyConfig::reference(2), 0, DeferMode::MustDefer, {2, 0, 0});
   CHECK(d.kind == SpawnDecision::Kind::ExecuteUndeferred);
   CHECK(d.throttled);
}

TEST_CASE("unbounded reference never throttles RuntimeChoice") {
   const auto cfg = PolicyConfig::reference(std::nullopt);
   for (std::size_t len : {0u, 1u, 256u, 100000u}) {
      CHECK(spawn_with(cfg, 1, DeferMode::RuntimeChoice, {0, len}).kind == SpawnDecision::Kind::EnqueueLocal);
   }
}

TEST_CASE("undeferred spawns run inline under every policy") {
   for (const auto& cfg : {PolicyConfig::reference(), PolicyConfig::fcfs(), PolicyConfig::extended()}) {
      const auto d = spawn_with(cfg, 0, DeferMode::Undeferred, {0, 0});
      CHECK(d.kind == SpawnDecision::Kind::ExecuteUndeferred);
      CHECK_FALSE(d.throttled);
   }
}

TEST_CASE("extended scatters MustDefer overflow") {
   const auto cfg = PolicyConfig::extended(4);
   const auto d = spawn_with(cfg, 0, DeferMode::MustDefer, {4, 4, 1, 0});
   CHECK(d.kind == SpawnDecision::Kind::ScatterTo);
   CHECK(d.target == 2);
   CHECK(d.priority == kMinPriority);

   CHECK(spawn_with(cfg, 0, DeferMode::MustDefer, {4, 4, 4, 4}).kind == SpawnDecision::Kind::ExecuteUndeferred);
   CHECK(spawn_with(cfg, 0, DeferMode::RuntimeChoice, {4, 0, 0, 0}).kind == SpawnDecision::Kind::ExecuteUndeferred);

   auto no_scatter = cfg;
   no_scatter.scatter_on_overflow = false;
   CHECK(spawn_with(no_scatter, 0, DeferMode::MustDefer, {4, 0, 0, 0}).kind == SpawnDecision::Kind::EnqueueLocal);
}

TEST_CASE("scatter never targets the spawner") {
   const auto cfg = PolicyConfig::extended(1);
   for (ThreadIndex spawner = 0; spawner < 4; ++spawner) {
      std::vector<std::size_t> lengths(4, 1);
      lengths[(spawner + 3) % 4] = 0;
      const auto d = spawn_with(cfg, spawner, DeferMode::MustDefer, lengths);
      REQUIRE(d.kind == SpawnDecision::Kind::ScatterTo);
      CHECK(d.target != spawner);
   }
}

TEST_CASE("loop chunks scatter above everything queued") {
   const auto cfg = PolicyConfig::extended();
   SpawnContext ctx;
   const std::vector<std::size_t> lengths{3, 1, 0, 0};
   ctx.queue_lengths = lengths;
   ctx.max_queued_priority = 7;
   const TaskSpec chunk = plain_task(kLabelLoopChunk);
   auto d = on_spawn(cfg, 1, chunk, DeferMode::RuntimeChoice, ctx);
   CHECK(d.kind == SpawnDecision::Kind::ScatterTo);
   CHECK(d.target == 2);
   CHECK(d.priority == 8);
   CHECK(d.loop_burst);

   ctx.loop_burst_priority = 8;
   ctx.loop_victims_used = 3;
   d = on_spawn(cfg, 1, chunk, DeferMode::RuntimeChoice, ctx);
   CHECK(d.kind == SpawnDecision::Kind::EnqueueLocal);
   CHECK(d.priority == 8);

   // Reference treats chunks like any task.
   CHECK(on_spawn(PolicyConfig::reference(), 1, chunk, DeferMode::RuntimeChoice, ctx).kind == SpawnDecision::Kind::EnqueueLocal);
}

TEST_CASE("reference picks LIFO locally and steals FIFO") {
   const auto cfg = PolicyConfig::reference();
   std::vector<TaskQueue> qs{queue_of({{0, 0}, {1, 0}, {2, 0}}), {}};
   CHECK(on_idle(cfg, 0, qs) == Pick{0, 2});
   CHECK(on_idle(cfg, 1, qs) == Pick{0, 0});
   std::vector<TaskQueue> empty(3);
   CHECK_FALSE(on_idle(cfg, 0, empty).has_value());
}

TEST_CASE("steal victims are visited round-robin from thief+1") {
   const auto cfg = PolicyConfig::reference();
   std::vector<TaskQueue> qs{queue_of({{10, 0}}), {}, {}, queue_of({{30, 0}})};
   CHECK(on_idle(cfg, 1, qs) == Pick{3, 0});
   CHECK(on_idle(cfg, 3, qs) == Pick{3, 0});
   qs[3].clear();
   CHECK(on_idle(cfg, 2, qs) == Pick{0, 0});
}

TEST_CASE("filters hide ineligible entries") {
   const auto cfg = PolicyConfig::reference();
   std::vector<TaskQueue> qs{queue_of({{0, 0}, {1, 0}, {2, 0}})};
   const PickFilter skip2 = [](const QueueEntry& e, std::size_t) { return e.task != 2; };
   CHECK(on_idle(cfg, 0, qs, skip2) == Pick{0, 1});
}

TEST_CASE("priority-aware pick") {
   const auto cfg = PolicyConfig::extended();
   std::vector<TaskQueue> qs{queue_of({{0, 0}, {1, 9}, {2, 0}}), {}};
   CHECK(on_idle(cfg, 0, qs) == Pick{0, 1});
   CHECK(on_idle(cfg, 1, qs) == Pick{0, 1});

   std::vector<TaskQueue> ties{queue_of({{4, 1}, {5, 1}}, 10), queue_of({{6, 1}}, 0)};
   CHECK(on_idle(cfg, 0, ties) == Pick{0, 0}); // own queue, oldest entry
   CHECK(on_idle(cfg, 1, ties) == Pick{1, 0});
}

TEST_CASE("priority-aware pick maximises priority") {
   const auto cfg = PolicyConfig::extended();
   std::vector<TaskQueue> qs{queue_of({{0, -2}, {1, 3}}), queue_of({{2, 5}, {3, -9}}, 5), queue_of({{4, 4}}, 9)};
   for (ThreadIndex th = 0; th < 3; ++th) {
      const auto pick = on_idle(cfg, th, qs);
      REQUIRE(pick);
      const Priority chosen = qs[pick->queue][pick->position].priority;
      for (const auto& q : qs) {
         for (const auto& e : q) CHECK(chosen >= e.priority);
      }
   }
}

TEST_CASE("fcfs serves the single queue in order") {
   const auto cfg = PolicyConfig::fcfs();
   std::vector<TaskQueue> qs{queue_of({{3, 0}, {1, 0}})};
   CHECK(on_idle(cfg, 7, qs) == Pick{0, 0});
}

TEST_CASE("yield decisions") {
   using K = YieldDecision::Kind;
   const auto ext = PolicyConfig::extended();
   CHECK(on_yield(ext, 0, YieldMode::Throughput, queue_of({{1, 0}, {2, -3}})) == YieldDecision{K::RequeueBack, -4});
   CHECK(on_yield(ext, 5, YieldMode::Throughput, {}) == YieldDecision{K::RequeueBack, 5});
   CHECK(on_yield(ext, 0, YieldMode::Latency, queue_of({{1, 0}})).kind == K::ResumeImmediately);
   CHECK(on_yield(ext, 0, YieldMode::Default, queue_of({{1, 2}})) == YieldDecision{K::RequeueBack, 1});
   CHECK(on_yield(ext, 0, YieldMode::Default, queue_of({{1, kMinPriority}})) == YieldDecision{K::RequeueBack, kMinPriority});
   CHECK(on_yield(PolicyConfig::reference(), 0, YieldMode::Default, queue_of({{1, 0}})).kind == K::RequeueFront);
   CHECK(on_yield(PolicyConfig::fcfs(), 2, YieldMode::Throughput, {}) == YieldDecision{K::RequeueBack, 2});

   auto unfair = ext;
   unfair.fair_yield = false;
   CHECK(on_yield(unfair, 0, YieldMode::Default, queue_of({{1, 0}})).kind == K::RequeueFront);
   CHECK(on_yield(unfair, 3, YieldMode::Throughput, queue_of({{1, 0}})) == YieldDecision{K::RequeueBack, 3});
}

TEST_CASE("wait decisions") {
   CHECK(on_wait(PolicyConfig::extended(), WaitMode::Throughput) == WaitDecision::ExecuteOtherTasks);
   CHECK(on_wait(PolicyConfig::reference(), WaitMode::Throughput) == WaitDecision::ExecuteOtherTasks);
   CHECK(on_wait(PolicyConfig::extended(), WaitMode::Latency) == WaitDecision::IdleUntilComplete);
   CHECK(on_wait(PolicyConfig::reference().normalized(), WaitMode::Latency) == WaitDecision::ExecuteOtherTasks);
}

TEST_CASE("decisions are pure") {
   const auto cfg = PolicyConfig::extended(3);
   const std::vector<std::size_t> lengths{3, 2, 3};
   CHECK(spawn_with(cfg, 0, DeferMode::MustDefer, lengths) == spawn_with(cfg, 0, DeferMode::MustDefer, lengths));
}
