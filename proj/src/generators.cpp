#include "tasksim/generators.hpp"

#include <numeric>
#include <string>

namespace tasksim {

namespace {

TaskSpec make_task(TaskId id, std::string label, bool tied, Priority priority = 0) {
   TaskSpec t;
   t.id = id;
   t.label = std::move(label);
   t.tied = tied;
   t.priority = priority;
   return t;
}

void require(bool ok, const std::string& what) {
   if (!ok) throw InvalidParams(what);
}

} // namespace

TaskGraph gen_enclave_pattern(const EnclaveWorkloadParams& p) {
   require(p.K >= 1, "K must be positive");
   require(p.timesteps >= 1, "timesteps must be positive");
   require(p.enclaves_per_traversal.size() == p.K, "enclaves_per_traversal must have K entries");
   require(p.cells_per_traversal.size() == p.K, "cells_per_traversal must have K entries");
   require(p.traversal_cell_cost > 0, "traversal_cell_cost must be positive");
   require(p.enclave_cost_range.first > 0, "enclave_cost_range.min must be positive");
   require(p.enclave_cost_range.first <= p.enclave_cost_range.second, "enclave_cost_range.min must not exceed max");
   for (auto cells : p.cells_per_traversal) require(cells >= 1, "cells_per_traversal entries must be positive");

   const std::uint32_t K = p.K;
   std::vector<std::uint32_t> enclave_offset(K + 1, 0);
   for (std::uint32_t k = 0; k < K; ++k) enclave_offset[k + 1] = enclave_offset[k] + p.enclaves_per_traversal[k];
   const std::uint32_t step_size = K + enclave_offset[K];

   auto traversal_id = [&](std::uint32_t t, std::uint32_t k) { return static_cast<TaskId>(t * step_size + k); };
   auto enclave_id = [&](std::uint32_t t, std::uint32_t k, std::uint32_t j) {
      return static_cast<TaskId>(t * step_size + K + enclave_offset[k] + j);
   };

   SplitMix64 rng(p.seed);
   TaskGraph g;
   g.tasks.resize(static_cast<std::size_t>(step_size) * p.timesteps);
   for (std::uint32_t t = 0; t < p.timesteps; ++t) {
      for (std::uint32_t k = 0; k < K; ++k) {
         TaskSpec trav = make_task(traversal_id(t, k), kLabelTraversal, false);
         if (t >= 1) {
            const std::uint32_t source = (k + K - 1) % K;
            for (std::uint32_t j = 0; j < p.enclaves_per_traversal[source]; ++j) {
               trav.actions.emplace_back(PollOutcome{enclave_id(t - 1, source, j), p.yield_mode, 0});
            }
         }
         const std::uint32_t cells = p.cells_per_traversal[k];
         const std::uint32_t enclaves = p.enclaves_per_traversal[k];
         for (std::uint32_t c = 0; c < cells; ++c) {
            trav.actions.emplace_back(Compute{p.traversal_cell_cost});
            if (c < enclaves) trav.actions.emplace_back(Spawn{enclave_id(t, k, c), p.defer_mode});
         }
         for (std::uint32_t j = cells; j < enclaves; ++j) trav.actions.emplace_back(Spawn{enclave_id(t, k, j), p.defer_mode});
         trav.actions.emplace_back(TaskwaitChildren{p.wait_mode});
         if (t + 1 < p.timesteps) trav.actions.emplace_back(Spawn{traversal_id(t + 1, k), DeferMode::RuntimeChoice});
         g.tasks[trav.id] = std::move(trav);

         for (std::uint32_t j = 0; j < enclaves; ++j) {
            TaskSpec enc = make_task(enclave_id(t, k, j), kLabelEnclave, true);
            enc.actions.emplace_back(Compute{rng.uniform(p.enclave_cost_range.first, p.enclave_cost_range.second)});
            g.tasks[enc.id] = std::move(enc);
         }
      }
   }
   for (std::uint32_t k = 0; k < K; ++k) g.roots.push_back(traversal_id(0, k));
   g.meta["generator"] = "enclave";
   g.meta["seed"] = std::to_string(p.seed);
   return g;
}

TaskGraph gen_starvation_pattern(const StarvationParams& p) {
   require(p.T >= 1, "T must be positive");
   require(p.E >= 1, "E must be positive");
   require(p.C > p.T + 1, "starvation requires C > T+1 (got C=" + std::to_string(p.C) + ", T=" + std::to_string(p.T) + ")");
   require(p.enclave_cost > 0, "enclave_cost must be positive");
   require(p.poll_cost >= 0, "poll_cost must be non-negative");

   TaskGraph g;
   for (std::uint32_t i = 0; i < p.C; ++i) {
      TaskSpec c = make_task(i, kLabelConsumer, false);
      c.actions.emplace_back(PollOutcome{static_cast<TaskId>(p.C + i % p.E), YieldMode::Default, p.poll_cost});
      c.actions.emplace_back(Compute{p.enclave_cost});
      g.tasks.push_back(std::move(c));
   }
   for (std::uint32_t j = 0; j < p.E; ++j) {
      TaskSpec e = make_task(p.C + j, kLabelEnclave, true);
      e.actions.emplace_back(Compute{p.enclave_cost});
      g.tasks.push_back(std::move(e));
   }
   g.roots.resize(p.C + p.E);
   std::iota(g.roots.begin(), g.roots.end(), TaskId{0});
   g.meta["generator"] = "starvation";
   g.meta["threads"] = std::to_string(p.T);
   g.meta["seed"] = std::to_string(p.seed);
   return g;
}

TaskGraph gen_nested_loop_pattern(const NestedLoopParams& p) {
   require(p.K >= 1, "K must be positive");
   require(p.loop_chunks >= 1, "loop_chunks must be at least 1");
   require(p.chunk_cost > 0, "chunk_cost must be positive");
   require(p.serial_prefix_cost >= 0 && p.serial_suffix_cost >= 0, "serial costs must be non-negative");
   require(p.peer_blocking_cost >= 0, "peer_blocking_cost must be non-negative");

   const std::uint32_t looped = p.loop_on_critical_task_only ? 1 : p.K;
   const TaskId first_chunk = p.K;
   const TaskId first_background = first_chunk + looped * p.loop_chunks;

   TaskGraph g;
   for (std::uint32_t k = 0; k < p.K; ++k) {
      TaskSpec trav = make_task(k, kLabelTraversal, false);
      if (p.serial_prefix_cost > 0) trav.actions.emplace_back(Compute{p.serial_prefix_cost});
      if (k < looped) {
         for (std::uint32_t c = 0; c < p.loop_chunks; ++c) {
            trav.actions.emplace_back(Spawn{first_chunk + k * p.loop_chunks + c, DeferMode::RuntimeChoice});
         }
         trav.actions.emplace_back(TaskwaitChildren{WaitMode::Throughput});
         if (p.serial_suffix_cost > 0) trav.actions.emplace_back(Compute{p.serial_suffix_cost});
      }
      g.tasks.push_back(std::move(trav));
   }
   for (std::uint32_t i = 0; i < looped * p.loop_chunks; ++i) {
      TaskSpec chunk = make_task(first_chunk + i, kLabelLoopChunk, true, p.chunk_priority);
      chunk.actions.emplace_back(Compute{p.chunk_cost});
      g.tasks.push_back(std::move(chunk));
   }
   for (TaskId k = 0; k < p.K; ++k) g.roots.push_back(k);
   if (p.peer_blocking_cost > 0) {
      for (std::uint32_t i = 0; i + 1 < p.K; ++i) {
         TaskSpec bg = make_task(first_background + i, kLabelBackground, true);
         bg.actions.emplace_back(Compute{p.peer_blocking_cost});
         g.roots.push_back(bg.id);
         g.tasks.push_back(std::move(bg));
      }
   }
   g.meta["generator"] = "nested";
   g.meta["seed"] = std::to_string(p.seed);
   return g;
}

TaskGraph gen_two_timestep_pattern(const TwoTimestepParams& p) {
   require(p.K >= 2, "K must be at least 2");
   require(p.traversal_cost > 0, "traversal_cost must be positive");
   require(p.straggler_enclave_cost >= 2, "straggler_enclave_cost must be at least 2");

   const std::uint32_t K = p.K;
   const TaskId driver = 0;
   auto group1 = [&](std::uint32_t k) { return static_cast<TaskId>(1 + k); };
   auto enclave = [&](std::uint32_t k) { return static_cast<TaskId>(1 + K + k); };
   auto group2 = [&](std::uint32_t k) { return static_cast<TaskId>(1 + 2 * K + k); };

   TaskGraph g;
   g.tasks.resize(1 + 3 * K);
   TaskSpec d = make_task(driver, kLabelDriver, true);
   for (std::uint32_t k = 0; k < K; ++k) d.actions.emplace_back(Spawn{group1(k), DeferMode::RuntimeChoice});
   d.actions.emplace_back(TaskwaitChildren{p.wait_mode});
   for (std::uint32_t k = 0; k < K; ++k) d.actions.emplace_back(Spawn{group2(k), DeferMode::RuntimeChoice});
   d.actions.emplace_back(TaskgroupEnd{WaitMode::Throughput});
   g.tasks[driver] = std::move(d);

   // The last group-1 traversal runs long enough that the other K-1 threads are
   // inside their enclaves when it finishes.
   const Ticks straggler_traversal = p.traversal_cost + p.straggler_enclave_cost / 2;
   for (std::uint32_t k = 0; k < K; ++k) {
      TaskSpec t1 = make_task(group1(k), kLabelGroup1Traversal, false, 1);
      t1.actions.emplace_back(Spawn{enclave(k), DeferMode::RuntimeChoice});
      t1.actions.emplace_back(Compute{k + 1 == K ? straggler_traversal : p.traversal_cost});
      g.tasks[t1.id] = std::move(t1);

      TaskSpec e = make_task(enclave(k), kLabelEnclave, true);
      e.actions.emplace_back(Compute{p.straggler_enclave_cost});
      g.tasks[e.id] = std::move(e);

      TaskSpec t2 = make_task(group2(k), kLabelGroup2Traversal, false, 1);
      t2.actions.emplace_back(Compute{p.traversal_cost});
      g.tasks[t2.id] = std::move(t2);
   }
   g.roots.push_back(driver);
   g.meta["generator"] = "two-timestep";
   return g;
}

} // namespace tasksim
