#pragma once

#include "tasksim/task_graph.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace tasksim {

/// SplitMix64 (Steele, Lea, Flood). The generators draw every random cost from
/// this stream so graphs reproduce across implementations.
class SplitMix64 {
public:
   explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

   std::uint64_t next() {
      std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      return z ^ (z >> 31);
   }

   /// Uniform in [lo, hi] as lo + next() % (hi - lo + 1).
   std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
      const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
      return lo + static_cast<std::int64_t>(next() % span);
   }

private:
   std::uint64_t state_;
};

/// Traversal/enclave producer-consumer sweeps.
struct EnclaveWorkloadParams {
   std::uint32_t K = 4;
   std::uint32_t timesteps = 1;
   std::vector<std::uint32_t> enclaves_per_traversal;
   Ticks traversal_cell_cost = 10;
   std::pair<Ticks, Ticks> enclave_cost_range{50, 150};
   std::vector<std::uint32_t> cells_per_traversal;
   std::uint64_t seed = 0;
   DeferMode defer_mode = DeferMode::RuntimeChoice;
   YieldMode yield_mode = YieldMode::Default;
   WaitMode wait_mode = WaitMode::Throughput;
};

struct StarvationParams {
   std::uint32_t T = 2;
   std::uint32_t C = 4;
   std::uint32_t E = 2;
   Ticks poll_cost = 1;
   Ticks enclave_cost = 10;
   std::uint64_t seed = 0;
};

struct NestedLoopParams {
   std::uint32_t K = 4;
   std::uint32_t loop_chunks = 4;
   Ticks chunk_cost = 10;
   bool loop_on_critical_task_only = true;
   Ticks serial_prefix_cost = 5;
   Ticks serial_suffix_cost = 5;
   Priority chunk_priority = 0;
   /// When positive, K-1 extra "background" roots of this cost keep the peers busy.
   Ticks peer_blocking_cost = 0;
   std::uint64_t seed = 0;
};

struct TwoTimestepParams {
   std::uint32_t K = 4;
   Ticks traversal_cost = 10;
   Ticks straggler_enclave_cost = 40;
   WaitMode wait_mode = WaitMode::Throughput;
};

TaskGraph gen_enclave_pattern(const EnclaveWorkloadParams& params);
TaskGraph gen_starvation_pattern(const StarvationParams& params);
TaskGraph gen_nested_loop_pattern(const NestedLoopParams& params);
TaskGraph gen_two_timestep_pattern(const TwoTimestepParams& params);

inline TaskGraph gen_two_timestep_pattern(std::uint32_t K, Ticks traversal_cost, Ticks straggler_enclave_cost, WaitMode wait_mode) {
   return gen_two_timestep_pattern(TwoTimestepParams{K, traversal_cost, straggler_enclave_cost, wait_mode});
}

} // namespace tasksim
