#pragma once

#include "tasksim/analysis.hpp"
#include "tasksim/engine.hpp"
#include "tasksim/generators.hpp"
#include "tasksim/policy.hpp"
#include "tasksim/task_graph.hpp"

#include <json.hpp>

#include <map>
#include <string>

namespace tasksim {

using Json = nlohmann::json;
using Meta = std::map<std::string, std::string>;

// All readers throw ParseError on malformed or mistyped input.

Json to_json(const TaskGraph& graph);
TaskGraph graph_from_json(const Json& j);

Json to_json(const PolicyConfig& cfg);
PolicyConfig policy_from_json(const Json& j);

Json to_json(const SimConfig& cfg);
SimConfig sim_config_from_json(const Json& j);

Json to_json(const ScheduleTrace& trace, const Meta& meta = {});
ScheduleTrace trace_from_json(const Json& j);

Json to_json(const AnalysisReport& report, const Meta& meta = {});
Json to_json(const ComparisonReport& report, const Meta& meta = {});

/// Missing keys keep their defaults; unknown keys are rejected.
EnclaveWorkloadParams enclave_params_from_json(const Json& j, EnclaveWorkloadParams base = {});
StarvationParams starvation_params_from_json(const Json& j, StarvationParams base = {});
NestedLoopParams nested_params_from_json(const Json& j, NestedLoopParams base = {});
TwoTimestepParams two_timestep_params_from_json(const Json& j, TwoTimestepParams base = {});

/// `# key=value` header lines, then `thread,task,start,end,kind` rows.
std::string trace_to_csv(const ScheduleTrace& trace, const Meta& meta = {});

/// One row per thread, a rectangle per segment coloured by label prefix,
/// black ticks at Spawned events.
std::string gantt_svg(const TaskGraph& graph, const ScheduleTrace& trace, const Meta& meta = {});

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

std::string to_string(DeferMode mode);
std::string to_string(YieldMode mode);
std::string to_string(WaitMode mode);
DeferMode defer_mode_from_string(const std::string& s);
YieldMode yield_mode_from_string(const std::string& s);
WaitMode wait_mode_from_string(const std::string& s);
PolicyKind policy_kind_from_string(const std::string& s);

} // namespace tasksim
