#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nnv/abstraction/abstraction.hpp"
#include "nnv/geometry/partition.hpp"
#include "nnv/imaging/imaging.hpp"
#include "nnv/smc/smc.hpp"

namespace nnv::io {

// Serialized partition plus per-region imaging maps. Free regions carry one
// {"P", "Q", "edge"} entry per laser.
std::string partition_to_json(
    const geom::PartitionResult& partition,
    const std::vector<std::optional<imaging::AffineImagingMap>>& maps);

// Conflict cache for one region: a JSON array of clauses over signed ReLU
// indicator literals.
std::string conflicts_to_json(const std::vector<smc::Conflict>& conflicts);
std::vector<smc::Conflict> conflicts_from_json_text(const std::string& text);

std::string abstraction_to_json(const abstraction::TransitionSystem& ts,
                                const abstraction::FixedPointResult& fp);

std::string safe_set_to_json(const std::vector<abstraction::StateCell>& cells);

struct PhaseTimes {
    double partition_s = 0.0;
    double preprocess_s = 0.0;
    double transitions_s = 0.0;
    double fixed_point_s = 0.0;
};

struct ReportData {
    int fine_regions = 0;
    int free_regions = 0;
    int aggregate_regions = 0;
    int states = 0;
    long long transitions = 0;
    long long resource_limited_pairs = 0;
    std::vector<int> conflicts_per_region;
    std::vector<int> feasible_phases_per_region;
    int unsafe0 = 0;
    int safe_states = 0;
    int unsafe_states = 0;
    PhaseTimes times;
};

std::string report_to_json(const ReportData& report);
std::string report_to_text(const ReportData& report);

// Dynamics JSON:
// {"A": [[...]], "B": [[...]],
//  "bounds": {"lower": [...], "upper": [...], "epsilon": e}}
struct DynamicsSpec {
    abstraction::Dynamics dynamics;
    abstraction::StateBounds bounds;
};
DynamicsSpec load_dynamics(const std::string& path);
DynamicsSpec dynamics_from_json_text(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace nnv::io
