#pragma once

#include <functional>
#include <vector>

#include "nnv/abstraction/types.hpp"
#include "nnv/geometry/partition.hpp"
#include "nnv/geometry/workspace.hpp"
#include "nnv/imaging/imaging.hpp"
#include "nnv/smc/smc.hpp"

namespace nnv::abstraction {

// Finite-state abstraction: fine states, their aggregates, and the transition
// relation. State ids index `states`; the extra id `sink()` stands for
// successors that leave the workspace or the auxiliary bounds and is always
// unsafe.
struct TransitionSystem {
    std::vector<AbstractState> states;
    std::vector<int> state_aggregate;              // state id -> aggregate id
    std::vector<std::vector<int>> aggregate_members;
    std::vector<std::vector<int>> transitions;     // sorted successor lists
    std::vector<int> unsafe0;                      // sorted state ids
    long long resource_limited_pairs = 0;

    int sink() const { return static_cast<int>(states.size()); }
    bool has_transition(int from, int to) const;
};

struct StateSpace {
    std::vector<AbstractState> states;
    std::vector<int> state_aggregate;
    std::vector<std::vector<int>> aggregate_members;

    // Bijection F -> StateCell.
    StateCell cell(const geom::PartitionResult& partition,
                   const StateBounds& bounds, int state_id) const;
    // Index lookup: state id from region index and 1-based box indices.
    int index_of(int region, const std::vector<int>& box) const;

    int state_count() const { return static_cast<int>(states.size()); }
};

// Enumerates F (all regions, including obstacle-interior ones, crossed with
// the epsilon-grid over the auxiliary dimensions) and the aggregate grouping.
StateSpace build_states(const geom::PartitionResult& partition,
                        const StateBounds& bounds);

// States unsafe at step zero. Default rule: obstacle-interior regions plus
// regions with an edge on the workspace boundary. strict_closed additionally
// marks every region whose closure touches an obstacle or the boundary.
std::vector<int> initial_unsafe(const geom::PartitionResult& partition,
                                const geom::WorkspaceSpec& workspace,
                                const StateSpace& space, bool strict_closed);

struct TransitionOptions {
    bool refine_intra = false;
    int workers = 1;
    smc::SmcConfig smc;
};

// Computes the transition relation. Starts complete, prunes per aggregate:
// one query against each aggregate hull, member-level queries only when the
// hull query is satisfiable. Pairs that exhaust the solver budget keep their
// transition. Every state also gets sink checks against each boundary edge
// and auxiliary bound.
TransitionSystem compute_transitions(
    const StateSpace& space, const geom::PartitionResult& partition,
    const StateBounds& bounds, const Dynamics& dyn,
    const nn::NeuralNetwork& net, const geom::WorkspaceSpec& workspace,
    const std::vector<std::optional<imaging::AffineImagingMap>>& maps,
    const std::vector<std::vector<smc::Conflict>>& conflicts_per_region,
    const std::vector<int>& unsafe0, const TransitionOptions& opts = {});

struct FixedPointResult {
    std::vector<int> unsafe;  // sorted, may include sink id
    std::vector<int> safe;    // sorted, excludes sink
    int iterations = 0;
};

// Accumulates predecessors of the unsafe set until nothing changes.
FixedPointResult unsafe_fixed_point(const TransitionSystem& ts);

// Concrete cells of the safe states.
std::vector<StateCell> safe_set(const FixedPointResult& fp,
                                const StateSpace& space,
                                const geom::PartitionResult& partition,
                                const StateBounds& bounds);

struct SimulationResult {
    std::vector<std::vector<double>> trajectory;  // includes x0
    bool safe = true;
    bool out_of_bounds = false;
    int violation_step = -1;
};

// Closed-loop rollout using brute-force LiDAR imaging. Unsafe when a position
// lands on or inside an obstacle, on or outside the boundary, or when an
// auxiliary coordinate leaves its bounds; stops early at the first violation.
SimulationResult simulate(const Dynamics& dyn, const nn::NeuralNetwork& net,
                          const geom::WorkspaceSpec& workspace,
                          const geom::LidarSpec& lidar,
                          const StateBounds& bounds,
                          const std::vector<double>& x0, int steps);

// Fine regions whose closed polygon contains the point (usually one; several
// on shared edges).
std::vector<int> locate_regions(const geom::PartitionResult& partition,
                                geom::Point2 p, double tol = geom::kCoordTol);

// Abstract states related to a concrete state under Q (region containment is
// closed, so boundary points map to every touching cell).
std::vector<int> related_states(const StateSpace& space,
                                const geom::PartitionResult& partition,
                                const StateBounds& bounds,
                                const std::vector<double>& x);

}  // namespace nnv::abstraction
