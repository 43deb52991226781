#pragma once

#include <optional>
#include <vector>

#include "nnv/abstraction/types.hpp"
#include "nnv/imaging/imaging.hpp"
#include "nnv/network/network.hpp"
#include "nnv/smc/linear_system.hpp"
#include "nnv/smc/sat_engine.hpp"

namespace nnv::smc {

// A set of ReLU indicator literals (DIMACS signs, variable = cumulative ReLU
// index) that is jointly infeasible with the base constraint system.
struct Conflict {
    std::vector<int> literals;

    // The clause that blocks this conflict in the Boolean search.
    std::vector<int> blocking_clause() const;
};

struct GuardedConstraint {
    int literal;  // the constraint is active when this literal holds
    Constraint constraint;
};

// Offsets of the encoded real variables inside the witness vector.
struct VariableLayout {
    int state_dim = 0;
    int input_dim = 0;
    int image_dim = 0;              // 2N
    int x_off = -1;
    int x_next_off = -1;            // -1 in the reduced (region-only) encoding
    int u_off = -1;
    int d_off = -1;
    std::vector<int> t_off;         // per hidden layer
    std::vector<int> h_off;
    std::vector<int> layer_width;
};

// Boolean ReLU indicators coupled to a linear constraint system. Literal +v
// activates {h=t, t>=0} for ReLU v, literal -v activates {h=0, t<=0}.
struct MonotoneSmcProblem {
    LinearConstraintSystem base;
    int bool_count = 0;
    std::vector<GuardedConstraint> guarded;
    std::vector<std::vector<int>> learned_clauses;
    VariableLayout layout;

    // Base plus the guarded constraints activated by the given literals.
    LinearConstraintSystem instantiate(const std::vector<int>& literals) const;
    // All bool_count literals implied by a full phase assignment.
    std::vector<int> phase_literals(const std::vector<bool>& phases) const;
};

enum class SmcStatus { sat, unsat, resource_limit };

struct SmcWitness {
    std::vector<double> reals;
    std::vector<bool> phases;
};

struct SmcOutcome {
    SmcStatus status = SmcStatus::unsat;
    std::optional<SmcWitness> witness;
    std::vector<Conflict> conflicts_generated;
    long long lp_calls = 0;
};

struct SmcConfig {
    double lp_tol = 1e-7;
    long long max_lp_calls = 0;  // 0 = unlimited
    double time_budget_s = 0.0;  // 0 = unlimited
};

// Linear feasibility of base + guarded(literals).
LpResult check_literals(const LinearConstraintSystem& base,
                        const std::vector<int>& literals,
                        const std::vector<GuardedConstraint>& guarded,
                        double tol);

// Deletion-filter conflict extraction: drops every literal whose removal
// keeps the system infeasible. The result is minimal with respect to single
// deletions. Throws NotInfeasible when the input literals are feasible.
Conflict extract_iis(const LinearConstraintSystem& base,
                     const std::vector<int>& literals,
                     const std::vector<GuardedConstraint>& guarded,
                     double tol = 1e-7);

// SAT-modulo-LP search: enumerate phase assignments, check each against the
// convex side, learn an IIS conflict clause per failure, stop at the first
// feasible assignment or Boolean exhaustion.
SmcOutcome smc_solve(const MonotoneSmcProblem& problem,
                     const SmcConfig& config = {});

// Transition-feasibility encoding between two cells: region membership and
// box bounds for both endpoint states, dynamics, the imaging map of the
// source region, and the network layer equalities, with two guarded
// constraints per ReLU polarity. Strict inequalities are closed.
MonotoneSmcProblem encode_transition(const abstraction::Dynamics& dyn,
                                     const abstraction::StateCell& from_cell,
                                     const abstraction::StateCell& to_cell,
                                     const imaging::AffineImagingMap& maps,
                                     const nn::NeuralNetwork& net);

// Same encoding with no constraint on the successor state; callers constrain
// the block at layout.x_next_off themselves (used for workspace-exit checks).
MonotoneSmcProblem encode_transition_open(const abstraction::Dynamics& dyn,
                                          const abstraction::StateCell& from_cell,
                                          const imaging::AffineImagingMap& maps,
                                          const nn::NeuralNetwork& net);

// Reduced encoding for per-region preprocessing: source membership, imaging,
// and network only (no dynamics, no target cell).
MonotoneSmcProblem encode_region(const abstraction::StateCell& cell,
                                 const imaging::AffineImagingMap& maps,
                                 const nn::NeuralNetwork& net);

struct PreprocessResult {
    std::vector<std::vector<bool>> feasible_phases;
    std::vector<Conflict> conflicts;
    SmcStatus status = SmcStatus::unsat;  // resource_limit when budget hit
    long long lp_calls = 0;
};

// Enumerates every feasible ReLU phase assignment over one region by adding
// a blocking clause per model and an IIS conflict clause per infeasible
// probe, until the Boolean space is exhausted.
PreprocessResult preprocess_region(const abstraction::StateCell& cell,
                                   const imaging::AffineImagingMap& maps,
                                   const nn::NeuralNetwork& net,
                                   const SmcConfig& config = {});

}  // namespace nnv::smc
