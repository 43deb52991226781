#include "nnv/smc/smc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "nnv/errors.hpp"

namespace nnv::smc {

namespace {

using Clock = std::chrono::steady_clock;

struct Budget {
    const SmcConfig& config;
    long long lp_calls = 0;
    Clock::time_point start = Clock::now();

    bool exhausted() const {
        if (config.max_lp_calls > 0 && lp_calls >= config.max_lp_calls) {
            return true;
        }
        if (config.time_budget_s > 0.0) {
            double elapsed =
                std::chrono::duration<double>(Clock::now() - start).count();
            if (elapsed >= config.time_budget_s) return true;
        }
        return false;
    }
};

// Adds the half-space constraints of a ccw convex polygon over the two
// variables (vx, vy).
void add_region_membership(LinearConstraintSystem& sys,
                           const geom::ConvexPolygon& region, int vx, int vy) {
    int n = region.size();
    for (int i = 0; i < n; ++i) {
        geom::Point2 p = region.vertex(i);
        geom::Point2 q = region.vertex((i + 1) % n);
        double dx = q.x - p.x;
        double dy = q.y - p.y;
        // Interior of a ccw polygon: cross(q-p, z-p) >= 0.
        sys.add({{vx, -dy}, {vy, dx}}, Relation::ge, p.y * dx - p.x * dy);
    }
}

void add_box_membership(LinearConstraintSystem& sys,
                        const std::vector<abstraction::Interval>& box,
                        int first_var) {
    for (size_t i = 0; i < box.size(); ++i) {
        int v = first_var + static_cast<int>(i);
        sys.add({{v, 1.0}}, Relation::ge, box[i].lo);
        sys.add({{v, 1.0}}, Relation::le, box[i].hi);
    }
}

// Declares t/h variables and adds the affine layer equalities plus the
// guarded ReLU constraints. `input_off` points at the network input block.
void encode_network(MonotoneSmcProblem& problem, const nn::NeuralNetwork& net,
                    int input_off, int u_off) {
    LinearConstraintSystem& sys = problem.base;
    VariableLayout& layout = problem.layout;
    int L = net.hidden_layer_count();

    for (int l = 0; l < L; ++l) {
        int width = net.hidden_width(l);
        int t0 = sys.variable_count();
        for (int j = 0; j < width; ++j) {
            sys.add_variable("t" + std::to_string(l + 1) + "_" +
                             std::to_string(j));
        }
        int h0 = sys.variable_count();
        for (int j = 0; j < width; ++j) {
            sys.add_variable("h" + std::to_string(l + 1) + "_" +
                             std::to_string(j));
        }
        layout.t_off.push_back(t0);
        layout.h_off.push_back(h0);
        layout.layer_width.push_back(width);
    }

    int prev_off = input_off;
    for (int l = 0; l < L; ++l) {
        const nn::Layer& layer = net.layers[l];
        for (int j = 0; j < layer.W.rows; ++j) {
            std::vector<Term> terms{{layout.t_off[l] + j, 1.0}};
            for (int c = 0; c < layer.W.cols; ++c) {
                double w = layer.W.at(j, c);
                if (w != 0.0) terms.push_back({prev_off + c, -w});
            }
            sys.add(std::move(terms), Relation::eq, layer.w[j]);
        }
        prev_off = layout.h_off[l];
    }
    {
        const nn::Layer& out = net.layers[L];
        for (int j = 0; j < out.W.rows; ++j) {
            std::vector<Term> terms{{u_off + j, 1.0}};
            for (int c = 0; c < out.W.cols; ++c) {
                double w = out.W.at(j, c);
                if (w != 0.0) terms.push_back({prev_off + c, -w});
            }
            sys.add(std::move(terms), Relation::eq, out.w[j]);
        }
    }

    // Guarded ReLU phases; strict t < 0 is closed to t <= 0.
    int var = 1;
    for (int l = 0; l < L; ++l) {
        for (int j = 0; j < layout.layer_width[l]; ++j, ++var) {
            int t = layout.t_off[l] + j;
            int h = layout.h_off[l] + j;
            problem.guarded.push_back(
                {var, Constraint{{{h, 1.0}, {t, -1.0}}, Relation::eq, 0.0}});
            problem.guarded.push_back(
                {var, Constraint{{{t, 1.0}}, Relation::ge, 0.0}});
            problem.guarded.push_back(
                {-var, Constraint{{{h, 1.0}}, Relation::eq, 0.0}});
            problem.guarded.push_back(
                {-var, Constraint{{{t, 1.0}}, Relation::le, 0.0}});
        }
    }
    problem.bool_count = var - 1;
}

void add_imaging_equalities(LinearConstraintSystem& sys,
                            const imaging::AffineImagingMap& maps, int x_off,
                            int d_off) {
    for (size_t k = 0; k < maps.lasers.size(); ++k) {
        const imaging::LaserMap& m = maps.lasers[k];
        for (int r = 0; r < 2; ++r) {
            int dv = d_off + 2 * static_cast<int>(k) + r;
            std::vector<Term> terms{{dv, 1.0}};
            if (m.P[r][0] != 0.0) terms.push_back({x_off, -m.P[r][0]});
            if (m.P[r][1] != 0.0) terms.push_back({x_off + 1, -m.P[r][1]});
            sys.add(std::move(terms), Relation::eq, m.Q[r]);
        }
    }
}

}  // namespace

std::vector<int> Conflict::blocking_clause() const {
    std::vector<int> clause;
    clause.reserve(literals.size());
    for (int lit : literals) clause.push_back(-lit);
    return clause;
}

LinearConstraintSystem MonotoneSmcProblem::instantiate(
    const std::vector<int>& literals) const {
    LinearConstraintSystem sys = base;
    for (int lit : literals) {
        for (const GuardedConstraint& g : guarded) {
            if (g.literal == lit) sys.add(g.constraint);
        }
    }
    return sys;
}

std::vector<int> MonotoneSmcProblem::phase_literals(
    const std::vector<bool>& phases) const {
    std::vector<int> lits;
    lits.reserve(bool_count);
    for (int v = 1; v <= bool_count; ++v) {
        lits.push_back(phases[v - 1] ? v : -v);
    }
    return lits;
}

LpResult check_literals(const LinearConstraintSystem& base,
                        const std::vector<int>& literals,
                        const std::vector<GuardedConstraint>& guarded,
                        double tol) {
    LinearConstraintSystem sys = base;
    for (int lit : literals) {
        for (const GuardedConstraint& g : guarded) {
            if (g.literal == lit) sys.add(g.constraint);
        }
    }
    return lp_feasible(sys, tol);
}

Conflict extract_iis(const LinearConstraintSystem& base,
                     const std::vector<int>& literals,
                     const std::vector<GuardedConstraint>& guarded,
                     double tol) {
    LpResult all = check_literals(base, literals, guarded, tol);
    if (all.status == LpResult::Status::feasible) {
        throw NotInfeasible("extract_iis called on a feasible literal set");
    }
    if (all.status == LpResult::Status::numerical_failure) {
        throw NumericalFailure("LP could not certify infeasibility for IIS");
    }

    std::vector<int> kept = literals;
    for (int lit : literals) {
        std::vector<int> trial;
        trial.reserve(kept.size() - 1);
        for (int k : kept) {
            if (k != lit) trial.push_back(k);
        }
        LpResult r = check_literals(base, trial, guarded, tol);
        if (r.infeasible()) kept = std::move(trial);
    }
    return Conflict{std::move(kept)};
}

SmcOutcome smc_solve(const MonotoneSmcProblem& problem,
                     const SmcConfig& config) {
    SmcOutcome out;
    Budget budget{config};

    // Pure LP when the network has no ReLUs.
    if (problem.bool_count == 0) {
        LpResult r = lp_feasible(problem.base, config.lp_tol);
        budget.lp_calls = 1;
        out.lp_calls = 1;
        if (r.status == LpResult::Status::numerical_failure) {
            throw NumericalFailure("LP failed on ReLU-free problem");
        }
        if (r.feasible()) {
            out.status = SmcStatus::sat;
            out.witness = SmcWitness{std::move(r.point), {}};
        } else {
            out.status = SmcStatus::unsat;
        }
        return out;
    }

    SatEngine sat(problem.bool_count);
    for (const auto& clause : problem.learned_clauses) sat.add_clause(clause);

    while (true) {
        if (budget.exhausted()) {
            out.status = SmcStatus::resource_limit;
            out.lp_calls = budget.lp_calls;
            return out;
        }
        if (sat.next_model() == SatEngine::Result::exhausted) {
            out.status = SmcStatus::unsat;
            out.lp_calls = budget.lp_calls;
            return out;
        }
        std::vector<bool> phases = sat.model();
        std::vector<int> literals = problem.phase_literals(phases);
        LpResult r =
            check_literals(problem.base, literals, problem.guarded, config.lp_tol);
        ++budget.lp_calls;
        if (r.status == LpResult::Status::numerical_failure) {
            throw NumericalFailure("LP failed while checking a phase assignment");
        }
        if (r.feasible()) {
            out.status = SmcStatus::sat;
            out.witness = SmcWitness{std::move(r.point), std::move(phases)};
            out.lp_calls = budget.lp_calls;
            return out;
        }
        Conflict conflict =
            extract_iis(problem.base, literals, problem.guarded, config.lp_tol);
        budget.lp_calls += static_cast<long long>(literals.size()) + 1;
        sat.add_clause(conflict.blocking_clause());
        out.conflicts_generated.push_back(std::move(conflict));
    }
}

MonotoneSmcProblem encode_transition_open(const abstraction::Dynamics& dyn,
                                          const abstraction::StateCell& from_cell,
                                          const imaging::AffineImagingMap& maps,
                                          const nn::NeuralNetwork& net) {
    int n = dyn.state_dim();
    int m = dyn.input_dim();
    int two_n_lasers = 2 * maps.laser_count();
    if (n < 2) throw DimensionMismatch("state dimension must be at least 2");
    if (net.input_dim != two_n_lasers) {
        throw DimensionMismatch("network input_dim does not match 2N");
    }
    if (net.output_dim != m) {
        throw DimensionMismatch("network output_dim does not match input count");
    }
    if (dyn.A.cols != n || dyn.B.rows != n) {
        throw DimensionMismatch("dynamics matrices have inconsistent shapes");
    }
    int aux = n - 2;
    if (static_cast<int>(from_cell.box.size()) != aux) {
        throw DimensionMismatch("cell box does not match auxiliary dimensions");
    }

    MonotoneSmcProblem problem;
    LinearConstraintSystem& sys = problem.base;
    VariableLayout& layout = problem.layout;
    layout.state_dim = n;
    layout.input_dim = m;
    layout.image_dim = two_n_lasers;

    layout.x_off = sys.variable_count();
    for (int i = 0; i < n; ++i) sys.add_variable("x" + std::to_string(i + 1));
    layout.x_next_off = sys.variable_count();
    for (int i = 0; i < n; ++i) sys.add_variable("x'" + std::to_string(i + 1));
    layout.u_off = sys.variable_count();
    for (int i = 0; i < m; ++i) sys.add_variable("u" + std::to_string(i + 1));
    layout.d_off = sys.variable_count();
    for (int i = 0; i < two_n_lasers; ++i) {
        sys.add_variable("d" + std::to_string(i + 1));
    }

    add_region_membership(sys, from_cell.region, layout.x_off, layout.x_off + 1);
    add_box_membership(sys, from_cell.box, layout.x_off + 2);

    // x' = A x + B u
    for (int r = 0; r < n; ++r) {
        std::vector<Term> terms{{layout.x_next_off + r, 1.0}};
        for (int c = 0; c < n; ++c) {
            double a = dyn.A.at(r, c);
            if (a != 0.0) terms.push_back({layout.x_off + c, -a});
        }
        for (int c = 0; c < m; ++c) {
            double b = dyn.B.at(r, c);
            if (b != 0.0) terms.push_back({layout.u_off + c, -b});
        }
        sys.add(std::move(terms), Relation::eq, 0.0);
    }

    add_imaging_equalities(sys, maps, layout.x_off, layout.d_off);
    encode_network(problem, net, layout.d_off, layout.u_off);
    return problem;
}

MonotoneSmcProblem encode_transition(const abstraction::Dynamics& dyn,
                                     const abstraction::StateCell& from_cell,
                                     const abstraction::StateCell& to_cell,
                                     const imaging::AffineImagingMap& maps,
                                     const nn::NeuralNetwork& net) {
    if (to_cell.box.size() != from_cell.box.size()) {
        throw DimensionMismatch("cell box does not match auxiliary dimensions");
    }
    MonotoneSmcProblem problem =
        encode_transition_open(dyn, from_cell, maps, net);
    LinearConstraintSystem& sys = problem.base;
    const VariableLayout& layout = problem.layout;
    add_region_membership(sys, to_cell.region, layout.x_next_off,
                          layout.x_next_off + 1);
    add_box_membership(sys, to_cell.box, layout.x_next_off + 2);
    return problem;
}

MonotoneSmcProblem encode_region(const abstraction::StateCell& cell,
                                 const imaging::AffineImagingMap& maps,
                                 const nn::NeuralNetwork& net) {
    int two_n_lasers = 2 * maps.laser_count();
    if (net.input_dim != two_n_lasers) {
        throw DimensionMismatch("network input_dim does not match 2N");
    }
    int aux = static_cast<int>(cell.box.size());
    int n = aux + 2;
    int m = net.output_dim;

    MonotoneSmcProblem problem;
    LinearConstraintSystem& sys = problem.base;
    VariableLayout& layout = problem.layout;
    layout.state_dim = n;
    layout.input_dim = m;
    layout.image_dim = two_n_lasers;

    layout.x_off = sys.variable_count();
    for (int i = 0; i < n; ++i) sys.add_variable("x" + std::to_string(i + 1));
    layout.u_off = sys.variable_count();
    for (int i = 0; i < m; ++i) sys.add_variable("u" + std::to_string(i + 1));
    layout.d_off = sys.variable_count();
    for (int i = 0; i < two_n_lasers; ++i) {
        sys.add_variable("d" + std::to_string(i + 1));
    }

    add_region_membership(sys, cell.region, layout.x_off, layout.x_off + 1);
    add_box_membership(sys, cell.box, layout.x_off + 2);
    add_imaging_equalities(sys, maps, layout.x_off, layout.d_off);
    encode_network(problem, net, layout.d_off, layout.u_off);
    return problem;
}

PreprocessResult preprocess_region(const abstraction::StateCell& cell,
                                   const imaging::AffineImagingMap& maps,
                                   const nn::NeuralNetwork& net,
                                   const SmcConfig& config) {
    MonotoneSmcProblem problem = encode_region(cell, maps, net);
    PreprocessResult out;
    Budget budget{config};

    if (problem.bool_count == 0) {
        LpResult r = lp_feasible(problem.base, config.lp_tol);
        out.lp_calls = 1;
        if (r.feasible()) out.feasible_phases.push_back({});
        out.status = SmcStatus::unsat;  // exhausted trivially
        return out;
    }

    SatEngine sat(problem.bool_count);
    while (true) {
        if (budget.exhausted()) {
            out.status = SmcStatus::resource_limit;
            out.lp_calls = budget.lp_calls;
            return out;
        }
        if (sat.next_model() == SatEngine::Result::exhausted) {
            out.status = SmcStatus::unsat;
            out.lp_calls = budget.lp_calls;
            return out;
        }
        std::vector<bool> phases = sat.model();
        std::vector<int> literals = problem.phase_literals(phases);
        LpResult r =
            check_literals(problem.base, literals, problem.guarded, config.lp_tol);
        ++budget.lp_calls;
        if (r.status == LpResult::Status::numerical_failure) {
            throw NumericalFailure("LP failed during region preprocessing");
        }
        if (r.feasible()) {
            // Block exactly this model and keep enumerating.
            std::vector<int> blocking;
            blocking.reserve(literals.size());
            for (int lit : literals) blocking.push_back(-lit);
            sat.add_clause(std::move(blocking));
            out.feasible_phases.push_back(std::move(phases));
        } else {
            Conflict conflict = extract_iis(problem.base, literals,
                                            problem.guarded, config.lp_tol);
            budget.lp_calls += static_cast<long long>(literals.size()) + 1;
            sat.add_clause(conflict.blocking_clause());
            out.conflicts.push_back(std::move(conflict));
        }
    }
}

}  // namespace nnv::smc
