#pragma once

#include <string>
#include <vector>

namespace nnv::smc {

enum class Relation { le, ge, eq };

struct Term {
    int var;
    double coeff;
};

// One closed affine constraint: sum(coeff * var) rel rhs.
struct Constraint {
    std::vector<Term> terms;
    Relation rel = Relation::le;
    double rhs = 0.0;
};

// Pure feasibility system over named real unknowns. No objective.
class LinearConstraintSystem {
  public:
    int add_variable(std::string name);
    int variable_count() const { return static_cast<int>(names_.size()); }
    const std::string& variable_name(int v) const { return names_[v]; }

    void add(Constraint c);
    void add(std::vector<Term> terms, Relation rel, double rhs) {
        add(Constraint{std::move(terms), rel, rhs});
    }

    const std::vector<Constraint>& constraints() const { return constraints_; }

    // Largest violation of any constraint at x (0 when satisfied).
    double max_violation(const std::vector<double>& x) const;

  private:
    std::vector<std::string> names_;
    std::vector<Constraint> constraints_;
};

struct LpResult {
    enum class Status { feasible, infeasible, numerical_failure };
    Status status = Status::numerical_failure;
    std::vector<double> point;    // valid when feasible
    double infeasibility = 0.0;   // phase-one residual; the conflict marker

    bool feasible() const { return status == Status::feasible; }
    bool infeasible() const { return status == Status::infeasible; }
};

// Phase-one simplex feasibility check over free variables. Declares
// infeasibility only when the residual exceeds tol; throws nothing, but a
// stalled or inconsistent run reports Status::numerical_failure rather than
// guessing either way.
LpResult lp_feasible(const LinearConstraintSystem& sys, double tol = 1e-7);

}  // namespace nnv::smc
