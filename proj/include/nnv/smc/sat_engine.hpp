#pragma once

#include <cstdint>
#include <vector>

namespace nnv::smc {

// Incremental model enumerator over Boolean indicator variables 1..V.
// Literals use DIMACS signs: +v asserts variable v, -v negates it. Clauses
// may be added between next_model() calls; the search resumes rather than
// restarting. Enumeration walks the full decision tree (lowest variable
// first, false branch first), so repeated next_model() calls yield every
// model of the current clause set exactly once even without blocking clauses.
class SatEngine {
  public:
    explicit SatEngine(int num_vars);

    void add_clause(std::vector<int> lits);

    enum class Result { model, exhausted };
    Result next_model();

    // Valid after next_model() returned model.
    bool value(int var) const { return assign_[var] > 0; }
    std::vector<bool> model() const;

    int var_count() const { return num_vars_; }

  private:
    struct Decision {
        int var;
        int trail_start;
        bool flipped;
    };

    bool enqueue(int lit);
    int propagate();     // returns conflicting clause id or -1
    bool backtrack();    // flips the deepest unflipped decision
    void undo_to(int trail_start);
    bool handle_pending();

    int num_vars_;
    std::vector<std::vector<int>> clauses_;
    std::vector<std::vector<int>> occ_pos_, occ_neg_;  // var -> clause ids
    std::vector<int8_t> assign_;  // 1-based; 0 unknown, +1 true, -1 false
    std::vector<int> trail_;
    size_t prop_head_ = 0;
    std::vector<Decision> decisions_;
    std::vector<int> pending_clauses_;
    bool contradiction_ = false;
    bool have_model_ = false;
};

}  // namespace nnv::smc
