#ifndef ELFE_SAT_HPP_
#define ELFE_SAT_HPP_

#include <cstdint>
#include <functional>
#include <vector>

namespace elfe {

// Small CDCL solver: two watched literals, first-UIP learning, activity
// ordering, Luby restarts. Literals are DIMACS style: +v / -v with v >= 1.
class SatSolver {
 public:
  enum class Result { kSat, kUnsat, kUnknown };

  int new_var();
  int num_vars() const { return static_cast<int>(assign_.size()); }

  // Returns false once the clause set is known to be unsatisfiable.
  bool add_clause(std::vector<int> lits);

  // `should_stop` is polled every few hundred conflicts.
  Result solve(const std::function<bool()>& should_stop = {});

  // Value of a variable in the last satisfying assignment.
  bool value(int var) const { return assign_[static_cast<std::size_t>(var - 1)] == kTrue; }

  std::uint64_t conflicts() const { return conflicts_; }

 private:
  static constexpr std::int8_t kTrue = 1, kFalse = -1, kUndef = 0;

  struct ClauseData {
    std::vector<int> lits;  // internal literals
    bool learnt = false;
  };

  static int to_internal(int lit) { return lit > 0 ? 2 * (lit - 1) : 2 * (-lit - 1) + 1; }
  static int var_of(int ilit) { return ilit >> 1; }
  static int neg(int ilit) { return ilit ^ 1; }

  std::int8_t lit_value(int ilit) const {
    std::int8_t v = assign_[static_cast<std::size_t>(var_of(ilit))];
    return (ilit & 1) ? static_cast<std::int8_t>(-v) : v;
  }

  void enqueue(int ilit, int reason);
  int propagate();  // conflicting clause index or -1
  void analyze(int conflict, std::vector<int>& learnt, int& backtrack_level);
  void backtrack(int level);
  int pick_branch();
  void bump(int var);
  void heap_insert(int var);
  void heap_up(std::size_t pos);
  void heap_down(std::size_t pos);
  int attach(std::vector<int> lits, bool learnt);

  std::vector<ClauseData> clauses_;
  std::vector<std::vector<int>> watches_;  // per internal literal: clause indexes
  std::vector<std::int8_t> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  std::vector<char> seen_;
  std::vector<std::int8_t> phase_;
  bool unsat_ = false;
  std::uint64_t conflicts_ = 0;
};

}  // namespace elfe

#endif  // ELFE_SAT_HPP_
