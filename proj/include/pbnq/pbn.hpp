#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pbnq/boolexpr.hpp"
#include "pbnq/matrix.hpp"

namespace pbnq {

// A network given as Boolean update rules: one expression per state
// variable and constituent, plus the switching probabilities. The
// expression vocabulary is state_vars followed by input_vars; the order
// of state_vars defines bit significance (first variable = most
// significant), and the same convention applies to inputs.
struct NetworkDef {
  struct Constituent {
    double probability;
    std::vector<BooleanExpr> functions;  // one per state variable
  };

  std::vector<std::string> state_vars;
  std::vector<std::string> input_vars;
  std::vector<Constituent> constituents;

  void validate(double tol = kDefaultTol) const;
};

// Index of the canonical vector identifying a tuple of Boolean variables:
// 1 + sum_i (1 - X_i) * 2^(n-i), so the all-ones tuple maps to 1 and the
// all-zeros tuple to 2^n.
int state_to_index(const std::vector<bool>& bits);

// Inverse of state_to_index.
std::vector<bool> index_to_state(int index, int n_bits);

// The N x NM logical matrix of one constituent, columns ordered so that
// column (u-1)*N + x holds the successor of state x under input u.
LogicalMatrix bn_to_logical(const NetworkDef& def, int constituent);

// Convex combination P = sum_i p_i F_i of the constituent matrices.
StochasticMatrix transition_matrix(
    const std::vector<std::pair<double, LogicalMatrix>>& constituents,
    double tol = kDefaultTol);

// Writes a column-stochastic matrix as a convex combination of logical
// matrices. Greedy: each round selects, per column, the largest remaining
// entry (ties -> smallest row index), emits that logical matrix with
// weight equal to the smallest selected entry, and subtracts. Each round
// zeroes at least one entry, so at most nnz rounds occur.
std::vector<std::pair<double, LogicalMatrix>> decompose(const StochasticMatrix& p,
                                                        double tol = kDefaultTol);

// A probabilistic Boolean system: constituent logical matrices with
// switching probabilities and the cached transition matrix P. State and
// input counts need not be powers of two (quotients are not).
class Pbn {
 public:
  Pbn(int n_states, int n_inputs, std::vector<std::pair<double, LogicalMatrix>> constituents,
      double tol = kDefaultTol);

  // Recovers constituents from a bare transition matrix via decompose.
  static Pbn from_matrix(const StochasticMatrix& p, double tol = kDefaultTol);

  static Pbn from_network(const NetworkDef& def, double tol = kDefaultTol);

  int n_states() const { return n_states_; }
  int n_inputs() const { return n_inputs_; }
  const std::vector<std::pair<double, LogicalMatrix>>& constituents() const {
    return constituents_;
  }
  const StochasticMatrix& transition() const { return transition_; }

  // P(u) = P ⋉ δ_M^u.
  StochasticMatrix input_block(int u) const;

 private:
  int n_states_;
  int n_inputs_;
  std::vector<std::pair<double, LogicalMatrix>> constituents_;
  StochasticMatrix transition_;
};

}  // namespace pbnq
