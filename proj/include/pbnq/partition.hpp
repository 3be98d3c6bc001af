#pragma once

#include <optional>
#include <vector>

#include "pbnq/matrix.hpp"

namespace pbnq {

// Ordered partition of the state indices 1..N. Canonical form: each block
// sorted ascending, blocks ordered by their minimal element, so equal
// partitions have identical representations.
class Partition {
 public:
  static Partition from_blocks(int n_states, std::vector<std::vector<int>> blocks);
  static Partition identity(int n_states);
  static Partition single_block(int n_states);

  int n_states() const { return n_states_; }
  int size() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& block(int b) const;  // b in 1..size()
  int block_of(int state) const;

  // True iff every block of *this is contained in a block of `coarser`.
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition& a, const Partition& b) = default;

 private:
  Partition() = default;
  int n_states_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
};

// N x N relation matrix of the partition's equivalence relation.
ZeroOneMatrix partition_to_relation_matrix(const Partition& p);

// Inverse: groups identical rows. Throws ValidationError naming the
// violating pair/triple if the matrix is not reflexive, symmetric and
// transitive.
Partition relation_matrix_to_partition(const ZeroOneMatrix& a);

// C maps each state to its block label; C_tilde picks the smallest-index
// representative per block, so C·C_tilde = I and C_tilde <= C^T.
struct ProjectionPair {
  LogicalMatrix c;
  LogicalMatrix c_tilde;
};

ProjectionPair projection_pair(const Partition& p);

// Recovers the partition from a projection matrix (column targets of C).
Partition partition_from_projection(const LogicalMatrix& c);

// Witness of a lumpability violation: two states of a common block whose
// aggregate one-step mass into `target_block` differs under `input`.
struct Condition4Counterexample {
  int input;
  int target_block;
  int state_a;
  int state_b;
  double prob_a;
  double prob_b;
};

struct Condition4Verdict {
  bool holds;
  std::optional<Condition4Counterexample> counterexample;
};

// Checks that for every input, states sharing a block have equal
// aggregate transition probability into every block (within tol).
Condition4Verdict check_condition4(const StochasticMatrix& p, const Partition& partition,
                                   double tol = kDefaultTol);

// Lumpability violations found during quotient construction.
class LumpabilityError : public Error {
 public:
  LumpabilityError(const std::string& what, Condition4Counterexample counterexample)
      : Error(what), counterexample(counterexample) {}
  Condition4Counterexample counterexample;
};

struct RefinementResult {
  Partition partition;
  // First k with A_{k+1} = A_k, counting the seed as A_1.
  int fixpoint_index;
};

// Coarsest partition refining `seed` whose relation is lumpable for P:
// iterates A_{k+1} = A_k ∧ B_{k,1} ∧ ... ∧ B_{k,M}, where B_{k,u}
// relates i,j iff columns i and j of A_k·P(u) agree entrywise within
// tol, until the first fixpoint (at most N iterations).
RefinementResult max_lumpable_refinement(const StochasticMatrix& p, const Partition& seed,
                                         double tol = kDefaultTol);

// States share a block iff their terminal costs and stage costs under
// every input agree within tol. l is indexed [input-1][state-1].
Partition relation_from_costs(const std::vector<std::vector<double>>& stage_cost,
                              const std::vector<double>& terminal_cost,
                              double tol = kDefaultTol);

// Two blocks {target, complement}; one block when the target is all of
// 1..N. Throws on an empty target.
Partition partition_from_target(const std::vector<int>& target, int n_states);

}  // namespace pbnq
