#pragma once

#include <vector>

#include "pbnq/matrix.hpp"
#include "pbnq/partition.hpp"

namespace pbnq {

// The quotient probabilistic Boolean system over the blocks of a lumpable
// partition: per-input blocks P̃(u) = C·P(u)·C̃, assembled into
// P̃ = [P̃(δ_M^1) ... P̃(δ_M^M)].
class QuotientSystem {
 public:
  QuotientSystem(int parent_states, ProjectionPair pair, StochasticMatrix p_tilde);

  int parent_states() const { return parent_states_; }
  int size() const { return pair_.c.rows(); }
  int n_inputs() const { return transition_.cols() / size(); }
  const ProjectionPair& pair() const { return pair_; }
  const StochasticMatrix& transition() const { return transition_; }
  StochasticMatrix input_block(int u) const;

 private:
  int parent_states_;
  ProjectionPair pair_;
  StochasticMatrix transition_;
};

// Builds the quotient after validating lumpability of the partition
// behind `pair`; throws LumpabilityError carrying the counterexample
// otherwise.
QuotientSystem build_quotient(const StochasticMatrix& p, const ProjectionPair& pair,
                              double tol = kDefaultTol);
QuotientSystem build_quotient(const StochasticMatrix& p, const Partition& partition,
                              double tol = kDefaultTol);
QuotientSystem build_quotient(const StochasticMatrix& p, const Partition& partition,
                              const ProjectionPair& given_pair, double tol = kDefaultTol);

// Parent states mapped onto quotient state q, and back.
std::vector<int> lift_state(const ProjectionPair& pair, int q);
int project_state(const ProjectionPair& pair, int x);

struct QuotientCosts {
  std::vector<std::vector<double>> stage_cost;  // [input-1][block-1]
  std::vector<double> terminal_cost;            // [block-1]
};

// Reads one representative per block; validates that costs are constant
// on every block (that is what makes the quotient costs well defined).
QuotientCosts quotient_costs(const std::vector<std::vector<double>>& stage_cost,
                             const std::vector<double>& terminal_cost,
                             const ProjectionPair& pair, double tol = kDefaultTol);

// Quotient of a deterministic network: same construction, with every
// column required to be exactly canonical (no tolerance).
LogicalMatrix deterministic_quotient(const LogicalMatrix& f, const ProjectionPair& pair);

}  // namespace pbnq
