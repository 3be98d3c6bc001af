#pragma once

#include <optional>
#include <vector>

#include "pbnq/matrix.hpp"
#include "pbnq/partition.hpp"
#include "pbnq/quotient.hpp"

namespace pbnq {

// Time-invariant state feedback: u_of[x-1] is the input applied in state x.
struct StateFeedback {
  std::vector<int> u_of;
};

// Time-varying policy: u_of[t][x-1] is the input at time t (t = 0..T-1).
struct Policy {
  int horizon = 0;
  std::vector<std::vector<int>> u_of;
};

// Stage cost l[u-1][x-1], terminal cost g[x-1], horizon and initial state
// of the finite-horizon problem.
struct CostSpec {
  std::vector<std::vector<double>> stage_cost;
  std::vector<double> terminal_cost;
  int horizon = 1;
  int x0 = 1;

  void validate(int n_states, int n_inputs) const;
};

// Output of the probability-one stabilization analysis. z_sets is the
// increasing chain Z_0 ⊆ Z_1 ⊆ ... up to its fixpoint; the system is
// stabilizable iff the last Z covers every state, and only then is a
// feedback present (when requested from the synthesizer).
struct StabilizationCertificate {
  std::vector<int> m_star;
  std::vector<std::vector<int>> z_sets;
  std::optional<StateFeedback> feedback;
  bool stabilizable = false;
};

// Column x of the closed loop is column x of P(u) with u = fb.u_of[x-1].
StochasticMatrix closed_loop_matrix(const StochasticMatrix& p, const StateFeedback& fb);

// Runs the two fixpoint iterations (the shrinking M_i chain to M*, then
// the growing Z_j chain) without synthesizing a feedback.
StabilizationCertificate stabilizing_sets(const StochasticMatrix& p,
                                          const std::vector<int>& target,
                                          double tol = kDefaultTol);

// Same, plus per-state input choices when stabilizable: each state of
// Z_j \ Z_{j-1} gets the smallest input sending its whole mass into
// Z_{j-1} (Z_0 = M* for the innermost layer).
StabilizationCertificate synthesize_stabilizer(const StochasticMatrix& p,
                                               const std::vector<int>& target,
                                               double tol = kDefaultTol);

// True iff from every initial state all probability mass eventually stays
// inside `target` forever. Decided on the support digraph of the closed
// loop: every state on a cycle, and everything reachable from one, must
// lie inside the target.
bool verify_stabilization(const StochasticMatrix& p_u, const std::vector<int>& target,
                          double tol = kDefaultTol);

// Feedback induced on the parent by composing with the block map.
StateFeedback lift_feedback(const ProjectionPair& pair, const StateFeedback& fb_quotient);

struct DpResult {
  Policy policy;
  // value[t][x-1] for t = 0..T; row T is the terminal cost.
  std::vector<std::vector<double>> value;
};

// Backward dynamic programming over the horizon; argmin ties break to the
// smallest input index.
DpResult dp_finite_horizon(const StochasticMatrix& p, const CostSpec& costs,
                           double tol = kDefaultTol);

// Expected cost of running `policy` from x0: propagates the state
// distribution through the per-step closed-loop matrices.
double policy_cost(const StochasticMatrix& p, const Policy& policy, const CostSpec& costs,
                   int x0);

struct StabilizeViaQuotientResult {
  Partition partition;
  QuotientSystem quotient;
  StabilizationCertificate certificate;  // quotient-level sets
  std::optional<StateFeedback> feedback;  // lifted, present iff stabilizable
};

// Target partition -> maximal lumpable refinement -> quotient ->
// stabilizer on the quotient -> lifted feedback (verified on the parent).
StabilizeViaQuotientResult stabilize_via_quotient(const StochasticMatrix& p,
                                                  const std::vector<int>& target,
                                                  double tol = kDefaultTol);

struct OptctlViaQuotientResult {
  Partition partition;
  QuotientSystem quotient;
  Policy policy;  // lifted to the parent
  double optimal_cost;
};

// Cost partition -> maximal lumpable refinement -> quotient costs -> DP
// on the quotient -> policy lifted through the block map; the returned
// cost is the quotient value at the block of x0.
OptctlViaQuotientResult optctl_via_quotient(const StochasticMatrix& p, const CostSpec& costs,
                                            double tol = kDefaultTol);

}  // namespace pbnq
