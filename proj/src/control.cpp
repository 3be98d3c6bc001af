#include "pbnq/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pbnq {

namespace {

int input_count(const StochasticMatrix& p) {
  if (p.cols() % p.rows() != 0) {
    throw DimensionError("transition matrix must be N x N*M, got " + std::to_string(p.rows()) +
                         "x" + std::to_string(p.cols()));
  }
  return p.cols() / p.rows();
}

std::vector<bool> membership(const std::vector<int>& states, int n) {
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (int s : states) {
    if (s < 1 || s > n) {
      throw ValidationError("state " + std::to_string(s) + " out of range 1.." +
                            std::to_string(n));
    }
    in[static_cast<std::size_t>(s - 1)] = true;
  }
  return in;
}

std::vector<int> to_list(const std::vector<bool>& in) {
  std::vector<int> out;
  for (int s = 1; s <= static_cast<int>(in.size()); ++s) {
    if (in[static_cast<std::size_t>(s - 1)]) out.push_back(s);
  }
  return out;
}

// Mass of column x of P(u) lying inside `in`.
double mass_into(const StochasticMatrix& p, int u, int x, const std::vector<bool>& in) {
  double sum = 0.0;
  for (const Entry& e : p.column((u - 1) * p.rows() + x)) {
    if (in[static_cast<std::size_t>(e.row - 1)]) sum += e.value;
  }
  return sum;
}

// Shared fixpoint machinery of stabilizing_sets / synthesize_stabilizer.
StabilizationCertificate stabilization_analysis(const StochasticMatrix& p,
                                                const std::vector<int>& target, double tol,
                                                bool with_feedback) {
  int n = p.rows();
  int m = input_count(p);
  if (target.empty()) throw ValidationError("target state set is empty");

  // Shrink the target to M*: states of the target that can keep the whole
  // mass inside it under some input, iterated to a fixpoint.
  std::vector<bool> m_cur = membership(target, n);
  while (true) {
    std::vector<bool> m_next(static_cast<std::size_t>(n), false);
    bool changed = false;
    for (int x = 1; x <= n; ++x) {
      if (!m_cur[static_cast<std::size_t>(x - 1)]) continue;
      bool keeps = false;
      for (int u = 1; u <= m && !keeps; ++u) {
        keeps = mass_into(p, u, x, m_cur) >= 1.0 - tol;
      }
      m_next[static_cast<std::size_t>(x - 1)] = keeps;
      changed = changed || !keeps;
    }
    m_cur = std::move(m_next);
    if (!changed) break;
  }

  // Grow the chain Z_0 = M*, Z_j = states able to push the whole mass
  // into Z_{j-1} under some input; monotone because M* is a fixpoint.
  std::vector<std::vector<bool>> chain{m_cur};
  for (int guard = 0; guard <= n; ++guard) {
    const std::vector<bool>& prev = chain.back();
    std::vector<bool> next(static_cast<std::size_t>(n), false);
    for (int x = 1; x <= n; ++x) {
      for (int u = 1; u <= m; ++u) {
        if (mass_into(p, u, x, prev) >= 1.0 - tol) {
          next[static_cast<std::size_t>(x - 1)] = true;
          break;
        }
      }
    }
    if (next == prev) break;
    chain.push_back(std::move(next));
  }

  StabilizationCertificate cert;
  cert.m_star = to_list(m_cur);
  for (const auto& z : chain) cert.z_sets.push_back(to_list(z));
  cert.stabilizable =
      std::all_of(chain.back().begin(), chain.back().end(), [](bool b) { return b; });

  if (with_feedback && cert.stabilizable) {
    // Each state of Z_j \ Z_{j-1} (all of Z_1 for j = 1, M* included)
    // gets the smallest input sending its whole mass into Z_{j-1}.
    StateFeedback fb;
    fb.u_of.assign(static_cast<std::size_t>(n), 1);
    std::vector<int> first_layer(static_cast<std::size_t>(n), -1);
    for (std::size_t j = 0; j < chain.size(); ++j) {
      for (int x = 1; x <= n; ++x) {
        if (chain[j][static_cast<std::size_t>(x - 1)] &&
            first_layer[static_cast<std::size_t>(x - 1)] < 0) {
          first_layer[static_cast<std::size_t>(x - 1)] = static_cast<int>(j);
        }
      }
    }
    for (int x = 1; x <= n; ++x) {
      int ref = std::max(first_layer[static_cast<std::size_t>(x - 1)], 1) - 1;
      const std::vector<bool>& prev = chain[static_cast<std::size_t>(ref)];
      for (int u = 1; u <= m; ++u) {
        if (mass_into(p, u, x, prev) >= 1.0 - tol) {
          fb.u_of[static_cast<std::size_t>(x - 1)] = u;
          break;
        }
      }
    }
    cert.feedback = std::move(fb);
  }
  return cert;
}

// Strongly connected components of the support digraph (iterative
// Tarjan); returns the component id per state and whether the component
// is a cycle (size >= 2, or a self-loop).
struct SccResult {
  std::vector<int> component;
  std::vector<bool> on_cycle;  // per state
};

SccResult scc_cycles(const std::vector<std::vector<int>>& succ) {
  int n = static_cast<int>(succ.size());
  SccResult res;
  res.component.assign(static_cast<std::size_t>(n), -1);
  res.on_cycle.assign(static_cast<std::size_t>(n), false);

  std::vector<int> index(static_cast<std::size_t>(n), -1);
  std::vector<int> lowlink(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  int next_index = 0;
  int component_count = 0;

  struct Frame {
    int v;
    std::size_t child;
  };
  for (int start = 0; start < n; ++start) {
    if (index[static_cast<std::size_t>(start)] != -1) continue;
    std::vector<Frame> frames{{start, 0}};
    index[static_cast<std::size_t>(start)] = lowlink[static_cast<std::size_t>(start)] =
        next_index++;
    stack.push_back(start);
    on_stack[static_cast<std::size_t>(start)] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      std::size_t v = static_cast<std::size_t>(f.v);
      if (f.child < succ[v].size()) {
        int w = succ[v][f.child++];
        std::size_t wi = static_cast<std::size_t>(w);
        if (index[wi] == -1) {
          index[wi] = lowlink[wi] = next_index++;
          stack.push_back(w);
          on_stack[wi] = true;
          frames.push_back({w, 0});
        } else if (on_stack[wi]) {
          lowlink[v] = std::min(lowlink[v], index[wi]);
        }
      } else {
        if (lowlink[v] == index[v]) {
          int size = 0;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[static_cast<std::size_t>(w)] = false;
            res.component[static_cast<std::size_t>(w)] = component_count;
            ++size;
            if (w == f.v) break;
          }
          if (size >= 2) {
            for (int w = 0; w < n; ++w) {
              if (res.component[static_cast<std::size_t>(w)] == component_count) {
                res.on_cycle[static_cast<std::size_t>(w)] = true;
              }
            }
          }
          ++component_count;
        }
        int finished = f.v;
        frames.pop_back();
        if (!frames.empty()) {
          std::size_t parent = static_cast<std::size_t>(frames.back().v);
          lowlink[parent] =
              std::min(lowlink[parent], lowlink[static_cast<std::size_t>(finished)]);
        }
      }
    }
  }
  return res;
}

}  // namespace

void CostSpec::validate(int n_states, int n_inputs) const {
  if (horizon < 1) throw ValidationError("horizon must be at least 1");
  if (x0 < 1 || x0 > n_states) {
    throw ValidationError("initial state " + std::to_string(x0) + " out of range 1.." +
                          std::to_string(n_states));
  }
  if (static_cast<int>(stage_cost.size()) != n_inputs) {
    throw ValidationError("stage cost needs one row per input");
  }
  for (const auto& row : stage_cost) {
    if (static_cast<int>(row.size()) != n_states) {
      throw ValidationError("stage cost rows must have one entry per state");
    }
    for (double v : row) {
      if (!std::isfinite(v)) throw ValidationError("stage costs must be finite");
    }
  }
  if (static_cast<int>(terminal_cost.size()) != n_states) {
    throw ValidationError("terminal cost must have one entry per state");
  }
  for (double v : terminal_cost) {
    if (!std::isfinite(v)) throw ValidationError("terminal costs must be finite");
  }
}

StochasticMatrix closed_loop_matrix(const StochasticMatrix& p, const StateFeedback& fb) {
  int n = p.rows();
  int m = input_count(p);
  if (static_cast<int>(fb.u_of.size()) != n) {
    throw DimensionError("feedback must assign an input to each of the " + std::to_string(n) +
                         " states");
  }
  SparseMatrix out(n, n);
  for (int x = 1; x <= n; ++x) {
    int u = fb.u_of[static_cast<std::size_t>(x - 1)];
    if (u < 1 || u > m) {
      throw ValidationError("feedback input " + std::to_string(u) + " out of range 1.." +
                            std::to_string(m));
    }
    out.set_column(x, p.column((u - 1) * n + x));
  }
  return StochasticMatrix(std::move(out), 1.0);
}

StabilizationCertificate stabilizing_sets(const StochasticMatrix& p,
                                          const std::vector<int>& target, double tol) {
  return stabilization_analysis(p, target, tol, false);
}

StabilizationCertificate synthesize_stabilizer(const StochasticMatrix& p,
                                               const std::vector<int>& target, double tol) {
  return stabilization_analysis(p, target, tol, true);
}

bool verify_stabilization(const StochasticMatrix& p_u, const std::vector<int>& target,
                          double tol) {
  int n = p_u.rows();
  if (p_u.cols() != n) {
    throw DimensionError("closed-loop matrix must be square");
  }
  std::vector<bool> in_target = membership(target, n);

  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
  std::vector<bool> self_loop(static_cast<std::size_t>(n), false);
  for (int x = 1; x <= n; ++x) {
    for (const Entry& e : p_u.column(x)) {
      if (e.value > tol) {
        succ[static_cast<std::size_t>(x - 1)].push_back(e.row - 1);
        if (e.row == x) self_loop[static_cast<std::size_t>(x - 1)] = true;
      }
    }
  }

  SccResult scc = scc_cycles(succ);
  // Forward closure of all cycle states (nontrivial SCCs and self-loops).
  std::vector<bool> reached(static_cast<std::size_t>(n), false);
  std::vector<int> queue;
  for (int x = 0; x < n; ++x) {
    if (scc.on_cycle[static_cast<std::size_t>(x)] || self_loop[static_cast<std::size_t>(x)]) {
      reached[static_cast<std::size_t>(x)] = true;
      queue.push_back(x);
    }
  }
  while (!queue.empty()) {
    int x = queue.back();
    queue.pop_back();
    for (int w : succ[static_cast<std::size_t>(x)]) {
      if (!reached[static_cast<std::size_t>(w)]) {
        reached[static_cast<std::size_t>(w)] = true;
        queue.push_back(w);
      }
    }
  }
  for (int x = 0; x < n; ++x) {
    if (reached[static_cast<std::size_t>(x)] && !in_target[static_cast<std::size_t>(x)]) {
      return false;
    }
  }
  return true;
}

StateFeedback lift_feedback(const ProjectionPair& pair, const StateFeedback& fb_quotient) {
  if (static_cast<int>(fb_quotient.u_of.size()) != pair.c.rows()) {
    throw DimensionError("quotient feedback must assign an input to each of the " +
                         std::to_string(pair.c.rows()) + " blocks");
  }
  StateFeedback fb;
  fb.u_of.resize(static_cast<std::size_t>(pair.c.cols()));
  for (int x = 1; x <= pair.c.cols(); ++x) {
    fb.u_of[static_cast<std::size_t>(x - 1)] =
        fb_quotient.u_of[static_cast<std::size_t>(pair.c.target(x) - 1)];
  }
  return fb;
}

DpResult dp_finite_horizon(const StochasticMatrix& p, const CostSpec& costs, double) {
  int n = p.rows();
  int m = input_count(p);
  costs.validate(n, m);
  int t_max = costs.horizon;

  DpResult res;
  res.value.assign(static_cast<std::size_t>(t_max) + 1,
                   std::vector<double>(static_cast<std::size_t>(n)));
  res.policy.horizon = t_max;
  res.policy.u_of.assign(static_cast<std::size_t>(t_max),
                         std::vector<int>(static_cast<std::size_t>(n), 1));
  res.value[static_cast<std::size_t>(t_max)] = costs.terminal_cost;

  for (int t = t_max - 1; t >= 0; --t) {
    const auto& next = res.value[static_cast<std::size_t>(t + 1)];
    for (int x = 1; x <= n; ++x) {
      double best = std::numeric_limits<double>::infinity();
      int best_u = 1;
      for (int u = 1; u <= m; ++u) {
        double expect = 0.0;
        for (const Entry& e : p.column((u - 1) * n + x)) {
          expect += next[static_cast<std::size_t>(e.row - 1)] * e.value;
        }
        double total = costs.stage_cost[static_cast<std::size_t>(u - 1)]
                                       [static_cast<std::size_t>(x - 1)] +
                       expect;
        if (total < best) {  // strict: ties keep the smallest input
          best = total;
          best_u = u;
        }
      }
      res.value[static_cast<std::size_t>(t)][static_cast<std::size_t>(x - 1)] = best;
      res.policy.u_of[static_cast<std::size_t>(t)][static_cast<std::size_t>(x - 1)] = best_u;
    }
  }
  return res;
}

double policy_cost(const StochasticMatrix& p, const Policy& policy, const CostSpec& costs,
                   int x0) {
  int n = p.rows();
  int m = input_count(p);
  costs.validate(n, m);
  if (x0 < 1 || x0 > n) {
    throw ValidationError("initial state " + std::to_string(x0) + " out of range");
  }
  if (policy.horizon != costs.horizon ||
      static_cast<int>(policy.u_of.size()) != costs.horizon) {
    throw ValidationError("policy horizon " + std::to_string(policy.horizon) +
                          " does not match the cost horizon " + std::to_string(costs.horizon));
  }

  std::vector<double> mu(static_cast<std::size_t>(n), 0.0);
  mu[static_cast<std::size_t>(x0 - 1)] = 1.0;
  double total = 0.0;
  for (int t = 0; t < costs.horizon; ++t) {
    const auto& row = policy.u_of[static_cast<std::size_t>(t)];
    if (static_cast<int>(row.size()) != n) {
      throw ValidationError("policy row " + std::to_string(t) +
                            " must assign an input to every state");
    }
    std::vector<double> mu_next(static_cast<std::size_t>(n), 0.0);
    for (int x = 1; x <= n; ++x) {
      double mass = mu[static_cast<std::size_t>(x - 1)];
      if (mass == 0.0) continue;
      int u = row[static_cast<std::size_t>(x - 1)];
      if (u < 1 || u > m) {
        throw ValidationError("policy input " + std::to_string(u) + " out of range 1.." +
                              std::to_string(m));
      }
      total += mass * costs.stage_cost[static_cast<std::size_t>(u - 1)]
                                      [static_cast<std::size_t>(x - 1)];
      for (const Entry& e : p.column((u - 1) * n + x)) {
        mu_next[static_cast<std::size_t>(e.row - 1)] += mass * e.value;
      }
    }
    mu = std::move(mu_next);
  }
  for (int x = 1; x <= n; ++x) {
    total += mu[static_cast<std::size_t>(x - 1)] *
             costs.terminal_cost[static_cast<std::size_t>(x - 1)];
  }
  return total;
}

StabilizeViaQuotientResult stabilize_via_quotient(const StochasticMatrix& p,
                                                  const std::vector<int>& target, double tol) {
  Partition seed = partition_from_target(target, p.rows());
  RefinementResult refined = max_lumpable_refinement(p, seed, tol);
  QuotientSystem quotient = build_quotient(p, refined.partition, tol);

  // The refined partition refines {target, complement}, so the target is
  // a union of blocks.
  std::vector<int> quotient_target;
  {
    std::vector<bool> in_target = membership(target, p.rows());
    for (int b = 1; b <= refined.partition.size(); ++b) {
      if (in_target[static_cast<std::size_t>(refined.partition.block(b).front() - 1)]) {
        quotient_target.push_back(b);
      }
    }
  }

  StabilizationCertificate cert =
      synthesize_stabilizer(quotient.transition(), quotient_target, tol);
  StabilizeViaQuotientResult res{refined.partition, std::move(quotient), std::move(cert),
                                 std::nullopt};
  if (res.certificate.stabilizable) {
    StateFeedback lifted = lift_feedback(res.quotient.pair(), *res.certificate.feedback);
    if (!verify_stabilization(closed_loop_matrix(p, lifted), target, tol)) {
      throw ValidationError("lifted feedback failed closed-loop verification");
    }
    res.feedback = std::move(lifted);
  }
  return res;
}

OptctlViaQuotientResult optctl_via_quotient(const StochasticMatrix& p, const CostSpec& costs,
                                            double tol) {
  int n = p.rows();
  int m = input_count(p);
  costs.validate(n, m);

  Partition seed = relation_from_costs(costs.stage_cost, costs.terminal_cost, tol);
  RefinementResult refined = max_lumpable_refinement(p, seed, tol);
  QuotientSystem quotient = build_quotient(p, refined.partition, tol);
  QuotientCosts qcosts =
      quotient_costs(costs.stage_cost, costs.terminal_cost, quotient.pair(), tol);

  CostSpec quotient_spec;
  quotient_spec.stage_cost = std::move(qcosts.stage_cost);
  quotient_spec.terminal_cost = std::move(qcosts.terminal_cost);
  quotient_spec.horizon = costs.horizon;
  quotient_spec.x0 = project_state(quotient.pair(), costs.x0);

  DpResult dp = dp_finite_horizon(quotient.transition(), quotient_spec, tol);

  Policy lifted;
  lifted.horizon = costs.horizon;
  lifted.u_of.assign(static_cast<std::size_t>(costs.horizon),
                     std::vector<int>(static_cast<std::size_t>(n)));
  for (int t = 0; t < costs.horizon; ++t) {
    for (int x = 1; x <= n; ++x) {
      lifted.u_of[static_cast<std::size_t>(t)][static_cast<std::size_t>(x - 1)] =
          dp.policy.u_of[static_cast<std::size_t>(t)]
                        [static_cast<std::size_t>(quotient.pair().c.target(x) - 1)];
    }
  }

  double optimal =
      dp.value[0][static_cast<std::size_t>(quotient_spec.x0 - 1)];
  return OptctlViaQuotientResult{refined.partition, std::move(quotient), std::move(lifted),
                                 optimal};
}

}  // namespace pbnq
