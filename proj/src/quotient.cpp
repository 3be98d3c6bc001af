#include "pbnq/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pbnq {

QuotientSystem::QuotientSystem(int parent_states, ProjectionPair pair,
                               StochasticMatrix p_tilde)
    : parent_states_(parent_states), pair_(std::move(pair)), transition_(std::move(p_tilde)) {
  if (transition_.rows() != pair_.c.rows() || transition_.cols() % transition_.rows() != 0) {
    throw DimensionError("quotient transition matrix shape does not match the projection");
  }
}

StochasticMatrix QuotientSystem::input_block(int u) const {
  return select_input_block(transition_, CanonicalIndex(u, n_inputs()));
}

QuotientSystem build_quotient(const StochasticMatrix& p, const ProjectionPair& pair,
                              double tol) {
  Partition partition = partition_from_projection(pair.c);
  // The section must pick a representative inside each block.
  if (pair.c_tilde.rows() != pair.c.cols() || pair.c_tilde.cols() != pair.c.rows()) {
    throw DimensionError("section matrix shape does not match the projection");
  }
  for (int b = 1; b <= pair.c.rows(); ++b) {
    if (pair.c.target(pair.c_tilde.target(b)) != b) {
      throw ValidationError("section column " + std::to_string(b) +
                            " does not select a state of block " + std::to_string(b));
    }
  }
  return build_quotient(p, partition, pair, tol);
}

QuotientSystem build_quotient(const StochasticMatrix& p, const Partition& partition,
                              double tol) {
  return build_quotient(p, partition, projection_pair(partition), tol);
}

QuotientSystem build_quotient(const StochasticMatrix& p, const Partition& partition,
                              const ProjectionPair& given_pair, double tol) {
  int n = p.rows();
  if (p.cols() % n != 0) {
    throw DimensionError("transition matrix must be N x N*M");
  }
  int m = p.cols() / n;
  if (partition.n_states() != n) {
    throw DimensionError("partition is over " + std::to_string(partition.n_states()) +
                         " states but the matrix has " + std::to_string(n));
  }

  Condition4Verdict verdict = check_condition4(p, partition, tol);
  if (!verdict.holds) {
    const auto& c = *verdict.counterexample;
    throw LumpabilityError(
        "partition is not lumpable: under input " + std::to_string(c.input) + ", states " +
            std::to_string(c.state_a) + " and " + std::to_string(c.state_b) +
            " of a common block reach block " + std::to_string(c.target_block) +
            " with probabilities " + std::to_string(c.prob_a) + " vs " +
            std::to_string(c.prob_b),
        c);
  }

  const ProjectionPair& pair = given_pair;
  int nq = partition.size();
  SparseMatrix out(nq, nq * m);
  std::vector<double> mass(static_cast<std::size_t>(nq) + 1);
  for (int u = 1; u <= m; ++u) {
    for (int j = 1; j <= nq; ++j) {
      // Column j of C·P(u)·C̃: the representative's column of P(u),
      // aggregated by block.
      int rep = pair.c_tilde.target(j);
      std::fill(mass.begin(), mass.end(), 0.0);
      for (const Entry& e : p.column((u - 1) * n + rep)) {
        mass[static_cast<std::size_t>(partition.block_of(e.row))] += e.value;
      }
      std::vector<Entry> col;
      for (int b = 1; b <= nq; ++b) {
        if (mass[static_cast<std::size_t>(b)] != 0.0) {
          col.push_back({b, mass[static_cast<std::size_t>(b)]});
        }
      }
      out.set_column((u - 1) * nq + j, std::move(col));
    }
  }
  return QuotientSystem(n, pair, StochasticMatrix(std::move(out), tol));
}

std::vector<int> lift_state(const ProjectionPair& pair, int q) {
  if (q < 1 || q > pair.c.rows()) {
    throw ValidationError("quotient state " + std::to_string(q) + " out of range 1.." +
                          std::to_string(pair.c.rows()));
  }
  std::vector<int> states;
  for (int x = 1; x <= pair.c.cols(); ++x) {
    if (pair.c.target(x) == q) states.push_back(x);
  }
  return states;
}

int project_state(const ProjectionPair& pair, int x) {
  if (x < 1 || x > pair.c.cols()) {
    throw ValidationError("state " + std::to_string(x) + " out of range 1.." +
                          std::to_string(pair.c.cols()));
  }
  return pair.c.target(x);
}

QuotientCosts quotient_costs(const std::vector<std::vector<double>>& stage_cost,
                             const std::vector<double>& terminal_cost,
                             const ProjectionPair& pair, double tol) {
  int n = pair.c.cols();
  int nq = pair.c.rows();
  if (static_cast<int>(terminal_cost.size()) != n) {
    throw DimensionError("terminal cost table must have one entry per state");
  }
  for (const auto& row : stage_cost) {
    if (static_cast<int>(row.size()) != n) {
      throw DimensionError("stage cost rows must have one entry per state");
    }
  }

  // Costs must be constant on every block for the quotient maps to be
  // well defined.
  for (int x = 1; x <= n; ++x) {
    int b = pair.c.target(x);
    int rep = pair.c_tilde.target(b);
    if (std::abs(terminal_cost[static_cast<std::size_t>(x - 1)] -
                 terminal_cost[static_cast<std::size_t>(rep - 1)]) > tol) {
      throw ValidationError(
          "terminal cost is not constant on block " + std::to_string(b) + ": states " +
          std::to_string(rep) + " and " + std::to_string(x) + " have values " +
          std::to_string(terminal_cost[static_cast<std::size_t>(rep - 1)]) + " vs " +
          std::to_string(terminal_cost[static_cast<std::size_t>(x - 1)]));
    }
    for (std::size_t u = 0; u < stage_cost.size(); ++u) {
      if (std::abs(stage_cost[u][static_cast<std::size_t>(x - 1)] -
                   stage_cost[u][static_cast<std::size_t>(rep - 1)]) > tol) {
        throw ValidationError(
            "stage cost under input " + std::to_string(u + 1) + " is not constant on block " +
            std::to_string(b) + ": states " + std::to_string(rep) + " and " +
            std::to_string(x) + " have values " +
            std::to_string(stage_cost[u][static_cast<std::size_t>(rep - 1)]) + " vs " +
            std::to_string(stage_cost[u][static_cast<std::size_t>(x - 1)]));
      }
    }
  }

  QuotientCosts out;
  out.terminal_cost.resize(static_cast<std::size_t>(nq));
  out.stage_cost.assign(stage_cost.size(), std::vector<double>(static_cast<std::size_t>(nq)));
  for (int b = 1; b <= nq; ++b) {
    int rep = pair.c_tilde.target(b);
    out.terminal_cost[static_cast<std::size_t>(b - 1)] =
        terminal_cost[static_cast<std::size_t>(rep - 1)];
    for (std::size_t u = 0; u < stage_cost.size(); ++u) {
      out.stage_cost[u][static_cast<std::size_t>(b - 1)] =
          stage_cost[u][static_cast<std::size_t>(rep - 1)];
    }
  }
  return out;
}

LogicalMatrix deterministic_quotient(const LogicalMatrix& f, const ProjectionPair& pair) {
  QuotientSystem q = build_quotient(StochasticMatrix::from_logical(f), pair, 0.0);
  const StochasticMatrix& pt = q.transition();
  std::vector<int> targets(static_cast<std::size_t>(pt.cols()));
  for (int j = 1; j <= pt.cols(); ++j) {
    const auto& col = pt.column(j);
    // A non-logical column here means the lumpability check let a
    // violation through.
    if (col.size() != 1 || col[0].value != 1.0) {
      throw ValidationError("quotient of a logical matrix produced a non-logical column " +
                            std::to_string(j));
    }
    targets[static_cast<std::size_t>(j - 1)] = col[0].row;
  }
  return LogicalMatrix(pt.rows(), std::move(targets));
}

}  // namespace pbnq
