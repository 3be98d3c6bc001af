#include "pbnq/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pbnq {

namespace {

// Aggregate one-step mass of state x into each block: sorted sparse
// (block, mass) pairs. This is column x of A·P(u) collapsed to one entry
// per block.
using BlockSignature = std::vector<std::pair<int, double>>;

BlockSignature block_signature(const std::vector<Entry>& column,
                               const std::vector<int>& block_of) {
  BlockSignature sig;
  for (const Entry& e : column) {
    sig.emplace_back(block_of[static_cast<std::size_t>(e.row - 1)], e.value);
  }
  std::sort(sig.begin(), sig.end());
  BlockSignature merged;
  for (const auto& [b, v] : sig) {
    if (!merged.empty() && merged.back().first == b)
      merged.back().second += v;
    else
      merged.emplace_back(b, v);
  }
  return merged;
}

// Entrywise comparison with absent blocks counting as zero mass.
bool signatures_equal(const BlockSignature& a, const BlockSignature& b, double tol) {
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() || ib < b.size()) {
    if (ib == b.size() || (ia < a.size() && a[ia].first < b[ib].first)) {
      if (std::abs(a[ia].second) > tol) return false;
      ++ia;
    } else if (ia == a.size() || b[ib].first < a[ia].first) {
      if (std::abs(b[ib].second) > tol) return false;
      ++ib;
    } else {
      if (std::abs(a[ia].second - b[ib].second) > tol) return false;
      ++ia;
      ++ib;
    }
  }
  return true;
}

double signature_mass(const BlockSignature& sig, int block) {
  for (const auto& [b, v] : sig) {
    if (b == block) return v;
  }
  return 0.0;
}

int input_count(const StochasticMatrix& p) {
  if (p.cols() % p.rows() != 0) {
    throw DimensionError("transition matrix must be N x N*M, got " + std::to_string(p.rows()) +
                         "x" + std::to_string(p.cols()));
  }
  return p.cols() / p.rows();
}

}  // namespace

Partition Partition::from_blocks(int n_states, std::vector<std::vector<int>> blocks) {
  if (n_states < 1) throw ValidationError("partition needs at least one state");
  Partition p;
  p.n_states_ = n_states;
  p.block_of_.assign(static_cast<std::size_t>(n_states), 0);
  for (auto& block : blocks) {
    if (block.empty()) throw ValidationError("partition blocks must be nonempty");
    std::sort(block.begin(), block.end());
    for (int s : block) {
      if (s < 1 || s > n_states) {
        throw ValidationError("state " + std::to_string(s) + " out of range 1.." +
                              std::to_string(n_states));
      }
      if (p.block_of_[static_cast<std::size_t>(s - 1)] != 0) {
        throw ValidationError("state " + std::to_string(s) + " appears in two blocks");
      }
      p.block_of_[static_cast<std::size_t>(s - 1)] = 1;  // mark seen
    }
  }
  for (int s = 1; s <= n_states; ++s) {
    if (p.block_of_[static_cast<std::size_t>(s - 1)] == 0) {
      throw ValidationError("state " + std::to_string(s) + " is not covered by any block");
    }
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  p.blocks_ = std::move(blocks);
  for (int b = 1; b <= p.size(); ++b) {
    for (int s : p.blocks_[static_cast<std::size_t>(b - 1)]) {
      p.block_of_[static_cast<std::size_t>(s - 1)] = b;
    }
  }
  return p;
}

Partition Partition::identity(int n_states) {
  std::vector<std::vector<int>> blocks;
  for (int s = 1; s <= n_states; ++s) blocks.push_back({s});
  return from_blocks(n_states, std::move(blocks));
}

Partition Partition::single_block(int n_states) {
  std::vector<int> all(static_cast<std::size_t>(n_states));
  for (int s = 1; s <= n_states; ++s) all[static_cast<std::size_t>(s - 1)] = s;
  return from_blocks(n_states, {std::move(all)});
}

const std::vector<int>& Partition::block(int b) const {
  if (b < 1 || b > size()) {
    throw ValidationError("block index " + std::to_string(b) + " out of range 1.." +
                          std::to_string(size()));
  }
  return blocks_[static_cast<std::size_t>(b - 1)];
}

int Partition::block_of(int state) const {
  if (state < 1 || state > n_states_) {
    throw ValidationError("state index " + std::to_string(state) + " out of range 1.." +
                          std::to_string(n_states_));
  }
  return block_of_[static_cast<std::size_t>(state - 1)];
}

bool Partition::refines(const Partition& coarser) const {
  if (n_states_ != coarser.n_states_) return false;
  for (const auto& block : blocks_) {
    int target = coarser.block_of(block.front());
    for (int s : block) {
      if (coarser.block_of(s) != target) return false;
    }
  }
  return true;
}

ZeroOneMatrix partition_to_relation_matrix(const Partition& p) {
  ZeroOneMatrix a(p.n_states(), p.n_states());
  for (const auto& block : p.blocks()) {
    for (int i : block) {
      for (int j : block) a.set(i, j, true);
    }
  }
  return a;
}

Partition relation_matrix_to_partition(const ZeroOneMatrix& a) {
  if (a.rows() != a.cols()) {
    throw ValidationError("relation matrix must be square");
  }
  int n = a.rows();
  for (int i = 1; i <= n; ++i) {
    if (!a.get(i, i)) {
      throw ValidationError("relation is not reflexive: (" + std::to_string(i) + "," +
                            std::to_string(i) + ") is 0");
    }
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (a.get(i, j) != a.get(j, i)) {
        throw ValidationError("relation is not symmetric at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
    }
  }
  std::vector<std::vector<int>> blocks;
  std::vector<int> assigned(static_cast<std::size_t>(n), 0);
  for (int i = 1; i <= n; ++i) {
    if (assigned[static_cast<std::size_t>(i - 1)]) continue;
    std::vector<int> block;
    for (int j = i; j <= n; ++j) {
      if (!a.get(i, j)) continue;
      // Transitivity: every member's row must match row i exactly.
      if (!a.rows_equal(i, j)) {
        for (int k = 1; k <= n; ++k) {
          if (a.get(i, k) != a.get(j, k)) {
            throw ValidationError("relation is not transitive: states " + std::to_string(i) +
                                  "," + std::to_string(j) + "," + std::to_string(k) +
                                  " violate it");
          }
        }
      }
      block.push_back(j);
      assigned[static_cast<std::size_t>(j - 1)] = 1;
    }
    blocks.push_back(std::move(block));
  }
  return Partition::from_blocks(n, std::move(blocks));
}

ProjectionPair projection_pair(const Partition& p) {
  std::vector<int> c_targets(static_cast<std::size_t>(p.n_states()));
  for (int s = 1; s <= p.n_states(); ++s) {
    c_targets[static_cast<std::size_t>(s - 1)] = p.block_of(s);
  }
  std::vector<int> section(static_cast<std::size_t>(p.size()));
  for (int b = 1; b <= p.size(); ++b) {
    section[static_cast<std::size_t>(b - 1)] = p.block(b).front();
  }
  return ProjectionPair{LogicalMatrix(p.size(), std::move(c_targets)),
                        LogicalMatrix(p.n_states(), std::move(section))};
}

Partition partition_from_projection(const LogicalMatrix& c) {
  if (!c.full_row_rank()) {
    throw ValidationError("projection matrix must have full row rank");
  }
  std::vector<std::vector<int>> blocks(static_cast<std::size_t>(c.rows()));
  for (int j = 1; j <= c.cols(); ++j) {
    blocks[static_cast<std::size_t>(c.target(j) - 1)].push_back(j);
  }
  return Partition::from_blocks(c.cols(), std::move(blocks));
}

Condition4Verdict check_condition4(const StochasticMatrix& p, const Partition& partition,
                                   double tol) {
  int n = p.rows();
  int m = input_count(p);
  if (partition.n_states() != n) {
    throw DimensionError("partition is over " + std::to_string(partition.n_states()) +
                         " states but the matrix has " + std::to_string(n));
  }
  std::vector<int> block_of(static_cast<std::size_t>(n));
  for (int s = 1; s <= n; ++s) block_of[static_cast<std::size_t>(s - 1)] = partition.block_of(s);

  for (int u = 1; u <= m; ++u) {
    std::vector<BlockSignature> sig(static_cast<std::size_t>(n));
    for (int x = 1; x <= n; ++x) {
      sig[static_cast<std::size_t>(x - 1)] = block_signature(p.column((u - 1) * n + x), block_of);
    }
    for (const auto& block : partition.blocks()) {
      for (std::size_t i = 0; i + 1 < block.size(); ++i) {
        for (std::size_t j = i + 1; j < block.size(); ++j) {
          const auto& sa = sig[static_cast<std::size_t>(block[i] - 1)];
          const auto& sb = sig[static_cast<std::size_t>(block[j] - 1)];
          if (signatures_equal(sa, sb, tol)) continue;
          for (int b = 1; b <= partition.size(); ++b) {
            double va = signature_mass(sa, b);
            double vb = signature_mass(sb, b);
            if (std::abs(va - vb) > tol) {
              return {false,
                      Condition4Counterexample{u, b, block[i], block[j], va, vb}};
            }
          }
        }
      }
    }
  }
  return {true, std::nullopt};
}

RefinementResult max_lumpable_refinement(const StochasticMatrix& p, const Partition& seed,
                                         double tol) {
  int n = p.rows();
  int m = input_count(p);
  if (seed.n_states() != n) {
    throw DimensionError("seed partition is over " + std::to_string(seed.n_states()) +
                         " states but the matrix has " + std::to_string(n));
  }

  Partition current = seed;
  ZeroOneMatrix a = partition_to_relation_matrix(current);
  int k = 1;
  while (true) {
    std::vector<int> block_of(static_cast<std::size_t>(n));
    for (int s = 1; s <= n; ++s) block_of[static_cast<std::size_t>(s - 1)] = current.block_of(s);

    ZeroOneMatrix next = a;
    for (int u = 1; u <= m; ++u) {
      // Group states whose columns of A_k·P(u) agree within tol. Grouping
      // against the first matching representative keeps the relation
      // transitive under floating point.
      std::vector<BlockSignature> sig(static_cast<std::size_t>(n));
      for (int x = 1; x <= n; ++x) {
        sig[static_cast<std::size_t>(x - 1)] =
            block_signature(p.column((u - 1) * n + x), block_of);
      }
      std::vector<int> group_of(static_cast<std::size_t>(n), 0);
      std::vector<std::vector<int>> groups;
      std::vector<int> reps;
      for (int x = 1; x <= n; ++x) {
        bool placed = false;
        for (std::size_t g = 0; g < reps.size(); ++g) {
          if (signatures_equal(sig[static_cast<std::size_t>(x - 1)],
                               sig[static_cast<std::size_t>(reps[g] - 1)], tol)) {
            groups[g].push_back(x);
            placed = true;
            break;
          }
        }
        if (!placed) {
          reps.push_back(x);
          groups.push_back({x});
        }
      }
      ZeroOneMatrix b_u(n, n);
      for (const auto& group : groups) {
        for (int i : group) {
          for (int j : group) b_u.set(i, j, true);
        }
      }
      next = meet(next, b_u);
    }
    if (next == a) break;
    a = next;
    current = relation_matrix_to_partition(a);
    ++k;
  }
  return RefinementResult{current, k};
}

Partition relation_from_costs(const std::vector<std::vector<double>>& stage_cost,
                              const std::vector<double>& terminal_cost, double tol) {
  int n = static_cast<int>(terminal_cost.size());
  if (n < 1) throw ValidationError("terminal cost table is empty");
  for (const auto& row : stage_cost) {
    if (static_cast<int>(row.size()) != n) {
      throw ValidationError("stage cost rows must have one entry per state");
    }
  }
  auto same_costs = [&](int x, int y) {
    if (std::abs(terminal_cost[static_cast<std::size_t>(x - 1)] -
                 terminal_cost[static_cast<std::size_t>(y - 1)]) > tol) {
      return false;
    }
    for (const auto& row : stage_cost) {
      if (std::abs(row[static_cast<std::size_t>(x - 1)] - row[static_cast<std::size_t>(y - 1)]) >
          tol) {
        return false;
      }
    }
    return true;
  };
  std::vector<std::vector<int>> blocks;
  std::vector<int> reps;
  for (int x = 1; x <= n; ++x) {
    bool placed = false;
    for (std::size_t g = 0; g < reps.size(); ++g) {
      if (same_costs(x, reps[g])) {
        blocks[g].push_back(x);
        placed = true;
        break;
      }
    }
    if (!placed) {
      reps.push_back(x);
      blocks.push_back({x});
    }
  }
  return Partition::from_blocks(n, std::move(blocks));
}

Partition partition_from_target(const std::vector<int>& target, int n_states) {
  if (target.empty()) throw ValidationError("target state set is empty");
  std::vector<bool> in_target(static_cast<std::size_t>(n_states), false);
  for (int s : target) {
    if (s < 1 || s > n_states) {
      throw ValidationError("target state " + std::to_string(s) + " out of range 1.." +
                            std::to_string(n_states));
    }
    in_target[static_cast<std::size_t>(s - 1)] = true;
  }
  std::vector<int> inside, outside;
  for (int s = 1; s <= n_states; ++s) {
    (in_target[static_cast<std::size_t>(s - 1)] ? inside : outside).push_back(s);
  }
  std::vector<std::vector<int>> blocks{std::move(inside)};
  if (!outside.empty()) blocks.push_back(std::move(outside));
  return Partition::from_blocks(n_states, std::move(blocks));
}

}  // namespace pbnq
