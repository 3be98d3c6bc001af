#include "pbnq/pbn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pbnq {

void NetworkDef::validate(double tol) const {
  if (state_vars.empty()) throw ValidationError("network has no state variables");
  if (state_vars.size() > 20 || input_vars.size() > 20) {
    throw SizeGuardError("at most 20 state and 20 input variables are supported");
  }
  if (constituents.empty()) throw ValidationError("network has no constituents");
  double sum = 0.0;
  for (const Constituent& c : constituents) {
    if (c.probability <= 0.0) {
      throw ValidationError("constituent probabilities must be positive");
    }
    sum += c.probability;
    if (c.functions.size() != state_vars.size()) {
      throw ValidationError("each constituent needs exactly one function per state variable");
    }
  }
  if (std::abs(sum - 1.0) > tol) {
    throw ValidationError("constituent probabilities sum to " + std::to_string(sum) +
                          ", expected 1");
  }
}

int state_to_index(const std::vector<bool>& bits) {
  if (bits.empty() || bits.size() > 20) {
    throw ValidationError("state width must be in 1..20 bits");
  }
  int index = 1;
  for (bool b : bits) index = 2 * index - (b ? 1 : 0);
  return index;
}

std::vector<bool> index_to_state(int index, int n_bits) {
  if (n_bits < 1 || n_bits > 20) throw ValidationError("state width must be in 1..20 bits");
  int n = 1 << n_bits;
  if (index < 1 || index > n) {
    throw ValidationError("state index " + std::to_string(index) + " out of range 1.." +
                          std::to_string(n));
  }
  std::vector<bool> bits(static_cast<std::size_t>(n_bits));
  int rem = index - 1;
  for (int i = n_bits - 1; i >= 0; --i) {
    bits[static_cast<std::size_t>(i)] = (rem & 1) == 0;
    rem >>= 1;
  }
  return bits;
}

LogicalMatrix bn_to_logical(const NetworkDef& def, int constituent) {
  def.validate();
  if (constituent < 1 || constituent > static_cast<int>(def.constituents.size())) {
    throw ValidationError("constituent index " + std::to_string(constituent) +
                          " out of range");
  }
  const auto& functions =
      def.constituents[static_cast<std::size_t>(constituent - 1)].functions;
  int n = static_cast<int>(def.state_vars.size());
  int m = static_cast<int>(def.input_vars.size());
  int state_count = 1 << n;
  int input_count = 1 << m;
  check_dims(state_count, static_cast<long long>(state_count) * input_count);

  std::vector<int> targets(static_cast<std::size_t>(state_count) * input_count);
  std::vector<bool> values(static_cast<std::size_t>(n + m));
  std::vector<bool> next(static_cast<std::size_t>(n));
  for (int u = 1; u <= input_count; ++u) {
    std::vector<bool> input_bits = m > 0 ? index_to_state(u, m) : std::vector<bool>{};
    for (int i = 0; i < m; ++i) values[static_cast<std::size_t>(n + i)] = input_bits[i];
    for (int x = 1; x <= state_count; ++x) {
      std::vector<bool> state_bits = index_to_state(x, n);
      for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = state_bits[i];
      for (int i = 0; i < n; ++i) next[static_cast<std::size_t>(i)] = functions[i].eval(values);
      targets[static_cast<std::size_t>(u - 1) * state_count + (x - 1)] = state_to_index(next);
    }
  }
  return LogicalMatrix(state_count, std::move(targets));
}

StochasticMatrix transition_matrix(
    const std::vector<std::pair<double, LogicalMatrix>>& constituents, double tol) {
  if (constituents.empty()) throw ValidationError("no constituents given");
  double sum = 0.0;
  for (const auto& [p, f] : constituents) {
    if (p <= 0.0) throw ValidationError("constituent probabilities must be positive");
    sum += p;
    if (f.rows() != constituents.front().second.rows() ||
        f.cols() != constituents.front().second.cols()) {
      throw DimensionError("constituent matrices have mismatched shapes");
    }
  }
  if (std::abs(sum - 1.0) > tol) {
    throw ValidationError("constituent probabilities sum to " + std::to_string(sum) +
                          ", expected 1");
  }
  const LogicalMatrix& first = constituents.front().second;
  SparseMatrix out(first.rows(), first.cols());
  std::vector<double> mass(static_cast<std::size_t>(first.rows()) + 1);
  for (int j = 1; j <= first.cols(); ++j) {
    std::fill(mass.begin(), mass.end(), 0.0);
    for (const auto& [p, f] : constituents) mass[static_cast<std::size_t>(f.target(j))] += p;
    std::vector<Entry> col;
    for (int r = 1; r <= first.rows(); ++r) {
      if (mass[static_cast<std::size_t>(r)] != 0.0) {
        col.push_back({r, mass[static_cast<std::size_t>(r)]});
      }
    }
    out.set_column(j, std::move(col));
  }
  return StochasticMatrix(std::move(out), tol);
}

std::vector<std::pair<double, LogicalMatrix>> decompose(const StochasticMatrix& p,
                                                        double tol) {
  // Mutable copy of the remaining mass per column.
  std::vector<std::vector<Entry>> remaining(static_cast<std::size_t>(p.cols()));
  for (int j = 1; j <= p.cols(); ++j) remaining[static_cast<std::size_t>(j - 1)] = p.column(j);

  std::vector<std::pair<double, LogicalMatrix>> terms;
  double emitted = 0.0;
  while (emitted < 1.0 - tol) {
    std::vector<int> targets(static_cast<std::size_t>(p.cols()));
    double weight = 1.0;
    for (int j = 1; j <= p.cols(); ++j) {
      const auto& col = remaining[static_cast<std::size_t>(j - 1)];
      const Entry* best = nullptr;
      for (const Entry& e : col) {
        if (e.value > tol && (best == nullptr || e.value > best->value)) best = &e;
      }
      if (best == nullptr) {
        throw ValidationError("decompose: column " + std::to_string(j) +
                              " exhausted before the weights summed to 1");
      }
      targets[static_cast<std::size_t>(j - 1)] = best->row;
      weight = std::min(weight, best->value);
    }
    weight = std::min(weight, 1.0 - emitted);
    for (int j = 1; j <= p.cols(); ++j) {
      auto& col = remaining[static_cast<std::size_t>(j - 1)];
      for (Entry& e : col) {
        if (e.row == targets[static_cast<std::size_t>(j - 1)]) {
          e.value -= weight;
          break;
        }
      }
    }
    terms.emplace_back(weight, LogicalMatrix(p.rows(), std::move(targets)));
    emitted += weight;
  }
  return terms;
}

Pbn::Pbn(int n_states, int n_inputs,
         std::vector<std::pair<double, LogicalMatrix>> constituents, double tol)
    : n_states_(n_states),
      n_inputs_(n_inputs),
      constituents_(std::move(constituents)),
      transition_(transition_matrix(constituents_, tol)) {
  if (transition_.rows() != n_states ||
      transition_.cols() != static_cast<long long>(n_states) * n_inputs) {
    throw DimensionError("constituent matrices do not match the declared state/input counts");
  }
}

Pbn Pbn::from_matrix(const StochasticMatrix& p, double tol) {
  if (p.cols() % p.rows() != 0) {
    throw DimensionError("transition matrix must be N x N*M");
  }
  return Pbn(p.rows(), p.cols() / p.rows(), decompose(p, tol), tol);
}

Pbn Pbn::from_network(const NetworkDef& def, double tol) {
  def.validate(tol);
  std::vector<std::pair<double, LogicalMatrix>> constituents;
  for (int i = 1; i <= static_cast<int>(def.constituents.size()); ++i) {
    constituents.emplace_back(def.constituents[static_cast<std::size_t>(i - 1)].probability,
                              bn_to_logical(def, i));
  }
  return Pbn(1 << def.state_vars.size(), 1 << def.input_vars.size(), std::move(constituents),
             tol);
}

StochasticMatrix Pbn::input_block(int u) const {
  return select_input_block(transition_, CanonicalIndex(u, n_inputs_));
}

}  // namespace pbnq
