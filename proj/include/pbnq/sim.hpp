#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "pbnq/control.hpp"
#include "pbnq/partition.hpp"
#include "pbnq/pbn.hpp"

namespace pbnq {

// One sampled run. states has one more element than inputs and
// constituent_choices.
struct Trajectory {
  std::uint64_t seed = 0;
  std::vector<int> states;
  std::vector<int> inputs;
  std::vector<int> constituent_choices;
};

// Controllers accepted by the simulator: a constant input, a static
// feedback, or a time-varying policy.
using Controller = std::variant<CanonicalIndex, StateFeedback, Policy>;

// splitmix64 step; used only to derive per-run substream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Seed of run `run_index` under `master`: splitmix64 applied to their
// sum, so parallel and serial execution see the same streams.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t run_index);

// Uniform double in [0,1) from the top 53 bits of the generator.
double uniform01(std::mt19937_64& rng);

// Samples the constituent index each step from the switching
// probabilities using mt19937_64 seeded with `seed` (cumulative-sum
// inversion of uniform01, so results are identical across platforms).
Trajectory simulate(const Pbn& pbn, const Controller& controller, int x0, int steps,
                    std::uint64_t seed);

// One-step successor frequencies from x0 under input u over `runs`
// sampled runs (run r uses substream_seed(seed, r)).
std::vector<double> empirical_transition_estimate(const Pbn& pbn, int u, int x0, long runs,
                                                  std::uint64_t seed);

// Exact k-step distribution from a point mass at x0.
std::vector<double> distribution_propagation(const StochasticMatrix& p_u, int x0, int k);

// Enumerates every partition refining the seed (guard: N <= 10) and
// returns the one with fewest blocks whose relation is lumpable.
Partition brute_force_coarsest_lumpable(const StochasticMatrix& p, const Partition& seed,
                                        double tol = kDefaultTol);

// Enumerates every static feedback (guard: M^N <= 2^16) and reports
// whether any closed loop stabilizes to the target.
bool brute_force_stabilizable(const StochasticMatrix& p, const std::vector<int>& target,
                              double tol = kDefaultTol);

// Random instance generators backing the property suites. Probabilities
// are dyadic (multiples of 1/8), so convex combinations and block sums
// stay exact in binary floating point.

// Arbitrary PBN with the given sizes.
Pbn random_pbn(std::mt19937_64& rng, int n_states, int n_inputs, int n_constituents);

// A PBN guaranteed lumpable over a known partition, built by drawing a
// quotient system first and lifting it: every parent column places the
// quotient's block masses on single representatives inside each block.
struct LumpableInstance {
  StochasticMatrix p;
  Partition partition;
  StochasticMatrix quotient_p;
};

LumpableInstance random_lumpable_instance(std::mt19937_64& rng, int n_states, int n_inputs,
                                          int quotient_size);

}  // namespace pbnq
