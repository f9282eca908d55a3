#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "bnet/model.hpp"
#include "bnet/propagate.hpp"

namespace bnet {

// Brute-force reference implementations. Everything here works on the
// fully enumerated joint with straight loops, independent of the junction
// tree machinery and of the potential algebra, so it can serve as the
// verification standard for the engine.

// Exact full joint, domain = all variables in declaration order,
// row-major (first variable slowest).
struct JointTable {
  std::vector<std::uint32_t> domain;
  std::vector<std::uint32_t> cards;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

// Throws TooLarge when the state space exceeds 2^22 cells.
JointTable enumerate_joint(const Network& net);

struct OracleAnswer {
  Potential posterior;  // normalized joint over the targets, declaration order
  double evidence_probability = 0.0;
};

// Mask the joint with the findings, sum out everything but the targets,
// normalize. Zero evidence mass yields the zero table and probability 0.
OracleAnswer oracle_query(const Network& net, const JointTable& joint,
                          std::span<const Finding> findings,
                          std::span<const std::uint32_t> targets);

// Habbema's surprise index of the configuration (one fixed state per
// listed variable): the total probability of all configurations of the
// same variables that are no more probable than this one. Exponential in
// the number of variables; guarded at 2^16 configurations.
double surprise_index(
    const Network& net, const JointTable& joint,
    std::span<const std::pair<std::uint32_t, std::uint32_t>> configuration);

// Ancestral forward sampling in declaration-stable topological order,
// inverse-CDF per CPT row. Deterministic for a given seed.
std::vector<std::vector<std::uint32_t>> forward_sample(const Network& net,
                                                       std::uint64_t seed,
                                                       std::size_t count);

// --- random test-case generation -----------------------------------------

struct RandomNetworkParams {
  std::uint32_t min_variables = 1;
  std::uint32_t max_variables = 8;
  std::uint32_t max_states = 3;
  std::uint32_t max_parents = 3;
  // Chance that a CPT cell is forced to zero, to exercise the structural
  // zero paths (0/0 handling, impossible evidence).
  double zero_cell_probability = 0.12;
};

// Random DAG + random normalized CPTs. Deterministic given the generator
// state.
Network random_network(std::mt19937_64& rng, const RandomNetworkParams& params);

// Random findings with individually positive priors (so they are legal to
// enter); the conjunction may still be impossible. At most `max_count`
// findings, at most one per variable.
std::vector<Finding> random_findings(std::mt19937_64& rng, const Network& net,
                                     const JointTable& joint,
                                     std::size_t max_count);

}  // namespace bnet
