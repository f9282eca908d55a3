#include "bnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bnet {

namespace {

constexpr double kMaxJointLog2 = 22.0;
constexpr std::size_t kMaxSurpriseSpace = std::size_t{1} << 16;

// 53-bit uniform in [0, 1); bit-identical across platforms, unlike
// std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint32_t uniform_int(std::mt19937_64& rng, std::uint32_t lo,
                          std::uint32_t hi) {
  return lo + static_cast<std::uint32_t>(uniform01(rng) * (hi - lo + 1));
}

}  // namespace

JointTable enumerate_joint(const Network& net) {
  if (net.log2_state_space() > kMaxJointLog2)
    throw Error(ErrorCode::TooLarge,
                "joint enumeration over more than 2^22 configurations");

  const std::size_t n = net.variable_count();
  JointTable joint;
  joint.domain.resize(n);
  joint.cards.resize(n);
  std::size_t cells = 1;
  for (std::uint32_t v = 0; v < n; ++v) {
    joint.domain[v] = v;
    joint.cards[v] = net.arity(v);
    cells *= net.arity(v);
  }

  // Per-variable stride of each CPT cell inside a full-configuration walk:
  // cpt index = sum over (parents..., child) of state * table stride.
  joint.values.assign(cells, 1.0);
  std::vector<std::uint32_t> config(n, 0);
  for (std::size_t k = 0; k < cells; ++k) {
    double product = 1.0;
    for (std::uint32_t v = 0; v < n; ++v) {
      std::size_t index = 0;
      for (auto p : net.parents(v)) index = index * net.arity(p) + config[p];
      index = index * net.arity(v) + config[v];
      product *= net.cpt(v)[index];
    }
    joint.values[k] = product;
    for (std::size_t d = n; d-- > 0;) {
      if (++config[d] < joint.cards[d]) break;
      config[d] = 0;
    }
  }
  return joint;
}

OracleAnswer oracle_query(const Network& net, const JointTable& joint,
                          std::span<const Finding> findings,
                          std::span<const std::uint32_t> targets) {
  const std::size_t n = joint.domain.size();

  std::vector<std::uint32_t> target_ids(targets.begin(), targets.end());
  std::sort(target_ids.begin(), target_ids.end());
  target_ids.erase(std::unique(target_ids.begin(), target_ids.end()),
                   target_ids.end());
  for (auto t : target_ids)
    if (t >= n)
      throw Error(ErrorCode::UnknownVariable,
                  "no variable with id " + std::to_string(t));

  std::vector<DiscreteVar> out_domain;
  std::size_t out_cells = 1;
  for (auto t : target_ids) {
    out_domain.push_back(net.var(t));
    out_cells *= net.arity(t);
  }
  std::vector<double> out(out_cells, 0.0);

  double mass = 0.0;
  std::vector<std::uint32_t> config(n, 0);
  for (std::size_t k = 0; k < joint.values.size(); ++k) {
    bool allowed = true;
    for (const auto& f : findings)
      if (!f.mask[config[f.variable]]) { allowed = false; break; }
    if (allowed) {
      const double p = joint.values[k];
      mass += p;
      std::size_t index = 0;
      for (auto t : target_ids) index = index * net.arity(t) + config[t];
      out[index] += p;
    }
    for (std::size_t d = n; d-- > 0;) {
      if (++config[d] < joint.cards[d]) break;
      config[d] = 0;
    }
  }

  if (mass > 0.0)
    for (auto& cell : out) cell /= mass;
  else
    std::fill(out.begin(), out.end(), 0.0);
  return {Potential(std::move(out_domain), std::move(out)), mass};
}

double surprise_index(
    const Network& net, const JointTable& joint,
    std::span<const std::pair<std::uint32_t, std::uint32_t>> configuration) {
  std::vector<std::uint32_t> vars;
  for (const auto& [v, s] : configuration) {
    if (v >= net.variable_count())
      throw Error(ErrorCode::UnknownVariable,
                  "no variable with id " + std::to_string(v));
    if (s >= net.arity(v))
      throw Error(ErrorCode::UnknownState,
                  "variable '" + net.variable(v).name + "' has no state " +
                      std::to_string(s));
    vars.push_back(v);
  }
  std::sort(vars.begin(), vars.end());
  if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
    throw Error(ErrorCode::DuplicateName,
                "configuration fixes a variable twice");

  std::size_t space = 1;
  for (auto v : vars) {
    space *= net.arity(v);
    if (space > kMaxSurpriseSpace)
      throw Error(ErrorCode::TooLarge,
                  "surprise index over more than 2^16 configurations");
  }

  // P over Sp(V) by summing the joint.
  std::vector<double> dist(space, 0.0);
  const std::size_t n = joint.domain.size();
  std::vector<std::uint32_t> config(n, 0);
  for (std::size_t k = 0; k < joint.values.size(); ++k) {
    std::size_t index = 0;
    for (auto v : vars) index = index * net.arity(v) + config[v];
    dist[index] += joint.values[k];
    for (std::size_t d = n; d-- > 0;) {
      if (++config[d] < joint.cards[d]) break;
      config[d] = 0;
    }
  }

  std::size_t observed = 0;
  for (auto v : vars) {
    std::uint32_t state = 0;
    for (const auto& [cv, cs] : configuration)
      if (cv == v) state = cs;
    observed = observed * net.arity(v) + state;
  }

  const double pf = dist[observed];
  double index = 0.0;
  for (double p : dist)
    if (p <= pf) index += p;  // "no higher than": closed comparison
  return index;
}

std::vector<std::vector<std::uint32_t>> forward_sample(const Network& net,
                                                       std::uint64_t seed,
                                                       std::size_t count) {
  const auto& order = net.topological_order();
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint32_t>> samples;
  samples.reserve(count);

  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::uint32_t> config(net.variable_count(), 0);
    for (auto v : order) {
      std::size_t row = 0;
      for (auto p : net.parents(v)) row = row * net.arity(p) + config[p];
      const std::size_t base = row * net.arity(v);
      const double u = uniform01(rng);
      double cumulative = 0.0;
      std::uint32_t state = net.arity(v) - 1;  // fp fallback: last state
      for (std::uint32_t s = 0; s < net.arity(v); ++s) {
        cumulative += net.cpt(v)[base + s];
        if (u < cumulative) { state = s; break; }
      }
      config[v] = state;
    }
    samples.push_back(std::move(config));
  }
  return samples;
}

Network random_network(std::mt19937_64& rng, const RandomNetworkParams& params) {
  const std::uint32_t n =
      uniform_int(rng, params.min_variables, params.max_variables);
  std::vector<VariableSpec> spec(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    spec[v].name = "v" + std::to_string(v);
    const std::uint32_t arity = uniform_int(rng, 2, params.max_states);
    for (std::uint32_t s = 0; s < arity; ++s)
      spec[v].states.push_back("s" + std::to_string(s));
  }

  for (std::uint32_t v = 0; v < n; ++v) {
    const std::uint32_t max_parents =
        std::min(params.max_parents, v);  // parents come from earlier ids
    const std::uint32_t parent_count = uniform_int(rng, 0, max_parents);
    std::vector<std::uint32_t> pool(v);
    for (std::uint32_t i = 0; i < v; ++i) pool[i] = i;
    for (std::uint32_t i = 0; i < parent_count; ++i) {
      const std::uint32_t pick =
          uniform_int(rng, i, static_cast<std::uint32_t>(pool.size()) - 1);
      std::swap(pool[i], pool[pick]);
    }
    pool.resize(parent_count);
    std::sort(pool.begin(), pool.end());
    for (auto p : pool) spec[v].parents.push_back(spec[p].name);

    std::size_t rows = 1;
    for (auto p : pool) rows *= spec[p].states.size();
    const std::size_t arity = spec[v].states.size();
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row(arity);
      double sum = 0.0;
      for (auto& cell : row) {
        cell = uniform01(rng) < params.zero_cell_probability
                   ? 0.0
                   : 0.05 + uniform01(rng);
        sum += cell;
      }
      if (sum == 0.0) {  // keep the row a distribution
        row[uniform_int(rng, 0, static_cast<std::uint32_t>(arity) - 1)] = 1.0;
        sum = 1.0;
      }
      for (auto& cell : row) spec[v].table.push_back(cell / sum);
    }
  }
  return Network::build(std::move(spec));
}

std::vector<Finding> random_findings(std::mt19937_64& rng, const Network& net,
                                     const JointTable& joint,
                                     std::size_t max_count) {
  const std::uint32_t n = static_cast<std::uint32_t>(net.variable_count());
  const std::size_t count =
      uniform_int(rng, 0, static_cast<std::uint32_t>(std::min<std::size_t>(max_count, n)));

  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t pick = uniform_int(rng, i, n - 1);
    std::swap(pool[i], pool[pick]);
  }

  std::vector<Finding> findings;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t v = pool[i];
    const std::uint32_t arity = net.arity(v);
    const std::uint32_t ids[1] = {v};
    const Potential prior = oracle_query(net, joint, {}, ids).posterior;

    Finding f;
    f.variable = v;
    f.mask.assign(arity, 0);
    if (uniform01(rng) < 0.25 && arity > 2) {
      // set-style mask over two states
      const std::uint32_t a = uniform_int(rng, 0, arity - 1);
      std::uint32_t b = uniform_int(rng, 0, arity - 1);
      if (a == b) b = (b + 1) % arity;
      f.mask[a] = f.mask[b] = 1;
    } else {
      f.mask[uniform_int(rng, 0, arity - 1)] = 1;
    }

    double p = 0.0;
    for (std::uint32_t s = 0; s < arity; ++s)
      if (f.mask[s]) p += prior[s];
    if (p == 0.0) {
      // pick the most likely state instead so the finding is enterable
      std::uint32_t best = 0;
      for (std::uint32_t s = 1; s < arity; ++s)
        if (prior[s] > prior[best]) best = s;
      f.mask.assign(arity, 0);
      f.mask[best] = 1;
    }
    findings.push_back(std::move(f));
  }
  return findings;
}

}  // namespace bnet
