#include "bnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace bnet {

namespace {

constexpr double kRowSumTolerance = 1e-9;

// Declaration-order-stable Kahn: among the variables whose parents are all
// placed, always pick the lowest id next.
std::vector<std::uint32_t> stable_topo_order(
    const std::vector<std::vector<std::uint32_t>>& parents) {
  const std::size_t n = parents.size();
  std::vector<bool> placed(n, false);
  std::vector<std::uint32_t> order;
  order.reserve(n);
  for (;;) {
    bool progress = false;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (placed[v]) continue;
      bool ready = true;
      for (auto p : parents[v])
        if (!placed[p]) { ready = false; break; }
      if (ready) {
        order.push_back(v);
        placed[v] = true;
        progress = true;
      }
    }
    if (!progress) break;
  }
  if (order.size() != n) order.clear();  // cycle
  return order;
}

}  // namespace

Network Network::build_unchecked(std::vector<VariableSpec> spec) {
  if (spec.empty())
    throw Error(ErrorCode::BadVariable, "network declares no variables");
  Network net;
  std::map<std::string, std::uint32_t> index;
  for (std::uint32_t id = 0; id < spec.size(); ++id) {
    const auto& s = spec[id];
    if (s.name.empty())
      throw Error(ErrorCode::BadVariable, "variable with empty name");
    if (!index.emplace(s.name, id).second)
      throw Error(ErrorCode::DuplicateName,
                  "variable '" + s.name + "' declared twice");
    if (s.states.empty())
      throw Error(ErrorCode::BadVariable,
                  "variable '" + s.name + "' has no states");
    net.variables_.push_back({s.name, s.states});
  }

  for (std::uint32_t id = 0; id < spec.size(); ++id) {
    const auto& s = spec[id];
    std::vector<std::uint32_t> parent_ids;
    std::set<std::uint32_t> seen;
    for (const auto& pname : s.parents) {
      auto it = index.find(pname);
      if (it == index.end())
        throw Error(ErrorCode::UnknownVariable,
                    "parent '" + pname + "' of '" + s.name + "' is not declared");
      if (it->second == id)
        throw Error(ErrorCode::CycleDetected,
                    "variable '" + s.name + "' lists itself as a parent");
      if (!seen.insert(it->second).second)
        throw Error(ErrorCode::DuplicateName,
                    "parent '" + pname + "' of '" + s.name + "' listed twice");
      parent_ids.push_back(it->second);
    }
    net.parents_.push_back(std::move(parent_ids));
  }

  for (std::uint32_t id = 0; id < spec.size(); ++id) {
    std::vector<DiscreteVar> domain;
    std::size_t cells = net.arity(id);
    for (auto p : net.parents_[id]) {
      domain.push_back(net.var(p));
      cells *= net.arity(p);
    }
    domain.push_back(net.var(id));
    if (spec[id].table.size() != cells)
      throw Error(ErrorCode::BadCptShape,
                  "cpt for '" + spec[id].name + "' has " +
                      std::to_string(spec[id].table.size()) +
                      " entries, expected " + std::to_string(cells));
    net.cpts_.emplace_back(std::move(domain), std::move(spec[id].table));
  }

  net.topo_ = stable_topo_order(net.parents_);
  net.acyclic_ = !net.variables_.empty() ? !net.topo_.empty() : true;
  return net;
}

Network Network::build(std::vector<VariableSpec> spec) {
  Network net = build_unchecked(std::move(spec));
  ValidationReport report = net.validate();
  if (!report.empty()) throw Error(report.front().code, report.front().detail);
  return net;
}

ValidationReport Network::validate() const {
  ValidationReport report;

  for (std::uint32_t id = 0; id < variables_.size(); ++id) {
    const Variable& v = variables_[id];
    if (v.states.size() < 2)
      report.push_back({ErrorCode::BadVariable,
                        "variable '" + v.name + "' has " +
                            std::to_string(v.states.size()) +
                            " states, need at least 2"});
    std::set<std::string> names(v.states.begin(), v.states.end());
    if (names.size() != v.states.size())
      report.push_back({ErrorCode::BadVariable,
                        "variable '" + v.name + "' repeats a state name"});
  }

  if (!acyclic_)
    report.push_back({ErrorCode::CycleDetected,
                      "the parent relation has a directed cycle"});

  for (std::uint32_t id = 0; id < variables_.size(); ++id) {
    const Potential& table = cpts_[id];
    const std::size_t row_len = arity(id);
    const std::size_t rows = table.size() / row_len;
    bool negative = false;
    for (double cell : table.values())
      if (cell < 0.0) negative = true;
    if (negative)
      report.push_back({ErrorCode::NegativeValue,
                        "cpt for '" + variables_[id].name +
                            "' contains a negative entry"});
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (std::size_t s = 0; s < row_len; ++s) sum += table[r * row_len + s];
      if (std::fabs(sum - 1.0) > kRowSumTolerance)
        report.push_back(
            {ErrorCode::RowNotNormalized,
             "cpt for '" + variables_[id].name + "', row " + std::to_string(r) +
                 " sums to " + std::to_string(sum)});
    }
  }

  return report;
}

std::optional<std::uint32_t> Network::find_variable(std::string_view name) const {
  for (std::uint32_t id = 0; id < variables_.size(); ++id)
    if (variables_[id].name == name) return id;
  return std::nullopt;
}

std::optional<std::uint32_t> Network::find_state(std::uint32_t variable,
                                                 std::string_view state) const {
  const auto& states = variables_[variable].states;
  for (std::uint32_t s = 0; s < states.size(); ++s)
    if (states[s] == state) return s;
  return std::nullopt;
}

double Network::log2_state_space() const {
  double total = 0.0;
  for (std::uint32_t id = 0; id < variables_.size(); ++id)
    total += std::log2(static_cast<double>(arity(id)));
  return total;
}

}  // namespace bnet
