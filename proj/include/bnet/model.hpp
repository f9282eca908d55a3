#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bnet/potential.hpp"

namespace bnet {

struct Variable {
  std::string name;
  std::vector<std::string> states;
};

// One variable of a network under construction: its states, parent names
// and the conditional probability table P(var | parents), row-major over
// (parents..., var) with parents in list order varying slowest.
struct VariableSpec {
  std::string name;
  std::vector<std::string> states;
  std::vector<std::string> parents;
  std::vector<double> table;
};

struct ValidationIssue {
  ErrorCode code;
  std::string detail;
};
using ValidationReport = std::vector<ValidationIssue>;

// Immutable directed acyclic network of discrete variables with one CPT
// per variable. Safe to share across threads once built.
class Network {
 public:
  // Validates everything and throws Error on the first violation.
  static Network build(std::vector<VariableSpec> spec);

  // Resolves names and table sizes (those must hold for the object to be
  // representable at all) but skips the value checks, so that validate()
  // can report violations instead of throwing. Self-parents are rejected
  // here because their CPT domain cannot be laid out.
  static Network build_unchecked(std::vector<VariableSpec> spec);

  // Lists every violated invariant; empty means valid. Never mutates.
  ValidationReport validate() const;

  std::size_t variable_count() const { return variables_.size(); }
  const Variable& variable(std::uint32_t id) const { return variables_[id]; }
  const std::vector<Variable>& variables() const { return variables_; }
  std::optional<std::uint32_t> find_variable(std::string_view name) const;
  std::optional<std::uint32_t> find_state(std::uint32_t variable,
                                          std::string_view state) const;

  std::uint32_t arity(std::uint32_t id) const {
    return static_cast<std::uint32_t>(variables_[id].states.size());
  }
  DiscreteVar var(std::uint32_t id) const { return {id, arity(id)}; }

  const std::vector<std::uint32_t>& parents(std::uint32_t id) const {
    return parents_[id];
  }
  // Domain: (parents..., id), parents in declared order.
  const Potential& cpt(std::uint32_t id) const { return cpts_[id]; }

  bool acyclic() const { return acyclic_; }
  // Declaration-order-stable topological order; empty when cyclic.
  const std::vector<std::uint32_t>& topological_order() const { return topo_; }

  // Sum over all variables of log2(arity); the size guard used by the
  // enumeration oracle.
  double log2_state_space() const;

 private:
  Network() = default;

  std::vector<Variable> variables_;
  std::vector<std::vector<std::uint32_t>> parents_;
  std::vector<Potential> cpts_;
  std::vector<std::uint32_t> topo_;
  bool acyclic_ = true;
};

}  // namespace bnet
