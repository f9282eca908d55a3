#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bnet/error.hpp"

namespace bnet {

// A discrete variable seen by the table algebra: an id (index into the
// owning network's variable list) plus its number of states. Two
// occurrences of the same id must agree on the arity.
struct DiscreteVar {
  std::uint32_t id = 0;
  std::uint32_t arity = 0;

  friend bool operator==(const DiscreteVar&, const DiscreteVar&) = default;
};

// Dense non-negative table over an ordered list of distinct variables.
// Layout is row-major in domain order: the first domain variable varies
// slowest, the last fastest. The empty domain is the scalar table with a
// single cell. Values are expected to be non-negative; the operations
// below preserve that.
class Potential {
 public:
  // Scalar table holding 1 (the multiplicative identity).
  Potential();

  Potential(std::vector<DiscreteVar> domain, std::vector<double> values);

  static Potential constant(std::vector<DiscreteVar> domain, double value);
  static Potential ones(std::vector<DiscreteVar> domain) {
    return constant(std::move(domain), 1.0);
  }
  static Potential zeros(std::vector<DiscreteVar> domain) {
    return constant(std::move(domain), 0.0);
  }

  const std::vector<DiscreteVar>& domain() const { return domain_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool has_variable(std::uint32_t id) const;
  // Position of `id` within the domain, or -1.
  int position_of(std::uint32_t id) const;
  // Distance between consecutive states of the variable at `pos`.
  std::size_t stride_at(int pos) const;

  double sum() const;

  // Cell lookup by per-domain-variable state indices.
  double at(std::span<const std::uint32_t> states) const;

 private:
  std::vector<DiscreteVar> domain_;
  std::vector<double> values_;
};

struct Normalized {
  Potential table;
  double constant;  // the pre-normalization sum
};

// Pointwise product over the union of the domains. The result domain is
// phi's domain followed by psi's unseen variables in psi order.
Potential multiply(const Potential& phi, const Potential& psi);

// Sum out every variable not in `keep`. The kept variables stay in phi's
// domain order; `keep` is treated as a set.
Potential marginalize(const Potential& phi, std::span<const std::uint32_t> keep);

// Cellwise quotient over phi's domain with the 0/0 = 0 convention.
// psi's domain must be a subset of phi's. A positive numerator over a
// zero denominator is an inconsistent message and throws DivisionByZero.
Potential divide(const Potential& phi, const Potential& psi);

// Zero out every cell whose state of `variable` is masked off.
// mask[s] != 0 keeps state s.
Potential apply_finding(const Potential& phi, std::uint32_t variable,
                        std::span<const std::uint8_t> mask);

// Scale to total mass 1. A zero table comes back unchanged with
// constant 0; the caller decides whether that is an error.
Normalized normalize(const Potential& phi);

// Largest cellwise |a - b| after aligning b's domain order to a's.
// Both tables must cover the same variable set.
double max_abs_difference(const Potential& a, const Potential& b);

}  // namespace bnet
