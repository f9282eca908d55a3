#include "bnet/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bnet {

namespace {

std::size_t domain_size(const std::vector<DiscreteVar>& domain) {
  std::size_t n = 1;
  for (const auto& v : domain) n *= v.arity;
  return n;
}

void check_domain(const std::vector<DiscreteVar>& domain) {
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain[i].arity == 0)
      throw Error(ErrorCode::DomainMismatch,
                  "variable " + std::to_string(domain[i].id) + " has no states");
    for (std::size_t j = i + 1; j < domain.size(); ++j)
      if (domain[i].id == domain[j].id)
        throw Error(ErrorCode::DomainMismatch,
                    "variable " + std::to_string(domain[i].id) +
                        " appears twice in a domain");
  }
}

// Stride of each domain variable of `table` within an iteration over
// `space` (0 where the variable does not occur).
std::vector<std::size_t> strides_in(const std::vector<DiscreteVar>& space,
                                    const Potential& table) {
  std::vector<std::size_t> strides(space.size(), 0);
  for (std::size_t i = 0; i < space.size(); ++i) {
    int pos = table.position_of(space[i].id);
    if (pos < 0) continue;
    if (table.domain()[pos].arity != space[i].arity)
      throw Error(ErrorCode::StateSetMismatch,
                  "variable " + std::to_string(space[i].id) +
                      " has mismatched state counts (" +
                      std::to_string(space[i].arity) + " vs " +
                      std::to_string(table.domain()[pos].arity) + ")");
    strides[i] = table.stride_at(pos);
  }
  return strides;
}

// Odometer over `space` tracking flat offsets into up to two tables.
template <typename CellFn>
void for_each_cell(const std::vector<DiscreteVar>& space,
                   const std::vector<std::size_t>& stride_a,
                   const std::vector<std::size_t>& stride_b, CellFn&& fn) {
  const std::size_t n = space.size();
  const std::size_t total = domain_size(space);
  std::vector<std::uint32_t> digit(n, 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k < total; ++k) {
    fn(k, ia, ib);
    for (std::size_t d = n; d-- > 0;) {
      ++digit[d];
      ia += stride_a[d];
      ib += stride_b[d];
      if (digit[d] < space[d].arity) break;
      ia -= stride_a[d] * space[d].arity;
      ib -= stride_b[d] * space[d].arity;
      digit[d] = 0;
    }
  }
}

}  // namespace

Potential::Potential() : values_(1, 1.0) {}

Potential::Potential(std::vector<DiscreteVar> domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  check_domain(domain_);
  if (values_.size() != domain_size(domain_))
    throw Error(ErrorCode::BadCptShape,
                "table has " + std::to_string(values_.size()) +
                    " cells, domain requires " +
                    std::to_string(domain_size(domain_)));
}

Potential Potential::constant(std::vector<DiscreteVar> domain, double value) {
  check_domain(domain);
  std::vector<double> values(domain_size(domain), value);
  return Potential(std::move(domain), std::move(values));
}

bool Potential::has_variable(std::uint32_t id) const {
  return position_of(id) >= 0;
}

int Potential::position_of(std::uint32_t id) const {
  for (std::size_t i = 0; i < domain_.size(); ++i)
    if (domain_[i].id == id) return static_cast<int>(i);
  return -1;
}

std::size_t Potential::stride_at(int pos) const {
  std::size_t stride = 1;
  for (std::size_t i = domain_.size(); i-- > static_cast<std::size_t>(pos) + 1;)
    stride *= domain_[i].arity;
  return stride;
}

double Potential::sum() const {
  double total = 0.0;
  for (double v : values_) total += v;
  return total;
}

double Potential::at(std::span<const std::uint32_t> states) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < domain_.size(); ++i)
    index = index * domain_[i].arity + states[i];
  return values_[index];
}

Potential multiply(const Potential& phi, const Potential& psi) {
  std::vector<DiscreteVar> space = phi.domain();
  for (const auto& v : psi.domain())
    if (!phi.has_variable(v.id)) space.push_back(v);

  const auto sa = strides_in(space, phi);
  const auto sb = strides_in(space, psi);
  std::vector<double> out(domain_size(space));
  for_each_cell(space, sa, sb, [&](std::size_t k, std::size_t ia, std::size_t ib) {
    out[k] = phi[ia] * psi[ib];
  });
  return Potential(std::move(space), std::move(out));
}

Potential marginalize(const Potential& phi, std::span<const std::uint32_t> keep) {
  for (auto id : keep)
    if (!phi.has_variable(id))
      throw Error(ErrorCode::KeepNotSubset,
                  "variable " + std::to_string(id) + " is not in the domain");

  std::vector<DiscreteVar> space;
  for (const auto& v : phi.domain())
    if (std::find(keep.begin(), keep.end(), v.id) != keep.end())
      space.push_back(v);

  Potential result = Potential::zeros(space);
  const auto sr = strides_in(phi.domain(), result);
  const std::vector<std::size_t> none(phi.domain().size(), 0);
  for_each_cell(phi.domain(), sr, none,
                [&](std::size_t k, std::size_t ir, std::size_t) {
                  result[ir] += phi[k];
                });
  return result;
}

Potential divide(const Potential& phi, const Potential& psi) {
  for (const auto& v : psi.domain())
    if (!phi.has_variable(v.id))
      throw Error(ErrorCode::DomainMismatch,
                  "divisor variable " + std::to_string(v.id) +
                      " is not in the dividend's domain");

  const auto sb = strides_in(phi.domain(), psi);
  const std::vector<std::size_t> none(phi.domain().size(), 0);
  std::vector<double> out(phi.size());
  for_each_cell(phi.domain(), sb, none,
                [&](std::size_t k, std::size_t ib, std::size_t) {
                  const double num = phi[k];
                  const double den = psi[ib];
                  if (den == 0.0) {
                    if (num != 0.0)
                      throw Error(ErrorCode::DivisionByZero,
                                  "positive value over zero at index " +
                                      std::to_string(k));
                    out[k] = 0.0;  // 0/0 convention
                  } else {
                    out[k] = num / den;
                  }
                });
  return Potential(phi.domain(), std::move(out));
}

Potential apply_finding(const Potential& phi, std::uint32_t variable,
                        std::span<const std::uint8_t> mask) {
  const int pos = phi.position_of(variable);
  if (pos < 0)
    throw Error(ErrorCode::VariableNotInDomain,
                "variable " + std::to_string(variable) + " is not in the domain");
  if (mask.size() != phi.domain()[pos].arity)
    throw Error(ErrorCode::BadMaskLength,
                "mask has " + std::to_string(mask.size()) + " entries, variable " +
                    std::to_string(variable) + " has " +
                    std::to_string(phi.domain()[pos].arity) + " states");

  const std::size_t stride = phi.stride_at(pos);
  const std::size_t arity = phi.domain()[pos].arity;
  std::vector<double> out(phi.values().begin(), phi.values().end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::uint32_t state = (k / stride) % arity;
    if (!mask[state]) out[k] = 0.0;
  }
  return Potential(phi.domain(), std::move(out));
}

Normalized normalize(const Potential& phi) {
  const double total = phi.sum();
  if (total == 0.0) return {phi, 0.0};
  std::vector<double> out(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) out[k] = phi[k] / total;
  return {Potential(phi.domain(), std::move(out)), total};
}

double max_abs_difference(const Potential& a, const Potential& b) {
  if (a.domain().size() != b.domain().size())
    throw Error(ErrorCode::DomainMismatch,
                "tables cover different variable sets");
  const auto sb = strides_in(a.domain(), b);
  for (const auto& v : a.domain())
    if (!b.has_variable(v.id))
      throw Error(ErrorCode::DomainMismatch,
                  "tables cover different variable sets");
  double worst = 0.0;
  const std::vector<std::size_t> none(a.domain().size(), 0);
  for_each_cell(a.domain(), sb, none,
                [&](std::size_t k, std::size_t ib, std::size_t) {
                  worst = std::max(worst, std::fabs(a[k] - b[ib]));
                });
  return worst;
}

}  // namespace bnet
