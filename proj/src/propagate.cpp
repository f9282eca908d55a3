#include "bnet/propagate.hpp"

#include <algorithm>
#include <string>

namespace bnet {

namespace {

std::string default_label(const Network& net, const Finding& f) {
  const Variable& var = net.variable(f.variable);
  std::size_t on = 0;
  for (auto m : f.mask)
    if (m) ++on;
  if (on == 1) {
    for (std::size_t s = 0; s < f.mask.size(); ++s)
      if (f.mask[s]) return var.name + " = " + var.states[s];
  }
  std::string label = var.name + " in {";
  bool first = true;
  for (std::size_t s = 0; s < f.mask.size(); ++s) {
    if (!f.mask[s]) continue;
    if (!first) label += ", ";
    label += var.states[s];
    first = false;
  }
  return label + "}";
}

}  // namespace

AbsorbResult absorb(const Potential& receiver, const Potential& sender,
                    std::span<const std::uint32_t> sepset_vars,
                    const Potential& sepset_table) {
  Potential message = marginalize(sender, sepset_vars);
  Potential belief = multiply(receiver, divide(message, sepset_table));
  return {std::move(belief), std::move(message)};
}

Session::Session(const JunctionTree& tree) : tree_(&tree) {
  const std::size_t clique_count = tree.cliques().size();
  belief_.reserve(clique_count);
  for (const auto& c : tree.cliques()) belief_.push_back(c.belief);
  sep_.reserve(tree.edges().size());
  for (const auto& e : tree.edges()) {
    std::vector<DiscreteVar> domain;
    for (auto v : e.vars) domain.push_back(tree.network().var(v));
    sep_.push_back(Potential::ones(std::move(domain)));
  }

  // No-evidence propagation so priors are readable everywhere.
  build_traversal(tree.auto_root());
  run_collect(/*track_records=*/false);
  run_distribute();

  // Snap to an exactly calibrated prior state: unit-mass beliefs and
  // sepset tables equal to the endpoint marginals.
  for (auto& b : belief_) b = normalize(b).table;
  for (std::size_t e = 0; e < sep_.size(); ++e)
    sep_[e] = normalize(
                  marginalize(belief_[tree.edges()[e].a], tree.edges()[e].vars))
                  .table;

  prior_belief_ = belief_;
  prior_sep_ = sep_;
  prior_marginal_.resize(tree.network().variable_count());
  for (std::uint32_t v = 0; v < prior_marginal_.size(); ++v) {
    const std::uint32_t ids[1] = {v};
    const Potential m =
        normalize(marginalize(belief_[tree.entry_home(v)], ids)).table;
    prior_marginal_[v].assign(m.values().begin(), m.values().end());
  }

  node_record_.assign(clique_count, 1.0);
  node_ratio_.assign(clique_count, 1.0);
  evidence_probability_ = 1.0;
  collected_ = true;
  calibrated_ = true;
}

void Session::enter_finding(Finding finding) {
  const Network& net = tree_->network();
  if (finding.variable >= net.variable_count())
    throw Error(ErrorCode::UnknownVariable,
                "no variable with id " + std::to_string(finding.variable));
  if (finding.mask.size() != net.arity(finding.variable))
    throw Error(ErrorCode::BadMaskLength,
                "mask for '" + net.variable(finding.variable).name + "' has " +
                    std::to_string(finding.mask.size()) + " entries, expected " +
                    std::to_string(net.arity(finding.variable)));
  if (std::all_of(finding.mask.begin(), finding.mask.end(),
                  [](std::uint8_t m) { return m == 0; }))
    throw Error(ErrorCode::AllZeroMask,
                "finding on '" + net.variable(finding.variable).name +
                    "' rules out every state");

  const double prior = prior_probability(finding.variable, finding.mask);
  if (prior == 0.0)
    throw Error(ErrorCode::ZeroPriorFinding,
                "finding on '" + net.variable(finding.variable).name +
                    "' has prior probability 0; conf is undefined for it");

  if (finding.label.empty()) finding.label = default_label(net, finding);
  const int entry = tree_->entry_home(finding.variable);
  findings_.push_back({std::move(finding), prior, entry});
  collected_ = false;
  calibrated_ = false;
}

double Session::prior_probability(std::uint32_t variable,
                                  std::span<const std::uint8_t> mask) const {
  const auto& marginal = prior_marginal_[variable];
  double p = 0.0;
  for (std::size_t s = 0; s < marginal.size(); ++s)
    if (mask[s]) p += marginal[s];
  return p;
}

void Session::build_traversal(int root) {
  const std::size_t n = tree_->cliques().size();
  collect_root_ = root;
  collect_parent_.assign(n, -1);
  collect_children_.assign(n, {});
  collect_order_.clear();
  collect_order_.reserve(n);

  std::vector<bool> seen(n, false);
  collect_order_.push_back(root);
  seen[root] = true;
  for (std::size_t i = 0; i < collect_order_.size(); ++i) {
    const int v = collect_order_[i];
    for (const auto& [u, edge] : tree_->neighbours(v)) {
      if (seen[u]) continue;
      seen[u] = true;
      collect_parent_[u] = v;
      collect_children_[v].push_back(u);
      collect_order_.push_back(u);
    }
  }
}

void Session::run_collect(bool track_records) {
  const auto& edges = tree_->edges();
  std::vector<bool> subtree_evidence(belief_.size(), false);
  if (track_records) {
    node_record_.assign(belief_.size(), 1.0);
    node_ratio_.assign(belief_.size(), 1.0);
    for (const auto& record : findings_)
      subtree_evidence[record.entry_clique] = true;
  }

  auto edge_between = [&](int child, int parent) {
    for (const auto& [u, e] : tree_->neighbours(child))
      if (u == parent) return e;
    return -1;
  };

  // Children sit after their parent in BFS order, so the reverse order is
  // a valid post-order schedule.
  for (std::size_t i = collect_order_.size(); i-- > 0;) {
    const int v = collect_order_[i];
    for (int child : collect_children_[v]) {
      const int e = edge_between(child, v);
      auto [belief, sepset] = absorb(belief_[v], belief_[child], edges[e].vars,
                                     sep_[e]);
      belief_[v] = std::move(belief);
      sep_[e] = std::move(sepset);
      if (subtree_evidence[child]) subtree_evidence[v] = true;
    }
    const double sigma = belief_[v].sum();
    if (track_records) {
      // The empty conjunction has probability 1 by definition; keep it
      // exact rather than taking on rounding noise from the sweep.
      if (!subtree_evidence[v]) {
        node_ratio_[v] = 1.0;
        node_record_[v] = 1.0;
      } else {
        node_ratio_[v] = sigma;
        double record = sigma;
        for (int child : collect_children_[v]) record *= node_record_[child];
        node_record_[v] = record;
      }
    }
    if (sigma > 0.0) belief_[v] = normalize(belief_[v]).table;
  }

  if (track_records) evidence_probability_ = node_record_[collect_root_];
}

void Session::run_distribute() {
  const auto& edges = tree_->edges();
  auto edge_between = [&](int child, int parent) {
    for (const auto& [u, e] : tree_->neighbours(child))
      if (u == parent) return e;
    return -1;
  };

  for (int v : collect_order_) {
    for (int child : collect_children_[v]) {
      const int e = edge_between(child, v);
      auto [belief, sepset] = absorb(belief_[child], belief_[v], edges[e].vars,
                                     sep_[e]);
      belief_[child] = std::move(belief);
      sep_[e] = std::move(sepset);
      const double sigma = belief_[child].sum();
      if (sigma > 0.0) belief_[child] = normalize(belief_[child]).table;
    }
  }
}

void Session::collect_evidence(int root) {
  if (root < 0 || root >= static_cast<int>(tree_->cliques().size()))
    throw Error(ErrorCode::InvalidSession,
                "no clique with id " + std::to_string(root));

  belief_ = prior_belief_;
  sep_ = prior_sep_;
  for (const auto& record : findings_)
    belief_[record.entry_clique] = apply_finding(
        belief_[record.entry_clique], record.finding.variable, record.finding.mask);

  build_traversal(root);
  try {
    run_collect(/*track_records=*/true);
  } catch (const Error& e) {
    // An inconsistent message surfaces as a division error; the session
    // treats it as evidence of probability zero rather than a failure.
    if (e.code() != ErrorCode::DivisionByZero) throw;
    for (auto& b : belief_) b = Potential::zeros(b.domain());
    node_record_.assign(belief_.size(), 0.0);
    node_ratio_.assign(belief_.size(), 0.0);
    evidence_probability_ = 0.0;
  }
  collected_ = true;
  calibrated_ = false;
}

void Session::distribute_evidence(int root) {
  if (!collected_ || root != collect_root_)
    throw Error(ErrorCode::InvalidSession,
                "distribute_evidence requires collect_evidence from the same root");
  run_distribute();
  calibrated_ = true;
}

double Session::evidence_probability() const {
  if (!collected_)
    throw Error(ErrorCode::InvalidSession,
                "evidence_probability requires collect_evidence");
  return evidence_probability_;
}

double Session::node_record(int clique) const {
  if (!collected_)
    throw Error(ErrorCode::InvalidSession,
                "node records require collect_evidence");
  return node_record_[clique];
}

std::vector<double> Session::marginal(std::uint32_t variable) const {
  if (!calibrated_)
    throw Error(ErrorCode::InvalidSession, "session is not calibrated");
  if (variable >= tree_->network().variable_count())
    throw Error(ErrorCode::UnknownVariable,
                "no variable with id " + std::to_string(variable));
  const std::uint32_t ids[1] = {variable};
  const Potential m =
      normalize(marginalize(belief_[tree_->entry_home(variable)], ids)).table;
  return {m.values().begin(), m.values().end()};
}

Potential Session::joint_marginal(
    std::span<const std::uint32_t> variables) const {
  if (!calibrated_)
    throw Error(ErrorCode::InvalidSession, "session is not calibrated");
  const int host = tree_->covering_clique(variables);
  if (host < 0) {
    std::string names;
    for (auto v : variables) {
      if (!names.empty()) names += ", ";
      names += tree_->network().variable(v).name;
    }
    throw Error(ErrorCode::NotCoveredByAnyClique,
                "no clique contains {" + names + "}");
  }
  std::vector<std::uint32_t> sorted(variables.begin(), variables.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return normalize(marginalize(belief_[host], sorted)).table;
}

}  // namespace bnet
