#include "bnet/conflict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bnet {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Magnitudes below this are rounding noise from the sweep, not signal; a
// single finding or a set of independent findings must come out as
// exactly zero conflict.
constexpr double kConfSnap = 1e-12;

// log2(prior_product / joint) with the sentinel conventions used across
// the trace: an impossible conjunction under possible parts is +infinity;
// once the zero has been accounted for deeper in the tree both sides are
// zero and the node contributes nothing.
double conf_term(double prior_product, double joint) {
  if (joint == 0.0) return prior_product > 0.0 ? kInfinity : 0.0;
  const double value = std::log2(prior_product / joint);
  return std::fabs(value) < kConfSnap ? 0.0 : value;
}

}  // namespace

double compute_conf(std::span<const double> priors, double joint) {
  double product = 1.0;
  for (double p : priors) {
    if (p == 0.0)
      throw Error(ErrorCode::ZeroPrior,
                  "a finding with prior probability 0 makes conf undefined");
    product *= p;
  }
  if (joint == 0.0) return kInfinity;
  return std::log2(product / joint);
}

ConflictTrace conflict_trace(const Session& session, int root) {
  if (!session.collected() || session.collect_root() != root)
    throw Error(ErrorCode::InvalidSession,
                "conflict_trace requires collect_evidence from the same root");

  const auto& cliques = session.tree().cliques();
  ConflictTrace trace;
  trace.root = root;
  trace.no_findings = session.findings().empty();
  trace.evidence_probability = session.evidence_probability();
  trace.inconsistent = trace.evidence_probability == 0.0;
  trace.nodes.resize(cliques.size());

  for (const auto& c : cliques) {
    ConflictNode& node = trace.nodes[c.id];
    node.clique = c.id;
    node.parent = session.collect_parent(c.id);
    node.children = session.collect_children(c.id);
  }

  std::vector<double> own_prior_product(cliques.size(), 1.0);
  for (const auto& record : session.findings()) {
    ConflictNode& node = trace.nodes[record.entry_clique];
    node.own_finding_labels.push_back(record.finding.label);
    own_prior_product[record.entry_clique] *= record.prior;
    trace.prior_product *= record.prior;
  }

  // Bottom-up over the collect traversal: children precede parents when
  // walking the BFS order backwards, which the session exposes through
  // collect_children of each node.
  std::vector<int> order;
  order.push_back(root);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int child : trace.nodes[order[i]].children) order.push_back(child);

  for (std::size_t i = order.size(); i-- > 0;) {
    ConflictNode& node = trace.nodes[order[i]];
    node.subtree_probability = session.node_record(node.clique);
    node.subtree_prior_product = own_prior_product[node.clique];
    node.subtree_finding_labels = node.own_finding_labels;
    double child_record_product = 1.0;
    for (int child : node.children) {
      const ConflictNode& sub = trace.nodes[child];
      node.subtree_prior_product *= sub.subtree_prior_product;
      child_record_product *= sub.subtree_probability;
      node.subtree_finding_labels.insert(node.subtree_finding_labels.end(),
                                         sub.subtree_finding_labels.begin(),
                                         sub.subtree_finding_labels.end());
    }
    node.subglobal_conf =
        conf_term(node.subtree_prior_product, node.subtree_probability);
    // The groups meeting at this node: its own findings individually plus
    // one composite finding per child subtree, whose prior is the child's
    // subtree conjunction probability.
    node.local_conf =
        conf_term(own_prior_product[node.clique] * child_record_product,
                  node.subtree_probability);
  }

  trace.global_conf = trace.nodes[root].subglobal_conf;
  return trace;
}

std::vector<HypothesisReport> monitor_hypotheses(const Session& session,
                                                 const ConflictTrace& trace) {
  if (!session.calibrated())
    throw Error(ErrorCode::InvalidSession,
                "monitor_hypotheses requires a calibrated session");

  const Network& net = session.tree().network();
  std::vector<bool> has_finding(net.variable_count(), false);
  for (const auto& record : session.findings())
    has_finding[record.finding.variable] = true;

  std::vector<HypothesisReport> reports;
  for (std::uint32_t v = 0; v < net.variable_count(); ++v) {
    if (has_finding[v]) continue;  // fixed by evidence
    const auto& prior = session.prior_marginal(v);
    const auto posterior = session.marginal(v);
    for (std::uint32_t s = 0; s < prior.size(); ++s) {
      if (prior[s] == 0.0) continue;  // cannot be entered as a finding
      HypothesisReport report;
      report.variable = v;
      report.state = s;
      report.prior = prior[s];
      report.posterior = posterior[s];
      if (posterior[s] > 0.0) {
        const double score = std::log2(posterior[s] / prior[s]);
        // a posterior indistinguishable from the prior scores exactly 0
        report.score = std::fabs(score) < kConfSnap ? 0.0 : score;
      } else {
        report.score = -std::numeric_limits<double>::infinity();
      }
      report.explains = report.score > trace.global_conf;
      reports.push_back(report);
    }
  }

  std::stable_sort(reports.begin(), reports.end(),
                   [](const HypothesisReport& a, const HypothesisReport& b) {
                     if (a.score != b.score) return a.score > b.score;
                     if (a.variable != b.variable) return a.variable < b.variable;
                     return a.state < b.state;
                   });
  return reports;
}

}  // namespace bnet
