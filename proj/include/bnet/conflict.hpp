#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bnet/propagate.hpp"

namespace bnet {

// conf of a set of findings, in bits: log2(product of individual priors /
// probability of the conjunction). Positive values indicate a possible
// conflict. Returns +infinity when the conjunction is impossible
// (joint == 0). A zero prior makes the measure undefined and throws
// ZeroPrior.
double compute_conf(std::span<const double> priors, double joint);

// Conflict decomposition at one clique, relative to the collect root.
struct ConflictNode {
  int clique = -1;
  int parent = -1;                 // collect parent, -1 at the root
  std::vector<int> children;       // collect children
  std::vector<std::string> own_finding_labels;
  std::vector<std::string> subtree_finding_labels;
  double subtree_probability = 1.0;   // P(conjunction of subtree findings)
  double subtree_prior_product = 1.0; // product of their individual priors
  // conf of the finding groups meeting here: the node's own findings
  // individually plus one composite finding per child subtree.
  double local_conf = 0.0;
  // conf of all findings in the subtree. Satisfies
  //   subglobal = local + sum of children's subglobals.
  double subglobal_conf = 0.0;
};

struct ConflictTrace {
  int root = -1;
  std::vector<ConflictNode> nodes;  // indexed by clique id
  double global_conf = 0.0;         // bits; the root's subglobal conf
  double prior_product = 1.0;       // over all findings
  double evidence_probability = 1.0;
  bool inconsistent = false;        // evidence probability is zero
  bool no_findings = false;
};

// Builds the local/subglobal decomposition from the session's collect
// records. Requires collect_evidence to have run from `root`.
ConflictTrace conflict_trace(const Session& session, int root);

// One monitored hypothesis: the variable being in the given state.
struct HypothesisReport {
  std::uint32_t variable = 0;
  std::uint32_t state = 0;
  double prior = 0.0;
  double posterior = 0.0;
  // log2(posterior / prior); -infinity when the posterior is zero.
  double score = 0.0;
  // score > global_conf (strict): entering the hypothesis as a finding
  // would make the full finding set coherent.
  bool explains = false;
};

// Scores every state of every variable that carries no finding and has a
// positive prior, sorted by descending score (ties by variable then
// state). Requires a calibrated session.
std::vector<HypothesisReport> monitor_hypotheses(const Session& session,
                                                 const ConflictTrace& trace);

}  // namespace bnet
