#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bnet/compile.hpp"

namespace bnet {

// Hard evidence on one variable: a 0/1 mask over its states. mask[s] == 0
// declares state s impossible.
struct Finding {
  std::uint32_t variable = 0;
  std::vector<std::uint8_t> mask;
  std::string label;
};

struct FindingRecord {
  Finding finding;
  double prior = 1.0;     // P(finding) under no other evidence
  int entry_clique = -1;  // where the mask was applied
};

struct AbsorbResult {
  Potential belief;  // receiver belief times message/sepset
  Potential sepset;  // the message, the sepset table's new value
};

// One absorption over one edge: the receiver multiplies in the sender's
// sepset marginal divided by the current sepset table (0/0 = 0), and the
// sepset table takes the sender marginal. A positive-over-zero cell
// throws DivisionByZero, signalling inconsistent messages.
AbsorbResult absorb(const Potential& receiver, const Potential& sender,
                    std::span<const std::uint32_t> sepset_vars,
                    const Potential& sepset_table);

// One inference session over a compiled tree. Opening the session runs a
// no-evidence propagation so priors are readable; findings accumulate and
// a later collect/distribute produces posteriors plus the per-clique
// normalization records the conflict analysis consumes.
//
// Single writer; run parallel queries by opening parallel sessions over
// the same tree.
class Session {
 public:
  explicit Session(const JunctionTree& tree);

  const JunctionTree& tree() const { return *tree_; }

  // Records the finding's prior probability (from the no-evidence
  // calibration) and marks the session uncalibrated. Throws
  // UnknownVariable, BadMaskLength, AllZeroMask, or ZeroPriorFinding.
  void enter_finding(Finding finding);

  const std::vector<FindingRecord>& findings() const { return findings_; }

  // Inward sweep. Resets the working beliefs to the prior calibration,
  // applies every finding mask, then absorbs post-order towards `root`,
  // renormalizing each clique and accumulating the normalization
  // constants into per-clique records of the subtree evidence
  // probability.
  void collect_evidence(int root);

  // Outward sweep from the same root; afterwards every clique belief is
  // the posterior joint over its variables and the session is calibrated.
  void distribute_evidence(int root);

  void propagate(int root) {
    collect_evidence(root);
    distribute_evidence(root);
  }

  bool collected() const { return collected_; }
  bool calibrated() const { return calibrated_; }
  int collect_root() const { return collect_root_; }

  // P(conjunction of all entered findings); requires collect_evidence.
  double evidence_probability() const;

  // P(conjunction of the findings entered in the subtree under `clique`,
  // relative to the collect root).
  double node_record(int clique) const;
  const std::vector<double>& node_records() const { return node_record_; }
  // The raw normalization ratio captured at `clique` during collect
  // (P(subtree findings | child subtree findings)).
  double node_ratio(int clique) const { return node_ratio_[clique]; }

  // Collect traversal structure (valid after collect_evidence).
  int collect_parent(int clique) const { return collect_parent_[clique]; }
  const std::vector<int>& collect_children(int clique) const {
    return collect_children_[clique];
  }

  // Posterior over one variable; requires a calibrated session. All
  // cliques containing the variable agree on this to propagation
  // tolerance; the entry home is used. Returns the zero vector when the
  // evidence has probability zero.
  std::vector<double> marginal(std::uint32_t variable) const;

  // Posterior joint over a variable set covered by a single clique,
  // domain in declaration order. Throws NotCoveredByAnyClique.
  Potential joint_marginal(std::span<const std::uint32_t> variables) const;

  // Prior marginal captured when the session was opened.
  const std::vector<double>& prior_marginal(std::uint32_t variable) const {
    return prior_marginal_[variable];
  }
  // Prior probability of an arbitrary mask on one variable.
  double prior_probability(std::uint32_t variable,
                           std::span<const std::uint8_t> mask) const;

  // Working clique belief (mainly for tests and trace rendering).
  const Potential& belief(int clique) const { return belief_[clique]; }
  const Potential& sepset_table(int edge) const { return sep_[edge]; }

 private:
  void build_traversal(int root);
  void run_collect(bool track_records);
  void run_distribute();

  const JunctionTree* tree_;

  std::vector<Potential> belief_;
  std::vector<Potential> sep_;

  // No-evidence calibrated snapshot, the replay base for every collect.
  std::vector<Potential> prior_belief_;
  std::vector<Potential> prior_sep_;
  std::vector<std::vector<double>> prior_marginal_;

  std::vector<FindingRecord> findings_;

  int collect_root_ = -1;
  std::vector<int> collect_parent_;
  std::vector<std::vector<int>> collect_children_;
  std::vector<int> collect_order_;  // root-first BFS order
  std::vector<double> node_record_;
  std::vector<double> node_ratio_;
  double evidence_probability_ = 1.0;
  bool collected_ = false;
  bool calibrated_ = false;
};

}  // namespace bnet
