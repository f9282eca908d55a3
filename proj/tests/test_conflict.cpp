#include <cmath>
#include <limits>

#include "doctest.h"

#include "bnet/compile.hpp"
#include "bnet/conflict.hpp"
#include "bnet/netio.hpp"
#include "helpers.hpp"

using bnet::compute_conf;
using bnet::conflict_trace;
using bnet::ConflictTrace;
using bnet::Error;
using bnet::ErrorCode;
using bnet::HypothesisReport;
using bnet::JunctionTree;
using bnet::monitor_hypotheses;
using bnet::Network;
using bnet::Session;

using testutil::holmes_network;
using testutil::state_finding;

namespace {
constexpr double kPas = 0.009315;
const double kHolmesConf = std::log2(0.5495 * 0.4415 / kPas);  // 4.7029...
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("compute_conf: the alarm example") {
  const double priors[2] = {0.5495, 0.4415};
  const double conf = compute_conf(priors, kPas);
  CHECK(conf == doctest::Approx(kHolmesConf).epsilon(1e-12));
  CHECK(conf == doctest::Approx(4.703).epsilon(1e-3));
}

TEST_CASE("compute_conf: a single finding carries no conflict") {
  for (double p : {1e-6, 0.25, 0.5495, 1.0}) {
    const double priors[1] = {p};
    CHECK(compute_conf(priors, p) == 0.0);
  }
}

TEST_CASE("compute_conf: independent findings carry no conflict") {
  const double priors[2] = {0.3, 0.4};
  CHECK(compute_conf(priors, 0.12) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("compute_conf: impossible conjunctions and zero priors") {
  const double priors[2] = {0.3, 0.4};
  CHECK(compute_conf(priors, 0.0) == kInf);
  const double bad[2] = {0.0, 0.4};
  try {
    compute_conf(bad, 0.1);
    FAIL("expected ZeroPrior");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroPrior);
  }
}

TEST_CASE("trace: the two-clique alarm decomposition") {
  const JunctionTree tree = compile(holmes_network());
  Session session(tree);
  session.enter_finding(state_finding(tree.network(), "Alarm", "Y"));
  session.enter_finding(state_finding(tree.network(), "Seismometer", "0"));

  // a enters at {B,E,A} (clique 1), s at {B,E,S} (clique 0). With root 1
  // the whole conflict is local at the root; the subtree below carries a
  // single finding and no conflict of its own.
  session.collect_evidence(1);
  const ConflictTrace trace = conflict_trace(session, 1);

  CHECK(trace.global_conf == doctest::Approx(kHolmesConf).epsilon(1e-9));
  CHECK_FALSE(trace.inconsistent);
  CHECK_FALSE(trace.no_findings);
  CHECK(trace.evidence_probability == doctest::Approx(kPas).epsilon(1e-12));

  const auto& root = trace.nodes[1];
  CHECK(root.local_conf == doctest::Approx(kHolmesConf).epsilon(1e-9));
  CHECK(root.subglobal_conf == doctest::Approx(kHolmesConf).epsilon(1e-9));
  CHECK(root.subtree_probability == doctest::Approx(kPas).epsilon(1e-12));
  CHECK(root.subtree_prior_product ==
        doctest::Approx(0.5495 * 0.4415).epsilon(1e-12));
  CHECK(root.own_finding_labels == std::vector<std::string>{"Alarm = Y"});
  REQUIRE(root.subtree_finding_labels.size() == 2);

  const auto& leaf = trace.nodes[0];
  CHECK(leaf.local_conf == 0.0);
  CHECK(leaf.subglobal_conf == 0.0);
  CHECK(leaf.subtree_probability == doctest::Approx(0.4415).epsilon(1e-12));

  // additivity at the root
  CHECK(root.subglobal_conf ==
        doctest::Approx(root.local_conf + leaf.subglobal_conf).epsilon(1e-9));
}

TEST_CASE("trace: any single finding has zero global conflict") {
  const JunctionTree tree = compile(holmes_network());
  for (const char* name : {"Alarm", "Seismometer", "Burglary"}) {
    Session session(tree);
    session.enter_finding(
        state_finding(tree.network(), name, tree.network().variable(
            tree.network().find_variable(name).value()).states[0]));
    session.collect_evidence(0);
    const ConflictTrace trace = conflict_trace(session, 0);
    CHECK(trace.global_conf == 0.0);
  }
}

TEST_CASE("trace: contradictions set the Inconsistent flag and +inf") {
  const JunctionTree tree = compile(holmes_network());
  Session session(tree);
  session.enter_finding(state_finding(tree.network(), "Alarm", "Y"));
  session.enter_finding(state_finding(tree.network(), "Alarm", "N"));
  session.collect_evidence(0);
  const ConflictTrace trace = conflict_trace(session, 0);
  CHECK(trace.inconsistent);
  CHECK(trace.global_conf == kInf);
}

TEST_CASE("trace: no findings is flagged with zero conflict") {
  const JunctionTree tree = compile(holmes_network());
  Session session(tree);
  session.collect_evidence(1);
  const ConflictTrace trace = conflict_trace(session, 1);
  CHECK(trace.no_findings);
  CHECK(trace.global_conf == 0.0);
  for (const auto& node : trace.nodes) {
    CHECK(node.local_conf == 0.0);
    CHECK(node.subglobal_conf == 0.0);
    CHECK(node.subtree_probability == 1.0);
  }
}

TEST_CASE("trace requires a matching collect") {
  const JunctionTree tree = compile(holmes_network());
  Session session(tree);
  session.enter_finding(state_finding(tree.network(), "Alarm", "Y"));
  session.collect_evidence(0);
  try {
    conflict_trace(session, 1);
    FAIL("expected InvalidSession");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSession);
  }
}

TEST_CASE("monitor: alarm network hypotheses cannot explain the conflict") {
  const JunctionTree tree = compile(holmes_network());
  Session session(tree);
  session.enter_finding(state_finding(tree.network(), "Alarm", "Y"));
  session.enter_finding(state_finding(tree.network(), "Seismometer", "0"));
  session.propagate(1);
  const ConflictTrace trace = conflict_trace(session, 1);
  const auto reports = monitor_hypotheses(session, trace);

  // Burglary and Earthquake states only; the evidence variables are fixed.
  REQUIRE(reports.size() == 4);
  for (const auto& r : reports) {
    CHECK((r.variable == 0 || r.variable == 1));
    CHECK_FALSE(r.explains);
    CHECK(r.score < trace.global_conf);
  }

  // exact scores from the enumeration
  auto find = [&](std::uint32_t var, std::uint32_t state) {
    for (const auto& r : reports)
      if (r.variable == var && r.state == state) return r;
    FAIL("missing hypothesis");
    return HypothesisReport{};
  };
  const double post_by = 0.004455 / kPas;   // P(B=Y | a,s)
  const double post_ey = 0.000495 / kPas;   // P(E=Y | a,s)
  const double post_en = 0.008820 / kPas;   // P(E=N | a,s)
  CHECK(find(0, 1).score ==
        doctest::Approx(std::log2(post_by / 0.5)).epsilon(1e-9));
  CHECK(find(0, 1).score == doctest::Approx(-0.0641).epsilon(1e-3));
  CHECK(find(1, 1).score ==
        doctest::Approx(std::log2(post_ey / 0.1)).epsilon(1e-9));
  CHECK(find(1, 0).score ==
        doctest::Approx(std::log2(post_en / 0.9)).epsilon(1e-9));

  // sorted by descending score: E=N, B=N, B=Y, E=Y
  CHECK(reports[0].variable == 1);
  CHECK(reports[0].state == 0);
  CHECK(reports[3].variable == 1);
  CHECK(reports[3].state == 1);
}

TEST_CASE("monitor: the flood variant is explained away by Flood=Y") {
  const Network net =
      bnet::to_network(bnet::parse_network(testutil::read_file(
          testutil::data_path("flood.net"))));
  const JunctionTree tree = compile(net);
  Session session(tree);
  session.enter_finding(state_finding(net, "Alarm", "Y"));
  session.enter_finding(state_finding(net, "Seismometer", "0"));
  session.propagate(tree.auto_root());
  const ConflictTrace trace = conflict_trace(session, tree.auto_root());
  CHECK(trace.global_conf > 0.0);

  const auto reports = monitor_hypotheses(session, trace);
  REQUIRE(!reports.empty());

  // the top hypothesis is the rare flood, with a large posterior, and it
  // is the only one that explains the conflict
  const auto flood = net.find_variable("Flood").value();
  CHECK(reports[0].variable == flood);
  CHECK(reports[0].state == 1);
  CHECK(reports[0].explains);
  CHECK(reports[0].prior == doctest::Approx(0.001).epsilon(1e-9));
  CHECK(reports[0].posterior > 0.8);
  for (std::size_t i = 1; i < reports.size(); ++i)
    CHECK_FALSE(reports[i].explains);
}

TEST_CASE("entering an explaining hypothesis resolves the conflict") {
  const Network net =
      bnet::to_network(bnet::parse_network(testutil::read_file(
          testutil::data_path("flood.net"))));
  const JunctionTree tree = compile(net);
  Session session(tree);
  session.enter_finding(state_finding(net, "Alarm", "Y"));
  session.enter_finding(state_finding(net, "Seismometer", "0"));
  session.enter_finding(state_finding(net, "Flood", "Y"));
  session.collect_evidence(0);
  const ConflictTrace trace = conflict_trace(session, 0);
  CHECK(trace.global_conf < 0.0);  // coherent once the flood is assumed
}

TEST_CASE("the alarm identity: adding a hypothesis shifts conf by its score") {
  const JunctionTree tree = compile(holmes_network());
  const Network& net = tree.network();

  Session base(tree);
  base.enter_finding(state_finding(net, "Alarm", "Y"));
  base.enter_finding(state_finding(net, "Seismometer", "0"));
  base.propagate(0);
  const ConflictTrace trace = conflict_trace(base, 0);

  for (std::uint32_t state : {0u, 1u}) {
    Session with(tree);
    with.enter_finding(state_finding(net, "Alarm", "Y"));
    with.enter_finding(state_finding(net, "Seismometer", "0"));
    bnet::Finding h;
    h.variable = 0;  // Burglary
    h.mask.assign(2, 0);
    h.mask[state] = 1;
    with.enter_finding(h);
    with.collect_evidence(0);
    const ConflictTrace extended = conflict_trace(with, 0);

    const double prior = base.prior_marginal(0)[state];
    const double posterior = base.marginal(0)[state];
    const double score = std::log2(posterior / prior);
    CHECK(extended.global_conf ==
          doctest::Approx(trace.global_conf - score).epsilon(1e-9));
  }
}
