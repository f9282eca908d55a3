// Acceptance suite: one line per criterion, nonzero exit when any fails.
//
// Runs against the shipped fixtures plus a seeded random-network suite,
// with every tolerance pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bnet/cli.hpp"
#include "bnet/compile.hpp"
#include "bnet/conflict.hpp"
#include "bnet/netio.hpp"
#include "bnet/oracle.hpp"
#include "bnet/propagate.hpp"
#include "helpers.hpp"

using namespace bnet;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", number,
              name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

bool close(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= tol;
}

struct RandomCase {
  Network net;
  JunctionTree tree;
  JointTable joint;
  std::vector<Finding> findings;
};

std::vector<RandomCase> random_suite(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  RandomNetworkParams params;  // <= 8 variables, <= 3 states, <= 3 parents
  std::vector<RandomCase> cases;
  cases.reserve(count);
  for (int i = 0; i < count; ++i) {
    Network net = random_network(rng, params);
    JunctionTree tree = compile(net);
    JointTable joint = enumerate_joint(net);
    std::vector<Finding> findings = random_findings(rng, net, joint, 3);
    cases.push_back({std::move(net), std::move(tree), std::move(joint),
                     std::move(findings)});
  }
  return cases;
}

Network load_holmes() {
  return to_network(parse_network(
      testutil::read_file(testutil::data_path("holmes.net"))));
}

std::vector<Finding> watson_findings(const Network& net) {
  return to_findings(parse_evidence(
                         testutil::read_file(testutil::data_path("watson.ev"))),
                     net);
}

// --- criterion 1 -----------------------------------------------------------
// Posterior reproduction: joint over {E,B} given Alarm=Y, Seismometer=0
// rounds to (.47, .05, .48, .00); exact values match the oracle to 1e-9;
// runtime < 1 s.
void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  const Network net = load_holmes();
  const JunctionTree tree = compile(net);
  Session session(tree);
  for (const auto& f : watson_findings(net)) session.enter_finding(f);
  session.propagate(tree.auto_root());

  const std::uint32_t targets[2] = {net.find_variable("Earthquake").value(),
                                    net.find_variable("Burglary").value()};
  const Potential joint = session.joint_marginal(targets);

  const JointTable full = enumerate_joint(net);
  const auto oracle =
      oracle_query(net, full, watson_findings(net), targets);

  const double rounded[4] = {0.47, 0.05, 0.48, 0.00};
  bool ok = joint.size() == 4;
  double max_dev = 0.0;
  for (std::size_t k = 0; ok && k < 4; ++k) {
    ok = std::round(joint[k] * 100.0) / 100.0 == rounded[k];
    max_dev = std::max(max_dev, std::fabs(joint[k] - oracle.posterior[k]));
  }
  ok = ok && max_dev <= 1e-9;
  const double elapsed = ms_since(start);
  ok = ok && elapsed < 1000.0;
  report(1, "alarm posterior joint reproduction", ok,
         "|engine-oracle| max " + fmt(max_dev) + ", " + fmt(elapsed) + " ms");
}

// --- criterion 2 -----------------------------------------------------------
// conf(a, s) equals the oracle value log2(P(a)P(s)/P(a*s)) ~ 4.703 bits to
// 1e-9. The printed 4.5 of the source material is not reproducible from
// its own tables; the test additionally pins |engine - 4.5| < 0.5.
void criterion_2() {
  const Network net = load_holmes();
  const JunctionTree tree = compile(net);
  Session session(tree);
  for (const auto& f : watson_findings(net)) session.enter_finding(f);
  session.collect_evidence(tree.auto_root());
  const ConflictTrace trace = conflict_trace(session, tree.auto_root());

  const JointTable full = enumerate_joint(net);
  const auto findings = watson_findings(net);
  std::vector<double> priors;
  for (const auto& f : findings) {
    const std::uint32_t ids[1] = {f.variable};
    const auto prior = oracle_query(net, full, {}, ids).posterior;
    double p = 0.0;
    for (std::uint32_t s = 0; s < net.arity(f.variable); ++s)
      if (f.mask[s]) p += prior[s];
    priors.push_back(p);
  }
  const double mass =
      oracle_query(net, full, findings, {}).evidence_probability;
  const double expected = compute_conf(priors, mass);  // 4.70290...

  const bool ok = close(trace.global_conf, expected, 1e-9) &&
                  std::fabs(trace.global_conf - 4.5) < 0.5;
  report(2, "conf(a,s) at the oracle value 4.703, not the printed 4.5", ok,
         "engine " + fmt(trace.global_conf) + ", oracle " + fmt(expected));
}

// --- criteria 3 and 4 ------------------------------------------------------
// Theorem 2 on >= 200 random networks in < 30 s, and the conflict
// decomposition at every collect root with a root-invariant global value.
void criteria_3_and_4() {
  const auto start = std::chrono::steady_clock::now();
  const auto cases = random_suite(424242, 200);

  int checked = 0;
  double worst = 0.0;
  bool decomposition_ok = true;
  double worst_decomposition = 0.0;

  for (const auto& c : cases) {
    Session session(c.tree);
    for (const auto& f : c.findings) session.enter_finding(f);

    std::vector<double> priors;
    for (const auto& record : session.findings())
      priors.push_back(record.prior);

    const double mass =
        oracle_query(c.net, c.joint, c.findings, {}).evidence_probability;

    double global_reference = 0.0;
    for (int root = 0; root < static_cast<int>(c.tree.cliques().size());
         ++root) {
      session.collect_evidence(root);
      worst = std::max(worst,
                       std::fabs(session.evidence_probability() - mass));

      const ConflictTrace trace = conflict_trace(session, root);
      for (const auto& node : trace.nodes) {
        double sum = node.local_conf;
        for (int child : node.children)
          sum += trace.nodes[child].subglobal_conf;
        if (std::isinf(node.subglobal_conf) || std::isinf(sum)) {
          decomposition_ok =
              decomposition_ok && (node.subglobal_conf == sum);
        } else {
          worst_decomposition =
              std::max(worst_decomposition, std::fabs(node.subglobal_conf - sum));
        }
      }

      const double direct =
          priors.empty() ? 0.0
                         : compute_conf(priors, session.evidence_probability());
      if (std::isinf(trace.global_conf) || std::isinf(direct))
        decomposition_ok = decomposition_ok && (trace.global_conf == direct);
      else
        worst_decomposition = std::max(
            worst_decomposition, std::fabs(trace.global_conf - direct));

      if (root == 0)
        global_reference = trace.global_conf;
      else if (std::isinf(trace.global_conf) || std::isinf(global_reference))
        decomposition_ok =
            decomposition_ok && (trace.global_conf == global_reference);
      else
        worst_decomposition =
            std::max(worst_decomposition,
                     std::fabs(trace.global_conf - global_reference));
      ++checked;
    }
  }

  const double elapsed = ms_since(start);
  const bool theorem2_ok = worst <= 1e-9 && elapsed < 30000.0;
  report(3, "theorem-2 evidence probability on 200 random networks",
         theorem2_ok,
         "max |engine-oracle| " + fmt(worst) + " over " +
             std::to_string(checked) + " collects, " + fmt(elapsed) + " ms");
  report(4, "conflict decomposition additive and root-invariant",
         decomposition_ok && worst_decomposition <= 1e-9,
         "max identity residual " + fmt(worst_decomposition));
}

// --- criterion 5 -----------------------------------------------------------
// conf(e, H) = conf(e) + log2(P(H)/P(H|e)) for every positive-prior
// hypothesis, and explains(H) <=> score > global, exactly.
void criterion_5() {
  const auto cases = random_suite(515151, 40);
  bool ok = true;
  double worst = 0.0;
  int hypotheses = 0;

  for (const auto& c : cases) {
    Session session(c.tree);
    for (const auto& f : c.findings) session.enter_finding(f);
    session.propagate(0);
    if (session.evidence_probability() == 0.0) continue;
    const ConflictTrace trace = conflict_trace(session, 0);

    for (const auto& r : monitor_hypotheses(session, trace)) {
      Finding h;
      h.variable = r.variable;
      h.mask.assign(c.net.arity(r.variable), 0);
      h.mask[r.state] = 1;

      Session extended(c.tree);
      for (const auto& f : c.findings) extended.enter_finding(f);
      extended.enter_finding(h);
      extended.collect_evidence(0);
      const double with_h = conflict_trace(extended, 0).global_conf;

      const double expected =
          r.posterior == 0.0
              ? std::numeric_limits<double>::infinity()
              : trace.global_conf + std::log2(r.prior / r.posterior);
      if (std::isinf(with_h) || std::isinf(expected))
        ok = ok && (with_h == expected);
      else
        worst = std::max(worst, std::fabs(with_h - expected));

      ok = ok && (r.explains == (r.score > trace.global_conf));
      ++hypotheses;
    }
  }
  ok = ok && worst <= 1e-9 && hypotheses > 0;
  report(5, "hypothesis identity conf(e,H) = conf(e) + log2(P(H)/P(H|e))", ok,
         std::to_string(hypotheses) + " hypotheses, max residual " +
             fmt(worst));
}

// --- criterion 6 -----------------------------------------------------------
// No hypothesis in the plain alarm network explains the a+s conflict; the
// burglary-present hypothesis scores log2(0.4783/0.5) ~ -0.064, far below
// 4.703. (An unmodelled cause is needed, as the flood variant shows.)
void criterion_6() {
  const Network net = load_holmes();
  const JunctionTree tree = compile(net);
  Session session(tree);
  for (const auto& f : watson_findings(net)) session.enter_finding(f);
  session.propagate(tree.auto_root());
  const ConflictTrace trace = conflict_trace(session, tree.auto_root());
  const auto reports = monitor_hypotheses(session, trace);

  bool ok = !reports.empty();
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    ok = ok && !r.explains && r.score < trace.global_conf;
    best = std::max(best, r.score);
  }

  const std::uint32_t burglary = net.find_variable("Burglary").value();
  double burglary_score = 0.0;
  for (const auto& r : reports)
    if (r.variable == burglary && r.state == 1) burglary_score = r.score;
  const double expected = std::log2((0.004455 / 0.009315) / 0.5);  // -0.0641
  ok = ok && close(burglary_score, expected, 1e-9) &&
       std::fabs(burglary_score - (-0.064)) < 1e-3;

  report(6, "no alarm-network hypothesis explains the a+s conflict", ok,
         "best score " + fmt(best) + ", B=Y score " + fmt(burglary_score) +
             " << " + fmt(trace.global_conf));
}

// --- criterion 7 -----------------------------------------------------------
// Habbema surprise index for (A=Y, S=0) is 0.018145 +/- 1e-9. The source
// material's "3%" only matches under coarse rounding; the exact value
// governs.
void criterion_7() {
  const Network net = load_holmes();
  const JointTable joint = enumerate_joint(net);
  const std::pair<std::uint32_t, std::uint32_t> config[2] = {
      {net.find_variable("Alarm").value(), 1},
      {net.find_variable("Seismometer").value(), 0}};
  const double index = surprise_index(net, joint, config);
  const bool ok = close(index, 0.018145, 1e-9);
  report(7, "surprise index 0.018145 for (a,s); '3%' only via coarse rounding",
         ok, "index " + fmt(index));
}

// --- criterion 8 -----------------------------------------------------------
// Calibration and consistency: sepset agreement (1e-9), evidence-order
// independence (1e-12), byte-identical compile dumps, parser round-trips
// across the fixture corpus.
void criterion_8() {
  bool ok = true;
  std::string detail;

  // sepset agreement + order independence on a random suite
  double worst_sepset = 0.0, worst_order = 0.0;
  for (const auto& c : random_suite(818181, 50)) {
    Session session(c.tree);
    for (const auto& f : c.findings) session.enter_finding(f);
    session.propagate(c.tree.auto_root());
    if (session.evidence_probability() > 0.0) {
      for (const auto& edge : c.tree.edges()) {
        const Potential a = marginalize(session.belief(edge.a), edge.vars);
        const Potential b = marginalize(session.belief(edge.b), edge.vars);
        worst_sepset =
            std::max(worst_sepset, bnet::max_abs_difference(a, b));
      }
    }

    Session reversed(c.tree);
    for (auto it = c.findings.rbegin(); it != c.findings.rend(); ++it)
      reversed.enter_finding(*it);
    reversed.propagate(c.tree.auto_root());
    worst_order = std::max(worst_order,
                           std::fabs(session.evidence_probability() -
                                     reversed.evidence_probability()));
    for (std::uint32_t v = 0; v < c.net.variable_count(); ++v) {
      const auto a = session.marginal(v);
      const auto b = reversed.marginal(v);
      for (std::uint32_t s = 0; s < c.net.arity(v); ++s)
        worst_order = std::max(worst_order, std::fabs(a[s] - b[s]));
    }
  }
  ok = ok && worst_sepset <= 1e-9 && worst_order <= 1e-12;
  detail += "sepset " + fmt(worst_sepset) + ", order " + fmt(worst_order);

  // compile determinism, byte-exact
  {
    std::ostringstream out1, err1, out2, err2;
    const std::vector<std::string> args{"compile", "--net",
                                        testutil::data_path("holmes.net"),
                                        "--format", "machine"};
    bnet::cli::run(args, out1, err1);
    bnet::cli::run(args, out2, err2);
    ok = ok && out1.str() == out2.str() && !out1.str().empty();
    detail += out1.str() == out2.str() ? ", dump stable" : ", dump UNSTABLE";
  }

  // parser round-trip across the corpus
  namespace fs = std::filesystem;
  int round_trips = 0;
  bool corpus_ok = true;
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(BNET_CORPUS_DIR))
    names.push_back(entry.path().filename().string());
  names.push_back("");  // sentinel: also run the shipped fixtures below
  std::sort(names.begin(), names.end());
  for (const auto& name : names) {
    std::string text;
    bool evidence = false;
    if (name.empty()) {
      text = testutil::read_file(testutil::data_path("holmes.net"));
    } else if (name.rfind("good_", 0) == 0) {
      text = testutil::read_file(testutil::corpus_path(name));
      evidence = name.size() > 3 && name.rfind(".ev") == name.size() - 3;
    } else {
      continue;
    }
    try {
      if (evidence) {
        const EvidenceDocument doc = parse_evidence(text);
        corpus_ok =
            corpus_ok && (parse_evidence(serialize_evidence(doc)) == doc);
      } else {
        const NetworkDocument doc = parse_network(text);
        corpus_ok =
            corpus_ok && (parse_network(serialize_network(doc)) == doc);
      }
      ++round_trips;
    } catch (const Error&) {
      corpus_ok = false;
    }
  }
  ok = ok && corpus_ok && round_trips >= 13;
  detail += ", " + std::to_string(round_trips) + " round-trips";

  report(8, "calibration, order independence, determinism, round-trips", ok,
         detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criteria_3_and_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();

  if (failures == 0)
    std::printf("all 8 acceptance criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
