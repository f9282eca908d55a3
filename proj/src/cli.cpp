#include "bnet/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bnet/compile.hpp"
#include "bnet/conflict.hpp"
#include "bnet/model.hpp"
#include "bnet/netio.hpp"
#include "bnet/oracle.hpp"
#include "bnet/propagate.hpp"

namespace bnet::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kOracleGate = 1e-9;

enum class Format { Human, Machine };

struct Options {
  std::string net_path;
  std::string evidence_path;
  std::string root = "auto";
  std::string target;
  std::string format = "human";
  std::string hypotheses = "all";
  std::uint64_t seed = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::SyntaxError, "cannot read file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Table cell: two decimals, no leading zero.
std::string table_cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s = buf;
  if (s.size() > 1 && s[0] == '0') s.erase(0, 1);
  return s;
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string bits(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// JSON cannot carry infinities; they appear as strings.
ordered_json jnum(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "Infinity" : "-Infinity";
}

std::string clique_names(const JunctionTree& tree, int id) {
  std::string out = "{";
  const auto& vars = tree.clique(id).vars;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ", ";
    out += tree.network().variable(vars[i]).name;
  }
  return out + "}";
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, ','))
    if (!part.empty()) parts.push_back(part);
  return parts;
}

std::vector<std::uint32_t> resolve_targets(const Network& net,
                                           const std::string& csv) {
  std::vector<std::uint32_t> ids;
  for (const auto& name : split_csv(csv)) {
    const auto id = net.find_variable(name);
    if (!id)
      throw Error(ErrorCode::UnknownVariable,
                  "no variable named '" + name + "'");
    ids.push_back(*id);
  }
  return ids;
}

struct LoadedCase {
  Network net;
  NetworkDocument doc;
  JunctionTree tree;
  std::vector<Finding> findings;
};

LoadedCase load_case(const Options& opt, bool need_evidence) {
  NetworkDocument doc = parse_network(read_file(opt.net_path));
  Network net = to_network(doc);
  JunctionTree tree = compile(net);
  std::vector<Finding> findings;
  if (!opt.evidence_path.empty())
    findings = to_findings(parse_evidence(read_file(opt.evidence_path)), net);
  else if (need_evidence)
    throw Error(ErrorCode::SyntaxError, "--evidence is required here");
  return {std::move(net), std::move(doc), std::move(tree), std::move(findings)};
}

int resolve_root(const JunctionTree& tree, const std::string& root) {
  if (root == "auto") return tree.auto_root();
  int id = -1;
  try {
    id = std::stoi(root);
  } catch (...) {
    throw Error(ErrorCode::SyntaxError,
                "--root must be a clique id or 'auto', got '" + root + "'");
  }
  if (id < 0 || id >= static_cast<int>(tree.cliques().size()))
    throw Error(ErrorCode::SyntaxError,
                "no clique with id " + std::to_string(id));
  return id;
}

ordered_json findings_json(const Session& session) {
  ordered_json out = ordered_json::array();
  for (const auto& record : session.findings()) {
    ordered_json f;
    f["variable"] =
        session.tree().network().variable(record.finding.variable).name;
    f["label"] = record.finding.label;
    f["mask"] = record.finding.mask;
    f["prior"] = record.prior;
    f["entry_clique"] = record.entry_clique;
    out.push_back(std::move(f));
  }
  return out;
}

void print_findings(std::ostream& out, const Session& session) {
  if (session.findings().empty()) {
    out << "findings: none\n";
    return;
  }
  out << "findings:\n";
  for (const auto& record : session.findings())
    out << "  " << record.finding.label << "  (prior " << num(record.prior)
        << ", entered at clique " << record.entry_clique << ")\n";
}

// Rows over every variable but the last, columns over the last.
void print_table(std::ostream& out, const Network& net, const Potential& table) {
  const auto& domain = table.domain();
  if (domain.empty()) {
    out << "  " << table_cell(table[0]) << "\n";
    return;
  }
  const DiscreteVar last = domain.back();
  out << "  columns: " << net.variable(last.id).name << " =";
  for (const auto& state : net.variable(last.id).states) out << " " << state;
  out << "\n";
  const std::size_t row_len = last.arity;
  const std::size_t rows = table.size() / row_len;
  std::vector<std::uint32_t> digits(domain.size() - 1, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    std::string label;
    for (std::size_t d = 0; d + 1 < domain.size(); ++d) {
      if (d) label += ",";
      label += net.variable(domain[d].id).name + "=" +
               net.variable(domain[d].id).states[digits[d]];
    }
    if (label.empty()) label = "p";
    out << "  " << label << ":";
    for (std::size_t c = 0; c < row_len; ++c)
      out << " " << table_cell(table[r * row_len + c]);
    out << "\n";
    for (std::size_t d = digits.size(); d-- > 0;) {
      if (++digits[d] < domain[d].arity) break;
      digits[d] = 0;
    }
  }
}

ordered_json table_json(const Network& net, const Potential& table) {
  ordered_json out;
  ordered_json domain = ordered_json::array();
  for (const auto& v : table.domain()) domain.push_back(net.variable(v.id).name);
  out["domain"] = std::move(domain);
  ordered_json values = ordered_json::array();
  for (double v : table.values()) values.push_back(v);
  out["values"] = std::move(values);
  return out;
}

ordered_json trace_json(const JunctionTree& tree, const ConflictTrace& trace) {
  ordered_json out;
  out["root"] = trace.root;
  out["global_conf_bits"] = jnum(trace.global_conf);
  out["prior_product"] = trace.prior_product;
  out["evidence_probability"] = trace.evidence_probability;
  out["global_conf_ratio"] =
      trace.evidence_probability > 0.0
          ? jnum(trace.prior_product / trace.evidence_probability)
          : jnum(std::numeric_limits<double>::infinity());
  out["inconsistent"] = trace.inconsistent;
  out["no_findings"] = trace.no_findings;
  ordered_json nodes = ordered_json::array();
  for (const auto& node : trace.nodes) {
    ordered_json n;
    n["clique"] = node.clique;
    n["variables"] = clique_names(tree, node.clique);
    n["parent"] = node.parent;
    n["children"] = node.children;
    n["own_findings"] = node.own_finding_labels;
    n["subtree_findings"] = node.subtree_finding_labels;
    n["subtree_probability"] = node.subtree_probability;
    n["subtree_prior_product"] = node.subtree_prior_product;
    n["local_conf_bits"] = jnum(node.local_conf);
    n["subglobal_conf_bits"] = jnum(node.subglobal_conf);
    nodes.push_back(std::move(n));
  }
  out["nodes"] = std::move(nodes);
  return out;
}

void print_trace(std::ostream& out, const JunctionTree& tree,
                 const ConflictTrace& trace) {
  out << "global conflict: " << bits(trace.global_conf) << " bits";
  if (trace.evidence_probability > 0.0)
    out << "  (prior product " << num(trace.prior_product) << ", ratio "
        << num(trace.prior_product / trace.evidence_probability) << ")";
  out << "\n";
  if (trace.no_findings) out << "flags: NoFindings\n";
  if (trace.inconsistent) out << "flags: Inconsistent (evidence impossible)\n";
  out << "possible conflict: " << (trace.global_conf > 0.0 ? "yes" : "no")
      << "\n";
  out << "trace (collect root " << trace.root << "):\n";
  // Root-first walk so subtrees read top-down.
  std::vector<int> order{trace.root};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int child : trace.nodes[order[i]].children) order.push_back(child);
  for (int id : order) {
    const auto& node = trace.nodes[id];
    out << "  clique " << id << " " << clique_names(tree, id) << ": local "
        << bits(node.local_conf) << ", subglobal " << bits(node.subglobal_conf)
        << ", P(subtree)=" << num(node.subtree_probability)
        << ", prior product " << num(node.subtree_prior_product);
    if (!node.own_finding_labels.empty()) {
      out << ", enters [";
      for (std::size_t i = 0; i < node.own_finding_labels.size(); ++i) {
        if (i) out << "; ";
        out << node.own_finding_labels[i];
      }
      out << "]";
    }
    out << "\n";
  }
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

// ---------------------------------------------------------------------------

int cmd_validate(const Options& opt, Format format, std::ostream& out) {
  NetworkDocument doc = parse_network(read_file(opt.net_path));
  Network net = to_network_unchecked(doc);
  ValidationReport report = net.validate();

  if (format == Format::Machine) {
    ordered_json j;
    j["command"] = "validate";
    j["net"] = opt.net_path;
    j["variables"] = net.variable_count();
    j["valid"] = report.empty();
    ordered_json issues = ordered_json::array();
    for (const auto& issue : report) {
      ordered_json e;
      e["code"] = to_string(issue.code);
      e["detail"] = issue.detail;
      issues.push_back(std::move(e));
    }
    j["issues"] = std::move(issues);
    out << j.dump(2) << "\n";
  } else {
    out << "validate: " << opt.net_path << "\n";
    out << "variables: " << net.variable_count() << "\n";
    if (report.empty()) {
      out << "result: valid\n";
    } else {
      out << "result: " << report.size() << " issue(s)\n";
      for (const auto& issue : report)
        out << "  " << to_string(issue.code) << ": " << issue.detail << "\n";
    }
  }
  return report.empty() ? 0 : 1;
}

int cmd_compile(const Options& opt, Format format, std::ostream& out) {
  NetworkDocument doc = parse_network(read_file(opt.net_path));
  Network net = to_network(doc);
  const Triangulation tri = triangulate(moralize(net));
  JunctionTree tree = compile(net);

  if (format == Format::Machine) {
    ordered_json j;
    j["command"] = "compile";
    j["net"] = opt.net_path;
    j["digest"] = network_digest(net);
    ordered_json cliques = ordered_json::array();
    for (const auto& c : tree.cliques()) {
      ordered_json e;
      e["id"] = c.id;
      ordered_json vars = ordered_json::array();
      for (auto v : c.vars) vars.push_back(net.variable(v).name);
      e["variables"] = std::move(vars);
      cliques.push_back(std::move(e));
    }
    j["cliques"] = std::move(cliques);
    ordered_json sepsets = ordered_json::array();
    for (const auto& e : tree.edges()) {
      ordered_json s;
      s["a"] = e.a;
      s["b"] = e.b;
      ordered_json vars = ordered_json::array();
      for (auto v : e.vars) vars.push_back(net.variable(v).name);
      s["variables"] = std::move(vars);
      sepsets.push_back(std::move(s));
    }
    j["sepsets"] = std::move(sepsets);
    ordered_json elimination = ordered_json::array();
    for (auto v : tri.elimination_order)
      elimination.push_back(net.variable(v).name);
    j["elimination_order"] = std::move(elimination);
    j["fill_in_count"] = tri.fill_edges.size();
    ordered_json homes;
    for (std::uint32_t v = 0; v < net.variable_count(); ++v) {
      ordered_json h;
      h["family"] = tree.family_home(v);
      h["entry"] = tree.entry_home(v);
      homes[net.variable(v).name] = std::move(h);
    }
    j["homes"] = std::move(homes);
    out << j.dump(2) << "\n";
  } else {
    out << "compile: " << opt.net_path << "\n";
    out << "digest: " << network_digest(net) << "\n";
    out << "cliques:\n";
    for (const auto& c : tree.cliques())
      out << "  " << c.id << ": " << clique_names(tree, c.id) << "\n";
    out << "sepsets:\n";
    if (tree.edges().empty()) out << "  none\n";
    for (const auto& e : tree.edges()) {
      out << "  " << e.a << " -- " << e.b << ": {";
      for (std::size_t i = 0; i < e.vars.size(); ++i) {
        if (i) out << ", ";
        out << net.variable(e.vars[i]).name;
      }
      out << "}\n";
    }
    out << "elimination order:";
    for (auto v : tri.elimination_order) out << " " << net.variable(v).name;
    out << "\nfill-ins: " << tri.fill_edges.size() << "\n";
    out << "homes (family, entry):\n";
    for (std::uint32_t v = 0; v < net.variable_count(); ++v)
      out << "  " << net.variable(v).name << ": clique " << tree.family_home(v)
          << ", clique " << tree.entry_home(v) << "\n";
  }
  return 0;
}

int cmd_query(const Options& opt, Format format, std::ostream& out) {
  Timer timer;
  LoadedCase c = load_case(opt, false);
  Session session(c.tree);
  for (const auto& f : c.findings) session.enter_finding(f);
  session.propagate(resolve_root(c.tree, opt.root));

  const std::vector<std::uint32_t> targets =
      resolve_targets(c.net, opt.target);

  if (format == Format::Machine) {
    ordered_json j;
    j["command"] = "query";
    j["net"] = opt.net_path;
    j["digest"] = network_digest(c.net);
    j["findings"] = findings_json(session);
    j["evidence_probability"] = session.evidence_probability();
    if (targets.size() >= 2) {
      j["joint"] = table_json(c.net, session.joint_marginal(targets));
    } else {
      ordered_json marginals;
      const std::vector<std::uint32_t> all =
          targets.empty()
              ? [&] {
                  std::vector<std::uint32_t> ids(c.net.variable_count());
                  for (std::uint32_t v = 0; v < ids.size(); ++v) ids[v] = v;
                  return ids;
                }()
              : targets;
      for (auto v : all) marginals[c.net.variable(v).name] = session.marginal(v);
      j["marginals"] = std::move(marginals);
    }
    out << j.dump(2) << "\n";
  } else {
    out << "query: " << opt.net_path;
    if (!opt.evidence_path.empty()) out << " + " << opt.evidence_path;
    out << "\ndigest: " << network_digest(c.net) << "\n";
    print_findings(out, session);
    out << "evidence probability: " << num(session.evidence_probability())
        << "\n";
    if (targets.size() >= 2) {
      const Potential joint = session.joint_marginal(targets);
      out << "joint over (";
      for (std::size_t i = 0; i < joint.domain().size(); ++i) {
        if (i) out << ", ";
        out << c.net.variable(joint.domain()[i].id).name;
      }
      out << "):\n";
      print_table(out, c.net, joint);
    } else if (targets.size() == 1) {
      const auto m = session.marginal(targets[0]);
      out << "P(" << c.net.variable(targets[0]).name << "):";
      for (double v : m) out << " " << table_cell(v);
      out << "\n";
    } else {
      out << "marginals:\n";
      for (std::uint32_t v = 0; v < c.net.variable_count(); ++v) {
        out << "  " << c.net.variable(v).name << ":";
        for (double value : session.marginal(v)) out << " " << table_cell(value);
        out << "\n";
      }
    }
    out << "wall time: " << num(timer.ms()) << " ms\n";
  }
  return 0;
}

int cmd_conflict(const Options& opt, Format format, std::ostream& out) {
  Timer timer;
  LoadedCase c = load_case(opt, true);
  Session session(c.tree);
  for (const auto& f : c.findings) session.enter_finding(f);
  const int root = resolve_root(c.tree, opt.root);
  session.collect_evidence(root);
  const ConflictTrace trace = conflict_trace(session, root);

  if (format == Format::Machine) {
    ordered_json j;
    j["command"] = "conflict";
    j["net"] = opt.net_path;
    j["digest"] = network_digest(c.net);
    j["findings"] = findings_json(session);
    j["conflict"] = trace_json(c.tree, trace);
    out << j.dump(2) << "\n";
  } else {
    out << "conflict: " << opt.net_path << " + " << opt.evidence_path << "\n";
    out << "digest: " << network_digest(c.net) << "\n";
    print_findings(out, session);
    out << "evidence probability: " << num(trace.evidence_probability) << "\n";
    print_trace(out, c.tree, trace);
    out << "wall time: " << num(timer.ms()) << " ms\n";
  }
  return trace.global_conf > 0.0 ? 3 : 0;
}

int cmd_monitor(const Options& opt, Format format, std::ostream& out) {
  Timer timer;
  LoadedCase c = load_case(opt, true);
  Session session(c.tree);
  for (const auto& f : c.findings) session.enter_finding(f);
  const int root = resolve_root(c.tree, opt.root);
  session.propagate(root);
  const ConflictTrace trace = conflict_trace(session, root);
  std::vector<HypothesisReport> reports = monitor_hypotheses(session, trace);

  if (opt.hypotheses != "all") {
    std::vector<std::uint32_t> keep = resolve_targets(c.net, opt.hypotheses);
    std::erase_if(reports, [&](const HypothesisReport& r) {
      return std::find(keep.begin(), keep.end(), r.variable) == keep.end();
    });
  }

  if (format == Format::Machine) {
    ordered_json j;
    j["command"] = "monitor";
    j["net"] = opt.net_path;
    j["digest"] = network_digest(c.net);
    j["findings"] = findings_json(session);
    j["global_conf_bits"] = jnum(trace.global_conf);
    ordered_json hyp = ordered_json::array();
    for (const auto& r : reports) {
      ordered_json h;
      h["variable"] = c.net.variable(r.variable).name;
      h["state"] = c.net.variable(r.variable).states[r.state];
      h["prior"] = r.prior;
      h["posterior"] = r.posterior;
      h["score_bits"] = jnum(r.score);
      h["explains"] = r.explains;
      hyp.push_back(std::move(h));
    }
    j["hypotheses"] = std::move(hyp);
    out << j.dump(2) << "\n";
  } else {
    out << "monitor: " << opt.net_path << " + " << opt.evidence_path << "\n";
    out << "digest: " << network_digest(c.net) << "\n";
    print_findings(out, session);
    out << "global conflict: " << bits(trace.global_conf) << " bits\n";
    out << "hypotheses (score = log2(posterior/prior), explains when score > "
           "global conflict):\n";
    for (const auto& r : reports) {
      out << "  " << c.net.variable(r.variable).name << "="
          << c.net.variable(r.variable).states[r.state] << ": prior "
          << num(r.prior) << ", posterior " << num(r.posterior) << ", score "
          << bits(r.score) << ", explains: " << (r.explains ? "yes" : "no")
          << "\n";
    }
    out << "wall time: " << num(timer.ms()) << " ms\n";
  }
  return 0;
}

int cmd_surprise(const Options& opt, Format format, std::ostream& out) {
  LoadedCase c = load_case(opt, true);
  if (c.findings.empty())
    throw Error(ErrorCode::SyntaxError,
                "surprise requires at least one finding");

  std::vector<std::pair<std::uint32_t, std::uint32_t>> configuration;
  for (const auto& f : c.findings) {
    std::uint32_t state = 0, on = 0;
    for (std::uint32_t s = 0; s < f.mask.size(); ++s)
      if (f.mask[s]) {
        state = s;
        ++on;
      }
    if (on != 1)
      throw Error(ErrorCode::SyntaxError,
                  "surprise requires single-state findings; '" + f.label +
                      "' keeps " + std::to_string(on) + " states");
    configuration.emplace_back(f.variable, state);
  }

  const JointTable joint = enumerate_joint(c.net);
  const double index = surprise_index(c.net, joint, configuration);
  const double mass =
      oracle_query(c.net, joint, c.findings, {}).evidence_probability;

  if (format == Format::Machine) {
    ordered_json j;
    j["command"] = "surprise";
    j["net"] = opt.net_path;
    j["digest"] = network_digest(c.net);
    ordered_json config = ordered_json::array();
    for (const auto& [v, s] : configuration) {
      ordered_json e;
      e["variable"] = c.net.variable(v).name;
      e["state"] = c.net.variable(v).states[s];
      config.push_back(std::move(e));
    }
    j["configuration"] = std::move(config);
    j["configuration_probability"] = mass;
    j["surprise_index"] = index;
    out << j.dump(2) << "\n";
  } else {
    out << "surprise: " << opt.net_path << " + " << opt.evidence_path << "\n";
    out << "configuration:";
    for (const auto& [v, s] : configuration)
      out << " " << c.net.variable(v).name << "="
          << c.net.variable(v).states[s];
    out << "\nconfiguration probability: " << num(mass) << "\n";
    out << "surprise index: " << num(index) << "\n";
  }
  return 0;
}

// Engine-vs-enumeration deviation for one case.
double cross_check(const Network& net, const JunctionTree& tree,
                   const std::vector<Finding>& findings) {
  const JointTable joint = enumerate_joint(net);
  Session session(tree);
  for (const auto& f : findings) session.enter_finding(f);
  session.propagate(tree.auto_root());

  double worst = std::fabs(
      session.evidence_probability() -
      oracle_query(net, joint, findings, {}).evidence_probability);
  for (std::uint32_t v = 0; v < net.variable_count(); ++v) {
    const std::uint32_t ids[1] = {v};
    const auto expected = oracle_query(net, joint, findings, ids).posterior;
    const auto got = session.marginal(v);
    for (std::uint32_t s = 0; s < net.arity(v); ++s)
      worst = std::max(worst, std::fabs(got[s] - expected[s]));
  }
  return worst;
}

int cmd_oracle(const Options& opt, Format format, std::ostream& out) {
  double worst = 0.0;
  std::size_t cases = 0;

  if (!opt.net_path.empty()) {
    LoadedCase c = load_case(opt, false);
    worst = cross_check(c.net, c.tree, c.findings);
    cases = 1;
  } else {
    std::mt19937_64 rng(opt.seed);
    RandomNetworkParams params;
    for (int i = 0; i < 60; ++i) {
      const Network net = random_network(rng, params);
      const JunctionTree tree = compile(net);
      const JointTable joint = enumerate_joint(net);
      const auto findings = random_findings(rng, net, joint, 3);
      worst = std::max(worst, cross_check(net, tree, findings));
      ++cases;
    }
  }

  const bool ok = worst < kOracleGate;
  if (format == Format::Machine) {
    ordered_json j;
    j["command"] = "oracle";
    if (!opt.net_path.empty()) j["net"] = opt.net_path;
    else j["seed"] = opt.seed;
    j["cases"] = cases;
    j["max_abs_deviation"] = worst;
    j["ok"] = ok;
    out << j.dump(2) << "\n";
  } else {
    out << "oracle cross-check: " << cases << " case(s)\n";
    out << "max abs deviation: " << num(worst) << "\n";
    out << (ok ? "OK" : "FAILED") << " (gate " << num(kOracleGate) << ")\n";
  }
  return ok ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "bnet - junction-tree inference over discrete networks with data "
      "conflict analysis"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool net_required) {
    auto* net = sub->add_option("--net", opt.net_path, "network file (.net)");
    if (net_required) net->required();
    sub->add_option("--evidence", opt.evidence_path, "evidence file (.ev)");
    sub->add_option("--root", opt.root, "collect root: clique id or 'auto'");
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"human", "machine"}));
    return sub;
  };

  auto* validate = add_common(app.add_subcommand("validate", "check a network file"), true);
  auto* compile_cmd = add_common(app.add_subcommand("compile", "dump the junction tree"), true);
  auto* query = add_common(app.add_subcommand("query", "posterior marginals or a joint"), true);
  query->add_option("--target", opt.target, "comma-separated variables");
  auto* conflict_cmd = add_common(app.add_subcommand("conflict", "conflict trace; exit 3 when positive"), true);
  auto* monitor = add_common(app.add_subcommand("monitor", "explaining-away hypothesis reports"), true);
  monitor->add_option("--hypotheses", opt.hypotheses,
                      "'all' or comma-separated variables");
  auto* surprise = add_common(app.add_subcommand("surprise", "Habbema surprise index of the evidence"), true);
  auto* oracle_cmd = add_common(app.add_subcommand("oracle", "cross-check engine vs enumeration"), false);
  oracle_cmd->add_option("--seed", opt.seed, "random-suite seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  const Format format =
      opt.format == "machine" ? Format::Machine : Format::Human;

  try {
    if (app.got_subcommand(validate)) return cmd_validate(opt, format, out);
    if (app.got_subcommand(compile_cmd)) return cmd_compile(opt, format, out);
    if (app.got_subcommand(query)) return cmd_query(opt, format, out);
    if (app.got_subcommand(conflict_cmd)) return cmd_conflict(opt, format, out);
    if (app.got_subcommand(monitor)) return cmd_monitor(opt, format, out);
    if (app.got_subcommand(surprise)) return cmd_surprise(opt, format, out);
    if (app.got_subcommand(oracle_cmd)) return cmd_oracle(opt, format, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return e.internal() ? 2 : 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace bnet::cli
