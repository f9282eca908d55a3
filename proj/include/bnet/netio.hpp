#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bnet/model.hpp"
#include "bnet/propagate.hpp"

namespace bnet {

// Text formats.
//
// Network files (.net), line oriented, '#' comments:
//
//   net { version: 1; }                      # optional header
//   var Burglary { states: N, Y }
//   cpt Burglary { unit: percent; rows: 50, 50; }
//   cpt Alarm | Burglary, Earthquake {
//     unit: percent;
//     rows: 99, 1 |
//           1, 99 |
//           1, 99 |
//           0, 100;
//   }
//
// Rows iterate over the parent configurations, parents in declared order
// with the last parent varying fastest; each row lists the child states.
// '|' between rows is optional but, when used, must fall on row
// boundaries. unit is 'percent' (rows must sum to 100 +/- 1e-6 and are
// divided by their sum) or 'probability' (rows must sum to 1 +/- 1e-9 and
// are kept verbatim). Without a unit declaration the row sum decides.
//
// Evidence files (.ev), one entry per line (or ';'-separated), optional
// quoted label after the entry:
//
//   Alarm = Y                 "Watson's call"
//   Seismometer in {0, 1}
//   Seismometer mask 1, 1, 0
//
// Parse errors throw Error whose message starts with "line:column:".
struct ParsePosition {
  int line = 0;
  int column = 0;
};

struct CptBlock {
  std::string child;
  std::vector<std::string> parents;
  // Normalized probabilities, row-major over (parents..., child).
  std::vector<double> table;
  // As declared: "percent", "probability", or "" when inferred per row.
  std::string unit;
};

struct NetworkDocument {
  std::string version = "1";
  std::vector<Variable> variables;
  std::vector<CptBlock> cpts;
};

// Structural and numeric equality (variables, states, parents, exact
// table values, version). The declared unit is presentation metadata and
// does not participate.
bool operator==(const NetworkDocument& a, const NetworkDocument& b);

NetworkDocument parse_network(std::string_view text);
// Canonical form: probabilities at full precision, unit: probability.
// serialize(parse(t)) reparses to an equal document.
std::string serialize_network(const NetworkDocument& doc);

Network to_network(const NetworkDocument& doc);             // validating
Network to_network_unchecked(const NetworkDocument& doc);   // for validate()

NetworkDocument to_document(const Network& net);

enum class EvidenceKind { SingleState, StateSet, Mask };

struct EvidenceEntry {
  std::string variable;
  EvidenceKind kind = EvidenceKind::SingleState;
  std::vector<std::string> states;    // SingleState / StateSet
  std::vector<std::uint8_t> mask;     // Mask
  std::string label;                  // optional
};

struct EvidenceDocument {
  std::vector<EvidenceEntry> entries;  // file order
};

bool operator==(const EvidenceEntry& a, const EvidenceEntry& b);
bool operator==(const EvidenceDocument& a, const EvidenceDocument& b);

EvidenceDocument parse_evidence(std::string_view text);
std::string serialize_evidence(const EvidenceDocument& doc);

// Resolve names against a network. Throws UnknownVariable, UnknownState,
// or BadMaskLength. Entry order is preserved; labels default to a
// rendering of the entry.
std::vector<Finding> to_findings(const EvidenceDocument& doc,
                                 const Network& net);

// FNV-1a over the canonical serialization; stable across runs.
std::string network_digest(const Network& net);

}  // namespace bnet
