#include "bnet/netio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace bnet {

namespace {

constexpr double kPercentTolerance = 1e-6;
constexpr double kProbabilityTolerance = 1e-9;

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

// ---------------------------------------------------------------------------
// Tokenizer shared by both formats. Words cover names and numbers; the
// punctuation set is { } | , ; : = plus quoted strings for labels.

struct Token {
  enum Kind { Word, String, Punct, End } kind = End;
  std::string text;
  char punct = 0;
  int line = 1;
  int column = 1;
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '-' || c == '+';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    last_line_ = t.line;
    advance();
    return t;
  }
  // Line of the most recently consumed token.
  int last_line() const { return last_line_; }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw Error(ErrorCode::SyntaxError, std::to_string(at.line) + ":" +
                                            std::to_string(at.column) + ": " +
                                            message);
  }

 private:
  void advance() {
    skip_blank();
    current_ = Token{};
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::End;
      current_.text = "<end of file>";
      return;
    }
    const char c = text_[pos_];
    if (c == '"') {
      step();
      std::string value;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\n')
          throw Error(ErrorCode::SyntaxError,
                      std::to_string(current_.line) + ":" +
                          std::to_string(current_.column) +
                          ": unterminated string");
        value += text_[pos_];
        step();
      }
      if (pos_ >= text_.size())
        throw Error(ErrorCode::SyntaxError,
                    std::to_string(current_.line) + ":" +
                        std::to_string(current_.column) +
                        ": unterminated string");
      step();  // closing quote
      current_.kind = Token::String;
      current_.text = std::move(value);
      return;
    }
    if (word_char(c)) {
      std::string value;
      while (pos_ < text_.size() && word_char(text_[pos_])) {
        value += text_[pos_];
        step();
      }
      current_.kind = Token::Word;
      current_.text = std::move(value);
      return;
    }
    if (std::string("{}|,;:=").find(c) != std::string::npos) {
      current_.kind = Token::Punct;
      current_.punct = c;
      current_.text = std::string(1, c);
      step();
      return;
    }
    throw Error(ErrorCode::SyntaxError,
                std::to_string(line_) + ":" + std::to_string(column_) +
                    ": unexpected character '" + std::string(1, c) + "'");
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') step();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        step();
      } else {
        break;
      }
    }
  }

  void step() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  int last_line_ = 0;
  Token current_;
};

bool is_punct(const Token& t, char c) {
  return t.kind == Token::Punct && t.punct == c;
}
bool is_word(const Token& t, std::string_view w) {
  return t.kind == Token::Word && t.text == w;
}

std::string expect_word(Lexer& lex, const char* what) {
  Token t = lex.take();
  if (t.kind != Token::Word)
    lex.fail(t, std::string("expected ") + what + ", found '" + t.text + "'");
  return t.text;
}

Token expect_punct(Lexer& lex, char c) {
  Token t = lex.take();
  if (!is_punct(t, c))
    lex.fail(t, std::string("expected '") + c + "', found '" + t.text + "'");
  return t;
}

double parse_number(Lexer& lex, const Token& t) {
  double value = 0.0;
  const auto end = t.text.data() + t.text.size();
  const auto [ptr, ec] = std::from_chars(t.text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    lex.fail(t, "expected a number, found '" + t.text + "'");
  return value;
}

std::vector<std::string> parse_name_list(Lexer& lex, const char* what) {
  std::vector<std::string> names;
  names.push_back(expect_word(lex, what));
  while (is_punct(lex.peek(), ',')) {
    lex.take();
    names.push_back(expect_word(lex, what));
  }
  return names;
}

// ---------------------------------------------------------------------------
// Network grammar.

struct RawRow {
  std::vector<double> values;
  Token at;  // first number of the row, for diagnostics
};

std::vector<RawRow> parse_rows(Lexer& lex, std::size_t row_length) {
  std::vector<RawRow> rows;
  RawRow row;
  for (;;) {
    Token t = lex.peek();
    if (t.kind == Token::Word) {
      lex.take();
      if (row.values.empty()) row.at = t;
      row.values.push_back(parse_number(lex, t));
      if (row.values.size() == row_length) {
        rows.push_back(std::move(row));
        row = RawRow{};
      }
      if (is_punct(lex.peek(), ',')) lex.take();
      continue;
    }
    if (is_punct(t, '|')) {
      lex.take();
      if (!row.values.empty())
        lex.fail(t, "row break after " + std::to_string(row.values.size()) +
                        " of " + std::to_string(row_length) + " values");
      continue;
    }
    break;
  }
  if (!row.values.empty())
    throw Error(ErrorCode::BadCptShape,
                std::to_string(row.at.line) + ":" +
                    std::to_string(row.at.column) + ": trailing partial row of " +
                    std::to_string(row.values.size()) + " values (rows have " +
                    std::to_string(row_length) + ")");
  return rows;
}

// Normalizes one row according to the declared unit ("" = infer from the
// row sum) and appends it to `out`.
void normalize_row(const RawRow& row, const std::string& unit,
                   const std::string& child, std::size_t row_index,
                   std::vector<double>& out) {
  double sum = 0.0;
  for (double v : row.values) sum += v;

  const bool percent_ok = std::fabs(sum - 100.0) <= kPercentTolerance;
  const bool probability_ok = std::fabs(sum - 1.0) <= kProbabilityTolerance;

  bool percent;
  if (unit == "percent") {
    percent = true;
    if (!percent_ok)
      throw Error(ErrorCode::BadRowSum,
                  std::to_string(row.at.line) + ":" +
                      std::to_string(row.at.column) + ": cpt '" + child +
                      "' row " + std::to_string(row_index) + " sums to " +
                      format_double(sum) + ", expected 100");
  } else if (unit == "probability") {
    percent = false;
    if (!probability_ok)
      throw Error(ErrorCode::BadRowSum,
                  std::to_string(row.at.line) + ":" +
                      std::to_string(row.at.column) + ": cpt '" + child +
                      "' row " + std::to_string(row_index) + " sums to " +
                      format_double(sum) + ", expected 1");
  } else {
    if (percent_ok)
      percent = true;
    else if (probability_ok)
      percent = false;
    else
      throw Error(ErrorCode::BadRowSum,
                  std::to_string(row.at.line) + ":" +
                      std::to_string(row.at.column) + ": cpt '" + child +
                      "' row " + std::to_string(row_index) + " sums to " +
                      format_double(sum) + ", expected 1 or 100");
  }

  for (double v : row.values) out.push_back(percent ? v / sum : v);
}

}  // namespace

NetworkDocument parse_network(std::string_view text) {
  Lexer lex(text);
  NetworkDocument doc;
  std::map<std::string, std::size_t> var_index;
  std::set<std::string> cpt_seen;

  while (lex.peek().kind != Token::End) {
    Token head = lex.take();
    if (head.kind != Token::Word)
      lex.fail(head, "expected 'net', 'var' or 'cpt', found '" + head.text + "'");

    if (head.text == "net") {
      expect_punct(lex, '{');
      if (is_word(lex.peek(), "version")) {
        lex.take();
        expect_punct(lex, ':');
        doc.version = expect_word(lex, "a version tag");
        if (is_punct(lex.peek(), ';')) lex.take();
      }
      expect_punct(lex, '}');
      continue;
    }

    if (head.text == "var") {
      Token name = lex.take();
      if (name.kind != Token::Word)
        lex.fail(name, "expected a variable name, found '" + name.text + "'");
      if (var_index.count(name.text))
        throw Error(ErrorCode::DuplicateDeclaration,
                    std::to_string(name.line) + ":" +
                        std::to_string(name.column) + ": variable '" +
                        name.text + "' declared twice");
      expect_punct(lex, '{');
      Token kw = lex.take();
      if (!is_word(kw, "states"))
        lex.fail(kw, "expected 'states', found '" + kw.text + "'");
      expect_punct(lex, ':');
      std::vector<std::string> states = parse_name_list(lex, "a state name");
      if (is_punct(lex.peek(), ';')) lex.take();
      expect_punct(lex, '}');
      var_index[name.text] = doc.variables.size();
      doc.variables.push_back({name.text, std::move(states)});
      continue;
    }

    if (head.text == "cpt") {
      Token name = lex.take();
      if (name.kind != Token::Word)
        lex.fail(name, "expected a variable name, found '" + name.text + "'");
      auto child_it = var_index.find(name.text);
      if (child_it == var_index.end())
        throw Error(ErrorCode::UnknownVariable,
                    std::to_string(name.line) + ":" +
                        std::to_string(name.column) + ": cpt for undeclared '" +
                        name.text + "'");
      if (!cpt_seen.insert(name.text).second)
        throw Error(ErrorCode::DuplicateDeclaration,
                    std::to_string(name.line) + ":" +
                        std::to_string(name.column) + ": cpt for '" +
                        name.text + "' declared twice");

      CptBlock block;
      block.child = name.text;
      std::size_t rows_expected = 1;
      if (is_punct(lex.peek(), '|')) {
        lex.take();
        block.parents = parse_name_list(lex, "a parent name");
        for (const auto& p : block.parents) {
          auto it = var_index.find(p);
          if (it == var_index.end())
            throw Error(ErrorCode::UnknownVariable,
                        std::to_string(name.line) + ":" +
                            std::to_string(name.column) + ": cpt '" +
                            name.text + "' references undeclared parent '" + p +
                            "'");
          rows_expected *= doc.variables[it->second].states.size();
        }
      }
      const std::size_t row_length =
          doc.variables[child_it->second].states.size();

      expect_punct(lex, '{');
      std::vector<RawRow> raw_rows;
      bool have_rows = false;
      while (!is_punct(lex.peek(), '}')) {
        Token kw = lex.take();
        if (is_word(kw, "unit")) {
          expect_punct(lex, ':');
          Token unit = lex.take();
          if (!is_word(unit, "percent") && !is_word(unit, "probability"))
            lex.fail(unit,
                     "expected 'percent' or 'probability', found '" +
                         unit.text + "'");
          block.unit = unit.text;
          expect_punct(lex, ';');
        } else if (is_word(kw, "rows")) {
          expect_punct(lex, ':');
          raw_rows = parse_rows(lex, row_length);
          have_rows = true;
          expect_punct(lex, ';');
        } else {
          lex.fail(kw, "expected 'unit' or 'rows', found '" + kw.text + "'");
        }
      }
      expect_punct(lex, '}');

      if (!have_rows || raw_rows.size() != rows_expected)
        throw Error(ErrorCode::BadCptShape,
                    std::to_string(name.line) + ":" +
                        std::to_string(name.column) + ": cpt '" + name.text +
                        "' has " + std::to_string(raw_rows.size()) +
                        " rows, expected " + std::to_string(rows_expected));
      for (std::size_t r = 0; r < raw_rows.size(); ++r)
        normalize_row(raw_rows[r], block.unit, block.child, r, block.table);

      doc.cpts.push_back(std::move(block));
      continue;
    }

    lex.fail(head, "expected 'net', 'var' or 'cpt', found '" + head.text + "'");
  }
  return doc;
}

std::string serialize_network(const NetworkDocument& doc) {
  std::ostringstream out;
  out << "net { version: " << doc.version << "; }\n\n";
  for (const auto& v : doc.variables) {
    out << "var " << v.name << " { states: ";
    for (std::size_t s = 0; s < v.states.size(); ++s) {
      if (s) out << ", ";
      out << v.states[s];
    }
    out << " }\n";
  }
  out << "\n";

  std::map<std::string, std::size_t> arity;
  for (const auto& v : doc.variables) arity[v.name] = v.states.size();

  for (const auto& block : doc.cpts) {
    out << "cpt " << block.child;
    if (!block.parents.empty()) {
      out << " | ";
      for (std::size_t p = 0; p < block.parents.size(); ++p) {
        if (p) out << ", ";
        out << block.parents[p];
      }
    }
    out << " {\n  unit: probability;\n  rows: ";
    const std::size_t row_length =
        arity.count(block.child) ? arity[block.child] : block.table.size();
    for (std::size_t i = 0; i < block.table.size(); ++i) {
      if (i && i % row_length == 0) out << " |\n        ";
      else if (i) out << ", ";
      out << format_double(block.table[i]);
    }
    out << ";\n}\n";
  }
  return out.str();
}

bool operator==(const NetworkDocument& a, const NetworkDocument& b) {
  if (a.version != b.version) return false;
  if (a.variables.size() != b.variables.size()) return false;
  for (std::size_t i = 0; i < a.variables.size(); ++i)
    if (a.variables[i].name != b.variables[i].name ||
        a.variables[i].states != b.variables[i].states)
      return false;
  if (a.cpts.size() != b.cpts.size()) return false;
  for (std::size_t i = 0; i < a.cpts.size(); ++i)
    if (a.cpts[i].child != b.cpts[i].child ||
        a.cpts[i].parents != b.cpts[i].parents ||
        a.cpts[i].table != b.cpts[i].table)
      return false;
  return true;
}

Network to_network(const NetworkDocument& doc) {
  std::vector<VariableSpec> spec;
  std::map<std::string, std::size_t> index;
  for (const auto& v : doc.variables) {
    index[v.name] = spec.size();
    spec.push_back({v.name, v.states, {}, {}});
  }
  for (const auto& block : doc.cpts) {
    auto it = index.find(block.child);
    if (it == index.end())
      throw Error(ErrorCode::UnknownVariable,
                  "cpt for undeclared '" + block.child + "'");
    spec[it->second].parents = block.parents;
    spec[it->second].table = block.table;
  }
  for (const auto& s : spec)
    if (s.table.empty())
      throw Error(ErrorCode::BadCptShape,
                  "no cpt block for variable '" + s.name + "'");
  return Network::build(std::move(spec));
}

Network to_network_unchecked(const NetworkDocument& doc) {
  std::vector<VariableSpec> spec;
  std::map<std::string, std::size_t> index;
  for (const auto& v : doc.variables) {
    index[v.name] = spec.size();
    spec.push_back({v.name, v.states, {}, {}});
  }
  for (const auto& block : doc.cpts) {
    auto it = index.find(block.child);
    if (it == index.end())
      throw Error(ErrorCode::UnknownVariable,
                  "cpt for undeclared '" + block.child + "'");
    spec[it->second].parents = block.parents;
    spec[it->second].table = block.table;
  }
  return Network::build_unchecked(std::move(spec));
}

NetworkDocument to_document(const Network& net) {
  NetworkDocument doc;
  for (std::uint32_t v = 0; v < net.variable_count(); ++v) {
    doc.variables.push_back(net.variable(v));
    CptBlock block;
    block.child = net.variable(v).name;
    for (auto p : net.parents(v)) block.parents.push_back(net.variable(p).name);
    const auto values = net.cpt(v).values();
    block.table.assign(values.begin(), values.end());
    block.unit = "probability";
    doc.cpts.push_back(std::move(block));
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Evidence grammar.

EvidenceDocument parse_evidence(std::string_view text) {
  Lexer lex(text);
  EvidenceDocument doc;

  while (lex.peek().kind != Token::End) {
    if (is_punct(lex.peek(), ';')) {
      lex.take();
      continue;
    }
    Token name = lex.take();
    if (name.kind != Token::Word)
      lex.fail(name, "expected a variable name, found '" + name.text + "'");

    EvidenceEntry entry;
    entry.variable = name.text;

    Token op = lex.take();
    if (is_punct(op, '=')) {
      entry.kind = EvidenceKind::SingleState;
      entry.states.push_back(expect_word(lex, "a state name"));
    } else if (is_word(op, "in")) {
      entry.kind = EvidenceKind::StateSet;
      expect_punct(lex, '{');
      entry.states = parse_name_list(lex, "a state name");
      expect_punct(lex, '}');
    } else if (is_word(op, "mask")) {
      entry.kind = EvidenceKind::Mask;
      for (;;) {
        Token bit = lex.take();
        if (bit.kind != Token::Word || (bit.text != "0" && bit.text != "1"))
          lex.fail(bit, "expected 0 or 1, found '" + bit.text + "'");
        entry.mask.push_back(bit.text == "1" ? 1 : 0);
        if (is_punct(lex.peek(), ',')) lex.take();
        else break;
      }
    } else {
      lex.fail(op, "expected '=', 'in' or 'mask', found '" + op.text + "'");
    }

    if (lex.peek().kind == Token::String) entry.label = lex.take().text;
    doc.entries.push_back(std::move(entry));

    // Entries are separated by ';' or a line break.
    if (lex.peek().kind != Token::End && !is_punct(lex.peek(), ';') &&
        lex.peek().line == lex.last_line())
      lex.fail(lex.peek(), "expected ';' or a line break, found '" +
                               lex.peek().text + "'");
  }
  return doc;
}

std::string serialize_evidence(const EvidenceDocument& doc) {
  std::ostringstream out;
  for (const auto& entry : doc.entries) {
    out << entry.variable;
    switch (entry.kind) {
      case EvidenceKind::SingleState:
        out << " = " << entry.states.front();
        break;
      case EvidenceKind::StateSet:
        out << " in {";
        for (std::size_t s = 0; s < entry.states.size(); ++s) {
          if (s) out << ", ";
          out << entry.states[s];
        }
        out << "}";
        break;
      case EvidenceKind::Mask:
        out << " mask ";
        for (std::size_t b = 0; b < entry.mask.size(); ++b) {
          if (b) out << ", ";
          out << (entry.mask[b] ? "1" : "0");
        }
        break;
    }
    if (!entry.label.empty()) out << " \"" << entry.label << "\"";
    out << "\n";
  }
  return out.str();
}

bool operator==(const EvidenceEntry& a, const EvidenceEntry& b) {
  return a.variable == b.variable && a.kind == b.kind && a.states == b.states &&
         a.mask == b.mask && a.label == b.label;
}

bool operator==(const EvidenceDocument& a, const EvidenceDocument& b) {
  return a.entries == b.entries;
}

std::vector<Finding> to_findings(const EvidenceDocument& doc,
                                 const Network& net) {
  std::vector<Finding> findings;
  for (const auto& entry : doc.entries) {
    const auto var = net.find_variable(entry.variable);
    if (!var)
      throw Error(ErrorCode::UnknownVariable,
                  "no variable named '" + entry.variable + "'");
    Finding f;
    f.variable = *var;
    f.label = entry.label;

    if (entry.kind == EvidenceKind::Mask) {
      if (entry.mask.size() != net.arity(*var))
        throw Error(ErrorCode::BadMaskLength,
                    "mask for '" + entry.variable + "' has " +
                        std::to_string(entry.mask.size()) +
                        " entries, expected " +
                        std::to_string(net.arity(*var)));
      f.mask = entry.mask;
    } else {
      f.mask.assign(net.arity(*var), 0);
      for (const auto& state : entry.states) {
        const auto s = net.find_state(*var, state);
        if (!s)
          throw Error(ErrorCode::UnknownState,
                      "variable '" + entry.variable + "' has no state '" +
                          state + "'");
        f.mask[*s] = 1;
      }
    }
    findings.push_back(std::move(f));
  }
  return findings;
}

std::string network_digest(const Network& net) {
  const std::string canonical = serialize_network(to_document(net));
  std::uint64_t hash = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buffer[20];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

}  // namespace bnet
