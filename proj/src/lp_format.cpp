#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "dagopt/mip.hpp"

namespace dagopt {

namespace {

constexpr int kTermsPerLine = 6;

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes "a x + b y - c z" with line wrapping.
class ExprWriter {
 public:
  explicit ExprWriter(std::ostream& out) : out_(out) {}

  void term(double coef, const std::string& body) {
    if (count_ > 0 && count_ % kTermsPerLine == 0) out_ << "\n   ";
    if (count_ == 0) {
      out_ << (coef < 0 ? "- " : "");
    } else {
      out_ << (coef < 0 ? " - " : " + ");
    }
    out_ << number(std::fabs(coef));
    if (!body.empty()) out_ << ' ' << body;
    ++count_;
  }
  bool empty() const { return count_ == 0; }

 private:
  std::ostream& out_;
  int count_ = 0;
};

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::kLe: return "<=";
    case Sense::kGe: return ">=";
    case Sense::kEq: return "=";
  }
  return "?";
}

}  // namespace

void export_lp(const MipModel& model, std::ostream& out) {
  const auto& vars = model.variables();
  const auto& meta = model.metadata();
  out << "\\ model " << to_string(meta.kind) << " m=" << meta.m << " n=" << meta.n
      << " lambda=" << number(meta.lambda) << " big_m=" << number(meta.big_m) << "\n";

  out << "Minimize\n obj: ";
  const Objective& obj = model.objective();
  ExprWriter w(out);
  if (obj.constant != 0.0) w.term(obj.constant, "");
  for (const auto& t : obj.linear) w.term(t.coef, vars[t.var].name);
  if (!obj.quadratic.empty()) {
    out << (w.empty() ? "[ " : "\n   + [ ");
    ExprWriter q(out);
    // Bracketed terms are halved by the trailing "/ 2".
    for (const auto& t : obj.quadratic) {
      const std::string body = t.a == t.b ? vars[t.a].name + " ^ 2" : vars[t.a].name + " * " + vars[t.b].name;
      q.term(2.0 * t.coef, body);
    }
    out << " ] / 2";
  } else if (w.empty()) {
    out << "0";
  }
  out << "\nSubject To\n";
  for (const auto& c : model.constraints()) {
    out << ' ' << c.name << ": ";
    ExprWriter r(out);
    for (const auto& t : c.terms) r.term(t.coef, vars[t.var].name);
    if (r.empty()) out << "0 " << vars.front().name;
    out << ' ' << sense_text(c.sense) << ' ' << number(c.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : vars) {
    if (v.kind == VarKind::kBinary) continue;
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      out << ' ' << v.name << " free\n";
    } else if (std::isinf(v.upper)) {
      out << ' ' << v.name << " >= " << number(v.lower) << "\n";
    } else {
      out << ' ' << number(v.lower) << " <= " << v.name << " <= " << number(v.upper) << "\n";
    }
  }
  out << "Binaries\n";
  int on_line = 0;
  for (const auto& v : vars) {
    if (v.kind != VarKind::kBinary) continue;
    out << ' ' << v.name;
    if (++on_line == 10) {
      out << "\n";
      on_line = 0;
    }
  }
  if (on_line) out << "\n";
  out << "End\n";
}

void export_lp(const MipModel& model, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  export_lp(model, f);
  if (!f) throw std::runtime_error("failed writing " + path);
}

// ---------------------------------------------------------------------------
// Reader

namespace {

enum class Section { kNone, kObjective, kConstraints, kBounds, kBinaries, kGenerals, kEnd };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::optional<double> parse_number(const std::string& tok) {
  const std::string l = lower(tok);
  if (l == "inf" || l == "+inf" || l == "infinity" || l == "+infinity") return std::numeric_limits<double>::infinity();
  if (l == "-inf" || l == "-infinity") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

bool is_sense(const std::string& t) {
  return t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">" || t == "=<" || t == "=>";
}

Sense to_sense(const std::string& t) {
  if (t == "<=" || t == "<" || t == "=<") return Sense::kLe;
  if (t == ">=" || t == ">" || t == "=>") return Sense::kGe;
  return Sense::kEq;
}

struct ParsedTerm {
  std::string var;
  double coef;
};
struct ParsedQuad {
  std::string a, b;
  double coef;  // as written inside the brackets
};
struct ParsedExpr {
  std::vector<ParsedTerm> linear;
  std::vector<ParsedQuad> quadratic;
  double constant = 0.0;
};
struct ParsedRow {
  std::string name;
  ParsedExpr expr;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
};

class LpParser {
 public:
  explicit LpParser(std::istream& in) { tokenize(in); }

  MipModel parse() {
    while (i_ < toks_.size()) {
      const Section s = section_at(i_);
      if (s == Section::kEnd) break;
      if (s == Section::kNone) fail("unexpected token '" + toks_[i_] + "'");
      section_ = s;
      skip_section_keyword();
      switch (section_) {
        case Section::kObjective: parse_objective(); break;
        case Section::kConstraints:
          while (i_ < toks_.size() && section_at(i_) == Section::kNone) parse_row();
          break;
        case Section::kBounds:
          while (i_ < toks_.size() && section_at(i_) == Section::kNone) parse_bound();
          break;
        case Section::kBinaries:
        case Section::kGenerals:
          while (i_ < toks_.size() && section_at(i_) == Section::kNone) {
            note(toks_[i_]);
            binaries_.push_back(toks_[i_++]);
          }
          break;
        default: break;
      }
    }
    return build();
  }

 private:
  void tokenize(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (auto p = line.find('\\'); p != std::string::npos) line.resize(p);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) {
        // "name:" may be glued to the first term.
        auto colon = tok.find(':');
        if (colon != std::string::npos && colon + 1 < tok.size()) {
          toks_.push_back(tok.substr(0, colon + 1));
          toks_.push_back(tok.substr(colon + 1));
        } else {
          toks_.push_back(tok);
        }
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("LP parse error near token " + std::to_string(i_) + ": " + what);
  }

  Section section_at(std::size_t i) const {
    const std::string t = lower(toks_[i]);
    if (t == "minimize" || t == "minimise" || t == "min") return Section::kObjective;
    if (t == "subject" && i + 1 < toks_.size() && lower(toks_[i + 1]) == "to") return Section::kConstraints;
    if (t == "st" || t == "s.t.") return Section::kConstraints;
    if (t == "bounds" || t == "bound") return Section::kBounds;
    if (t == "binaries" || t == "binary" || t == "bin") return Section::kBinaries;
    if (t == "generals" || t == "general") return Section::kGenerals;
    if (t == "end") return Section::kEnd;
    return Section::kNone;
  }

  void skip_section_keyword() {
    if (lower(toks_[i_]) == "subject") ++i_;
    ++i_;
  }

  void note(const std::string& name) {
    if (!seen_.count(name)) {
      seen_.emplace(name, order_.size());
      order_.push_back(name);
    }
  }

  bool expr_end(std::size_t i) const {
    if (i >= toks_.size()) return true;
    const std::string& t = toks_[i];
    return is_sense(t) || section_at(i) != Section::kNone || t.back() == ':';
  }

  ParsedExpr parse_expr() {
    ParsedExpr e;
    double sign = 1.0;
    while (!expr_end(i_)) {
      const std::string& t = toks_[i_];
      if (t == "+") {
        ++i_;
        continue;
      }
      if (t == "-") {
        sign = -sign;
        ++i_;
        continue;
      }
      if (t == "[") {
        ++i_;
        parse_quadratic(e, sign);
        sign = 1.0;
        continue;
      }
      double coef = 1.0;
      if (auto v = parse_number(t)) {
        coef = *v;
        ++i_;
        if (expr_end(i_) || toks_[i_] == "+" || toks_[i_] == "-" || toks_[i_] == "[") {
          e.constant += sign * coef;
          sign = 1.0;
          continue;
        }
      }
      note(toks_[i_]);
      e.linear.push_back({toks_[i_++], sign * coef});
      sign = 1.0;
    }
    return e;
  }

  void parse_quadratic(ParsedExpr& e, double outer_sign) {
    double sign = 1.0;
    while (i_ < toks_.size() && toks_[i_] != "]" && toks_[i_].rfind("]", 0) != 0) {
      const std::string& t = toks_[i_];
      if (t == "+") {
        ++i_;
        continue;
      }
      if (t == "-") {
        sign = -sign;
        ++i_;
        continue;
      }
      double coef = 1.0;
      if (auto v = parse_number(t)) {
        coef = *v;
        ++i_;
      }
      if (i_ >= toks_.size()) fail("truncated quadratic term");
      std::string a = toks_[i_++];
      std::string b;
      if (i_ < toks_.size() && (toks_[i_] == "^" || toks_[i_] == "^2")) {
        if (toks_[i_++] == "^") ++i_;  // exponent
        b = a;
      } else if (i_ < toks_.size() && toks_[i_] == "*") {
        ++i_;
        b = toks_[i_++];
      } else {
        fail("expected '^ 2' or '* var' in quadratic term");
      }
      note(a);
      note(b);
      e.quadratic.push_back({a, b, outer_sign * sign * coef});
      sign = 1.0;
    }
    if (i_ >= toks_.size()) fail("unterminated '['");
    const std::string close = toks_[i_++];
    if (close == "]" || close == "]/") {
      if (close == "]" && i_ < toks_.size() && toks_[i_] == "/") ++i_;
      if (i_ < toks_.size() && toks_[i_] == "2") {
        ++i_;
        return;
      }
    } else if (close == "]/2") {
      return;
    }
    fail("expected '] / 2'");
  }

  void parse_objective() {
    if (i_ < toks_.size() && toks_[i_].back() == ':') ++i_;
    objective_ = parse_expr();
  }

  void parse_row() {
    ParsedRow row;
    if (toks_[i_].back() != ':') fail("constraint without a name");
    row.name = toks_[i_].substr(0, toks_[i_].size() - 1);
    ++i_;
    row.expr = parse_expr();
    if (i_ >= toks_.size() || !is_sense(toks_[i_])) fail("missing sense in row " + row.name);
    row.sense = to_sense(toks_[i_++]);
    if (i_ >= toks_.size()) fail("missing rhs in row " + row.name);
    double sign = 1.0;
    if (toks_[i_] == "-") {
      sign = -1.0;
      ++i_;
    }
    auto rhs = parse_number(toks_[i_]);
    if (!rhs) fail("non-numeric rhs in row " + row.name);
    ++i_;
    row.rhs = sign * *rhs;
    rows_.push_back(std::move(row));
  }

  std::pair<double, double>& bound_entry(const std::string& name) {
    return bounds_.try_emplace(name, 0.0, std::numeric_limits<double>::infinity()).first->second;
  }

  void parse_bound() {
    const std::string& first = toks_[i_];
    if (auto lb = parse_number(first)) {
      // lb <= x [<= ub]
      if (i_ + 2 >= toks_.size() || !is_sense(toks_[i_ + 1])) fail("malformed bound");
      const std::string name = toks_[i_ + 2];
      note(name);
      auto& b = bound_entry(name);
      b.first = *lb;
      i_ += 3;
      if (i_ + 1 < toks_.size() && is_sense(toks_[i_])) {
        auto ub = parse_number(toks_[i_ + 1]);
        if (!ub) fail("malformed upper bound for " + name);
        b.second = *ub;
        i_ += 2;
      }
      return;
    }
    note(first);
    auto& b = bound_entry(first);
    if (i_ + 1 < toks_.size() && lower(toks_[i_ + 1]) == "free") {
      b = {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
      i_ += 2;
      return;
    }
    if (i_ + 2 >= toks_.size() || !is_sense(toks_[i_ + 1])) fail("malformed bound for " + first);
    auto v = parse_number(toks_[i_ + 2]);
    if (!v) fail("malformed bound value for " + first);
    switch (to_sense(toks_[i_ + 1])) {
      case Sense::kGe: b.first = *v; break;
      case Sense::kLe: b.second = *v; break;
      case Sense::kEq: b = {*v, *v}; break;
    }
    i_ += 3;
  }

  MipModel build() {
    MipModel model;
    std::unordered_map<std::string, bool> is_binary;
    for (const auto& b : binaries_) is_binary[b] = true;
    for (const auto& name : order_) {
      Variable v{name, VarKind::kContinuous, 0.0, std::numeric_limits<double>::infinity()};
      if (is_binary.count(name)) {
        v.kind = VarKind::kBinary;
        v.upper = 1.0;
      }
      if (auto it = bounds_.find(name); it != bounds_.end()) {
        v.lower = it->second.first;
        v.upper = it->second.second;
      }
      model.add_variable(std::move(v));
    }
    auto linear = [&](const std::vector<ParsedTerm>& terms) {
      std::vector<LinearTerm> out;
      for (const auto& t : terms) out.push_back({model.variable_index(t.var), t.coef});
      return out;
    };
    Objective& obj = model.objective();
    obj.constant = objective_.constant;
    obj.linear = linear(objective_.linear);
    for (const auto& q : objective_.quadratic) {
      std::size_t a = model.variable_index(q.a);
      std::size_t b = model.variable_index(q.b);
      if (a > b) std::swap(a, b);
      obj.quadratic.push_back({a, b, q.coef / 2.0});
    }
    for (auto& r : rows_) {
      if (r.expr.constant != 0.0) r.rhs -= r.expr.constant;
      model.add_constraint({r.name, linear(r.expr.linear), r.sense, r.rhs});
    }
    return model;
  }

  std::vector<std::string> toks_;
  std::size_t i_ = 0;
  Section section_ = Section::kNone;
  ParsedExpr objective_;
  std::vector<ParsedRow> rows_;
  std::unordered_map<std::string, std::pair<double, double>> bounds_;
  std::vector<std::string> binaries_;
  std::unordered_map<std::string, std::size_t> seen_;
  std::vector<std::string> order_;
};

}  // namespace

MipModel read_lp(std::istream& in) { return LpParser(in).parse(); }

MipModel read_lp_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_lp(f);
}

std::string sidecar_json(const MipModel& model) {
  const auto& meta = model.metadata();
  nlohmann::ordered_json j;
  j["model_kind"] = to_string(meta.kind);
  j["m"] = meta.m;
  j["n"] = meta.n;
  j["lambda"] = meta.lambda;
  j["big_m"] = meta.big_m;
  j["pair_reduction"] = meta.reduced;
  j["counts"] = {{"variables", model.variables().size()},
                 {"binaries", model.binary_count()},
                 {"continuous", model.continuous_count()},
                 {"constraints", model.constraints().size()},
                 {"quadratic_terms", model.objective().quadratic.size()}};
  nlohmann::ordered_json rows;
  for (const auto& [prefix, count] : model.row_counts_by_prefix()) rows[prefix] = count;
  j["rows_by_prefix"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace dagopt
