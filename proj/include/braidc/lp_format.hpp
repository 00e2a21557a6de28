#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "braidc/model.hpp"

namespace braidc {

class LpFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text that round-trips a double exactly (17 significant digits).
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

// Emits " + c name"-style terms, wrapping lines near 76 columns. LP
// readers treat line breaks between tokens as whitespace.
class LpWriter {
 public:
  explicit LpWriter(std::string& out) : out_(out) {}

  void begin_line(const std::string& head) {
    out_ += head;
    column_ = head.size();
  }

  void token(const std::string& tok) {
    if (column_ + tok.size() + 1 > 76) {
      out_ += "\n  ";
      column_ = 2;
    }
    out_ += ' ';
    out_ += tok;
    column_ += tok.size() + 1;
  }

  void signed_coef(double coef) {
    token(coef < 0 ? "-" : "+");
    token(format_number(std::abs(coef)));
  }

  void end_line() {
    out_ += '\n';
    column_ = 0;
  }

 private:
  std::string& out_;
  size_t column_ = 0;
};

inline void write_linear_terms(LpWriter& w, const std::vector<LinTerm>& terms,
                               const std::vector<VarRef>& vars) {
  for (const LinTerm& t : terms) {
    w.signed_coef(t.coef);
    w.token(vars[static_cast<size_t>(t.var)].name);
  }
}

inline void write_quad_terms(LpWriter& w, const std::vector<QuadTerm>& terms,
                             const std::vector<VarRef>& vars, double scale) {
  w.token("+");
  w.token("[");
  for (const QuadTerm& t : terms) {
    w.signed_coef(t.coef * scale);
    w.token(vars[static_cast<size_t>(t.var_a)].name);
    if (t.var_a == t.var_b) {
      w.token("^");
      w.token("2");
    } else {
      w.token("*");
      w.token(vars[static_cast<size_t>(t.var_b)].name);
    }
  }
  w.token("]");
}

inline const char* sense_text(Sense s) {
  switch (s) {
    case Sense::le: return "<=";
    case Sense::ge: return ">=";
    case Sense::eq: return "=";
  }
  return "=";
}

}  // namespace detail

/// Serializes the model as LP-format text: quadratic objective in the
/// bracketed "[ ... ] / 2" convention, quadratic constraints in plain
/// brackets, a Bounds line per variable in id order, and a Binaries
/// section. Deterministic: equal models produce identical bytes.
inline std::string lp_string(const MiqcqpModel& model) {
  std::string out;
  const auto& vars = model.vars();
  const ModelMeta& meta = model.meta();
  out += "\\ braidc LP export\n";
  out += "\\ meta depth=" + std::to_string(meta.depth) +
         " alphabet=" + std::to_string(meta.alphabet_size) + " dim=" + std::to_string(meta.dim) +
         " comp=" + std::to_string(meta.comp_dim) + " objective=" + meta.objective +
         " linearized=" + (meta.linearized ? std::string("1") : std::string("0")) + "\n";
  out += "Minimize\n";
  {
    detail::LpWriter w(out);
    w.begin_line(" obj:");
    detail::write_linear_terms(w, model.objective().linear, vars);
    if (!model.objective().quad.empty()) {
      detail::write_quad_terms(w, model.objective().quad, vars, 2.0);
      w.token("/");
      w.token("2");
    }
    if (model.objective().constant != 0.0) w.signed_coef(model.objective().constant);
    w.end_line();
  }
  out += "Subject To\n";
  for (const LinearConstraint& c : model.linear()) {
    detail::LpWriter w(out);
    w.begin_line(" " + c.name + ":");
    detail::write_linear_terms(w, c.terms, vars);
    w.token(detail::sense_text(c.sense));
    w.token(format_number(c.rhs));
    w.end_line();
  }
  for (const QuadraticConstraint& c : model.quadratic()) {
    detail::LpWriter w(out);
    w.begin_line(" " + c.name + ":");
    detail::write_linear_terms(w, c.linear, vars);
    detail::write_quad_terms(w, c.bilinear, vars, 1.0);
    w.token(detail::sense_text(c.sense));
    w.token(format_number(c.rhs));
    w.end_line();
  }
  out += "Bounds\n";
  for (const VarRef& v : vars) {
    if (v.lower == v.upper) {
      out += " " + v.name + " = " + format_number(v.lower) + "\n";
    } else {
      out += " " + format_number(v.lower) + " <= " + v.name + " <= " + format_number(v.upper) +
             "\n";
    }
  }
  out += "Binaries\n";
  {
    detail::LpWriter w(out);
    w.begin_line(" ");
    for (const VarRef& v : vars)
      if (v.kind == VarKind::binary) w.token(v.name);
    w.end_line();
  }
  out += "End\n";
  return out;
}

/// Atomic export: write to a temp file in the destination directory, then
/// rename over the target.
inline void export_model(const MiqcqpModel& model, const std::string& path) {
  const std::string text = lp_string(model);
  const std::filesystem::path target(path);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw LpFormatError("export_model: cannot open " + tmp.string());
    f << text;
    if (!f) throw LpFormatError("export_model: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

namespace detail {

struct LpTokens {
  std::vector<std::string> tokens;
  size_t pos = 0;

  bool done() const { return pos >= tokens.size(); }
  const std::string& peek() const {
    static const std::string empty;
    return done() ? empty : tokens[pos];
  }
  std::string next() {
    if (done()) throw LpFormatError("parse_model: unexpected end of input");
    return tokens[pos++];
  }
};

inline bool is_number_token(const std::string& t) {
  if (t.empty()) return false;
  const char c = t[0];
  return (c >= '0' && c <= '9') || c == '.' ||
         ((c == '-' || c == '+') && t.size() > 1 && ((t[1] >= '0' && t[1] <= '9') || t[1] == '.'));
}

inline double parse_double(const std::string& t) {
  try {
    size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw LpFormatError("parse_model: expected a number, got '" + t + "'");
  }
}

// Expression grammar: ( sign number ( name ( '*' name | '^' '2' )? )? )*
// with one optional [ ... ] bracket group; objective brackets carry a
// trailing "/ 2". Stops at a sense token or section keyword.
struct ParsedExpr {
  std::vector<LinTerm> linear;
  std::vector<QuadTerm> quad;
  double constant = 0.0;
};

inline bool is_sense(const std::string& t) { return t == "<=" || t == ">=" || t == "="; }

inline int lookup_var(const MiqcqpModel& model, const std::string& name) {
  if (!model.has_var(name))
    throw LpFormatError("parse_model: reference to undeclared variable '" + name + "'");
  return model.var_id(name);
}

inline ParsedExpr parse_expr(LpTokens& ts, const MiqcqpModel& model, bool objective_scaling) {
  ParsedExpr out;
  bool in_bracket = false;
  while (!ts.done()) {
    const std::string& t = ts.peek();
    if (!in_bracket && (is_sense(t) || t == "Subject" || t == "Bounds" || t == "Binaries" ||
                        t == "End"))
      break;
    if (t == "[") {
      ts.next();
      in_bracket = true;
      continue;
    }
    if (t == "]") {
      ts.next();
      in_bracket = false;
      if (objective_scaling) {
        if (ts.next() != "/" || ts.next() != "2")
          throw LpFormatError("parse_model: objective bracket must be followed by / 2");
      }
      continue;
    }
    double sign = 1.0;
    std::string tok = ts.next();
    if (tok == "+" || tok == "-") {
      sign = tok == "-" ? -1.0 : 1.0;
      tok = ts.next();
      if (tok == "[") {
        in_bracket = true;
        continue;
      }
    }
    if (!is_number_token(tok))
      throw LpFormatError("parse_model: expected coefficient, got '" + tok + "'");
    const double coef = sign * parse_double(tok);
    if (ts.done() || is_sense(ts.peek()) || ts.peek() == "+" || ts.peek() == "-" ||
        ts.peek() == "]" || ts.peek() == "Subject") {
      out.constant += coef;
      continue;
    }
    const std::string name = ts.next();
    const int var = lookup_var(model, name);
    if (!in_bracket) {
      out.linear.push_back({coef, var});
      continue;
    }
    const double scaled = objective_scaling ? coef / 2.0 : coef;
    if (ts.peek() == "^") {
      ts.next();
      if (ts.next() != "2") throw LpFormatError("parse_model: only squares supported");
      out.quad.push_back({scaled, var, var});
    } else if (ts.peek() == "*") {
      ts.next();
      const std::string other = ts.next();
      out.quad.push_back({scaled, var, lookup_var(model, other)});
    } else {
      throw LpFormatError("parse_model: bracketed term must be a square or a product");
    }
  }
  return out;
}

}  // namespace detail

/// Parses LP text produced by lp_string back into a model. Variables are
/// recreated in Bounds order, so a parse/export cycle is byte-identical.
inline MiqcqpModel parse_model_text(const std::string& text) {
  MiqcqpModel model;

  // Pass 1: sections and variable declarations (line-based).
  std::vector<std::string> obj_tokens, cons_tokens;
  std::istringstream in(text);
  std::string line;
  enum class Section { none, objective, constraints, bounds, binaries, end };
  Section section = Section::none;
  std::vector<std::string> binary_names;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("\\ meta ", 0) == 0) {
      std::istringstream meta_in(line.substr(7));
      std::string kv;
      ModelMeta& meta = model.meta();
      while (meta_in >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        if (key == "depth") meta.depth = std::stoi(value);
        else if (key == "alphabet") meta.alphabet_size = std::stoi(value);
        else if (key == "dim") meta.dim = std::stoi(value);
        else if (key == "comp") meta.comp_dim = std::stoi(value);
        else if (key == "objective") meta.objective = value;
        else if (key == "linearized") meta.linearized = value == "1";
      }
      continue;
    }
    if (!line.empty() && line[0] == '\\') continue;
    if (line == "Minimize") { section = Section::objective; continue; }
    if (line == "Subject To") { section = Section::constraints; continue; }
    if (line == "Bounds") { section = Section::bounds; continue; }
    if (line == "Binaries") { section = Section::binaries; continue; }
    if (line == "End") { section = Section::end; continue; }

    std::istringstream ls(line);
    std::string tok;
    switch (section) {
      case Section::objective:
        while (ls >> tok) obj_tokens.push_back(tok);
        break;
      case Section::constraints:
        while (ls >> tok) cons_tokens.push_back(tok);
        break;
      case Section::bounds: {
        std::vector<std::string> parts;
        while (ls >> tok) parts.push_back(tok);
        if (parts.empty()) break;
        if (parts.size() == 5 && parts[1] == "<=" && parts[3] == "<=") {
          model.add_continuous(parts[2], detail::parse_double(parts[0]),
                               detail::parse_double(parts[4]));
        } else if (parts.size() == 3 && parts[1] == "=") {
          const int id = model.add_continuous(parts[0], 0.0, 0.0);
          model.fix_var(id, detail::parse_double(parts[2]));
        } else {
          throw LpFormatError("parse_model: unsupported bounds line '" + line + "'");
        }
        break;
      }
      case Section::binaries:
        while (ls >> tok) binary_names.push_back(tok);
        break;
      default:
        if (!line.empty())
          throw LpFormatError("parse_model: content outside any section: '" + line + "'");
    }
  }
  if (section != Section::end) throw LpFormatError("parse_model: missing End marker");

  // Binary names flip the kind of already-declared variables. VarRef is
  // rebuilt rather than mutated so ids and order stay untouched.
  {
    MiqcqpModel rebuilt;
    rebuilt.meta() = model.meta();
    std::vector<bool> binary(model.vars().size(), false);
    for (const std::string& name : binary_names) binary[static_cast<size_t>(model.var_id(name))] = true;
    for (const VarRef& v : model.vars()) {
      if (binary[static_cast<size_t>(v.id)])
        rebuilt.add_binary(v.name);
      else
        rebuilt.add_continuous(v.name, v.lower, v.upper);
    }
    model = std::move(rebuilt);
  }

  // Pass 2: objective and constraints (token-based; immune to wrapping).
  {
    detail::LpTokens ts{obj_tokens, 0};
    if (ts.done() || ts.next() != "obj:")
      throw LpFormatError("parse_model: objective must start with 'obj:'");
    detail::ParsedExpr expr = detail::parse_expr(ts, model, /*objective_scaling=*/true);
    model.objective().linear = std::move(expr.linear);
    model.objective().quad = std::move(expr.quad);
    model.objective().constant = expr.constant;
  }
  {
    detail::LpTokens ts{cons_tokens, 0};
    while (!ts.done()) {
      std::string head = ts.next();
      if (head.empty() || head.back() != ':')
        throw LpFormatError("parse_model: constraint must start with 'name:', got '" + head + "'");
      const std::string name = head.substr(0, head.size() - 1);
      detail::ParsedExpr expr = detail::parse_expr(ts, model, /*objective_scaling=*/false);
      const std::string sense_tok = ts.next();
      Sense sense;
      if (sense_tok == "<=") sense = Sense::le;
      else if (sense_tok == ">=") sense = Sense::ge;
      else if (sense_tok == "=") sense = Sense::eq;
      else throw LpFormatError("parse_model: bad sense '" + sense_tok + "'");
      const double rhs = detail::parse_double(ts.next()) - expr.constant;
      if (expr.quad.empty()) {
        model.add_linear({std::move(expr.linear), sense, rhs, name});
      } else {
        model.add_quadratic({std::move(expr.quad), std::move(expr.linear), sense, rhs, name});
      }
    }
  }
  return model;
}

inline MiqcqpModel parse_model(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw LpFormatError("parse_model: cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_model_text(buf.str());
}

}  // namespace braidc
