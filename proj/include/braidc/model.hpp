#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace braidc {

enum class VarKind { continuous, binary };

struct VarRef {
  int id = -1;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = 0.0;
  std::string name;
};

struct LinTerm {
  double coef = 0.0;
  int var = -1;
};

struct QuadTerm {
  double coef = 0.0;
  int var_a = -1;
  int var_b = -1;
};

enum class Sense { le, eq, ge };

struct LinearConstraint {
  std::vector<LinTerm> terms;
  Sense sense = Sense::eq;
  double rhs = 0.0;
  std::string name;
};

struct QuadraticConstraint {
  std::vector<QuadTerm> bilinear;
  std::vector<LinTerm> linear;
  Sense sense = Sense::eq;
  double rhs = 0.0;
  std::string name;
};

struct QuadObjective {
  std::vector<QuadTerm> quad;
  std::vector<LinTerm> linear;
  double constant = 0.0;
};

/// Structural metadata carried alongside the model; written as comments
/// into exports and used by the witness generator to find its variables.
struct ModelMeta {
  int depth = 0;
  int alphabet_size = 0;
  int dim = 0;       // n
  int comp_dim = 0;  // n_C
  std::string objective;  // "frobenius" | "cnot-class" | "pe"
  bool linearized = false;
};

/// Solver-agnostic MIQCQP intermediate representation: bounded continuous
/// and binary variables, linear and quadratic constraints, quadratic
/// objective. Construction order is deterministic, so identical builds
/// export byte-identically.
class MiqcqpModel {
 public:
  int add_continuous(const std::string& name, double lower, double upper) {
    return add_var(name, VarKind::continuous, lower, upper);
  }

  int add_binary(const std::string& name) { return add_var(name, VarKind::binary, 0.0, 1.0); }

  void fix_var(int id, double value) {
    vars_.at(static_cast<size_t>(id)).lower = value;
    vars_.at(static_cast<size_t>(id)).upper = value;
  }

  void add_linear(LinearConstraint c) {
    check_terms(c.terms, c.name);
    linear_.push_back(std::move(c));
  }

  void add_quadratic(QuadraticConstraint c) {
    check_terms(c.linear, c.name);
    for (const QuadTerm& t : c.bilinear) {
      check_var(t.var_a, c.name);
      check_var(t.var_b, c.name);
    }
    quadratic_.push_back(std::move(c));
  }

  const std::vector<VarRef>& vars() const { return vars_; }
  const std::vector<LinearConstraint>& linear() const { return linear_; }
  const std::vector<QuadraticConstraint>& quadratic() const { return quadratic_; }
  QuadObjective& objective() { return objective_; }
  const QuadObjective& objective() const { return objective_; }
  ModelMeta& meta() { return meta_; }
  const ModelMeta& meta() const { return meta_; }

  int var_id(const std::string& name) const {
    auto it = name_index_.find(name);
    if (it == name_index_.end())
      throw std::out_of_range("MiqcqpModel: unknown variable '" + name + "'");
    return it->second;
  }

  bool has_var(const std::string& name) const { return name_index_.count(name) != 0; }

 private:
  int add_var(const std::string& name, VarKind kind, double lower, double upper) {
    if (name_index_.count(name))
      throw std::invalid_argument("MiqcqpModel: duplicate variable '" + name + "'");
    const int id = static_cast<int>(vars_.size());
    vars_.push_back(VarRef{id, kind, lower, upper, name});
    name_index_.emplace(name, id);
    return id;
  }

  void check_var(int id, const std::string& where) const {
    if (id < 0 || id >= static_cast<int>(vars_.size()))
      throw std::invalid_argument("MiqcqpModel: constraint '" + where +
                                  "' references unknown variable id " + std::to_string(id));
  }

  void check_terms(const std::vector<LinTerm>& terms, const std::string& where) const {
    for (const LinTerm& t : terms) check_var(t.var, where);
  }

  std::vector<VarRef> vars_;
  std::vector<LinearConstraint> linear_;
  std::vector<QuadraticConstraint> quadratic_;
  QuadObjective objective_;
  ModelMeta meta_;
  std::unordered_map<std::string, int> name_index_;
};

struct AssignmentCheck {
  double objective = 0.0;
  double max_violation = 0.0;
};

namespace detail {

inline double lin_value(const std::vector<LinTerm>& terms, std::span<const double> x) {
  double v = 0.0;
  for (const LinTerm& t : terms) v += t.coef * x[static_cast<size_t>(t.var)];
  return v;
}

inline double quad_value(const std::vector<QuadTerm>& terms, std::span<const double> x) {
  double v = 0.0;
  for (const QuadTerm& t : terms)
    v += t.coef * x[static_cast<size_t>(t.var_a)] * x[static_cast<size_t>(t.var_b)];
  return v;
}

inline double violation(double lhs, Sense sense, double rhs) {
  switch (sense) {
    case Sense::le: return std::max(0.0, lhs - rhs);
    case Sense::ge: return std::max(0.0, rhs - lhs);
    case Sense::eq: return std::abs(lhs - rhs);
  }
  return 0.0;
}

}  // namespace detail

/// Evaluates the objective and the maximum constraint violation (including
/// bounds and integrality) of a full assignment, indexed by variable id.
/// Used to certify externally produced solutions.
inline AssignmentCheck evaluate_assignment(const MiqcqpModel& model,
                                           std::span<const double> values) {
  if (values.size() != model.vars().size())
    throw std::invalid_argument("evaluate_assignment: assignment covers " +
                                std::to_string(values.size()) + " of " +
                                std::to_string(model.vars().size()) + " variables");
  AssignmentCheck out;
  const QuadObjective& obj = model.objective();
  out.objective =
      detail::quad_value(obj.quad, values) + detail::lin_value(obj.linear, values) + obj.constant;
  for (const VarRef& v : model.vars()) {
    const double x = values[static_cast<size_t>(v.id)];
    out.max_violation = std::max({out.max_violation, v.lower - x, x - v.upper});
    if (v.kind == VarKind::binary)
      out.max_violation = std::max(out.max_violation, std::abs(x - std::round(x)));
  }
  for (const LinearConstraint& c : model.linear())
    out.max_violation =
        std::max(out.max_violation, detail::violation(detail::lin_value(c.terms, values), c.sense, c.rhs));
  for (const QuadraticConstraint& c : model.quadratic()) {
    const double lhs = detail::quad_value(c.bilinear, values) + detail::lin_value(c.linear, values);
    out.max_violation = std::max(out.max_violation, detail::violation(lhs, c.sense, c.rhs));
  }
  return out;
}

/// Name-keyed assignment convenience (the JSON assignment-file form).
inline AssignmentCheck evaluate_assignment(
    const MiqcqpModel& model, const std::unordered_map<std::string, double>& by_name) {
  std::vector<double> values(model.vars().size(), 0.0);
  for (const VarRef& v : model.vars()) {
    auto it = by_name.find(v.name);
    if (it == by_name.end())
      throw std::invalid_argument("evaluate_assignment: missing variable '" + v.name + "'");
    values[static_cast<size_t>(v.id)] = it->second;
  }
  return evaluate_assignment(model, values);
}

/// Variable-count audit by family, matching the builder's construction
/// arithmetic; used by tests to pin the combinatorics.
struct ModelCounts {
  int binaries = 0;
  int y_components = 0;
  int z_components = 0;
  int other_continuous = 0;
  int linear_constraints = 0;
  int quadratic_constraints = 0;
  int onehot_constraints = 0;
};

inline ModelCounts audit_counts(const MiqcqpModel& model) {
  ModelCounts c;
  for (const VarRef& v : model.vars()) {
    if (v.kind == VarKind::binary)
      ++c.binaries;
    else if (v.name.rfind("Yre_", 0) == 0 || v.name.rfind("Yim_", 0) == 0)
      ++c.y_components;
    else if (v.name.rfind("z_", 0) == 0)
      ++c.z_components;
    else
      ++c.other_continuous;
  }
  c.linear_constraints = static_cast<int>(model.linear().size());
  c.quadratic_constraints = static_cast<int>(model.quadratic().size());
  for (const LinearConstraint& lc : model.linear())
    if (lc.name.rfind("onehot_", 0) == 0) ++c.onehot_constraints;
  return c;
}

}  // namespace braidc
