#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "braidc/alphabet.hpp"
#include "braidc/complex_matrix.hpp"
#include "braidc/invariants.hpp"
#include "braidc/model_builder.hpp"
#include "braidc/program.hpp"
#include "braidc/targets.hpp"

namespace braidc {

enum class SearchMode { exhaustive, branch_and_bound, beam };

/// Prunes duplicate short prefixes: programs up to a small depth whose
/// products coincide (within tol) with an earlier-ordered program's
/// product. Only non-representatives are rejected, so every product class
/// keeps its (shortest, lexicographically first) member.
class PrefixFilter {
 public:
  PrefixFilter() = default;
  PrefixFilter(int depth, std::set<std::vector<int>> pruned, int representatives)
      : depth_(depth), pruned_(std::move(pruned)), representatives_(representatives) {}

  int depth() const { return depth_; }
  int representative_count() const { return representatives_; }
  int pruned_count() const { return static_cast<int>(pruned_.size()); }

  bool admits(const std::vector<int>& program) const {
    if (static_cast<int>(program.size()) > depth_) return true;
    return pruned_.find(program) == pruned_.end();
  }

 private:
  int depth_ = 0;
  std::set<std::vector<int>> pruned_;
  int representatives_ = 0;
};

/// Enumerates all programs up to max_prefix_depth in (length, lex) order
/// and marks as prunable every program whose product equals an earlier
/// representative's product within tol. Children of pruned prefixes are
/// never enumerated; the search discards them at the prefix.
inline PrefixFilter canonical_prefix_pruning(const GateAlphabet& alphabet, double tol,
                                             int max_prefix_depth = 2) {
  struct Node {
    std::vector<int> program;
    ComplexMatrix product;
  };
  std::vector<Node> frontier{{{}, ComplexMatrix::identity(alphabet.n)}};
  std::vector<ComplexMatrix> representatives{frontier[0].product};
  std::set<std::vector<int>> pruned;
  for (int depth = 1; depth <= max_prefix_depth; ++depth) {
    std::vector<Node> next;
    for (const Node& node : frontier)
      for (int i = 0; i < alphabet.size(); ++i) {
        Node child{node.program, alphabet.gates[static_cast<size_t>(i)] * node.product};
        child.program.push_back(i);
        bool duplicate = false;
        for (const ComplexMatrix& rep : representatives)
          if (max_abs_diff(rep, child.product) <= tol) {
            duplicate = true;
            break;
          }
        if (duplicate) {
          pruned.insert(child.program);
        } else {
          representatives.push_back(child.product);
          next.push_back(std::move(child));
        }
      }
    frontier = std::move(next);
  }
  return PrefixFilter(max_prefix_depth, std::move(pruned),
                      static_cast<int>(representatives.size()));
}

struct SearchConfig {
  ModelObjective objective = ModelObjective::frobenius;
  ComplexMatrix target;  // required for the Frobenius objective
  int max_depth = 1;
  SearchMode mode = SearchMode::exhaustive;
  int beam_width = 1;
  double leakage_tolerance = kLeakageTolerance;
  std::optional<double> prune_bound;  // starting incumbent for branch-and-bound
  std::uint64_t seed = 0;             // reserved; current modes are deterministic
  const PrefixFilter* prefix_filter = nullptr;
};

struct SearchResult {
  Program best_program;
  double best_value = std::numeric_limits<double>::infinity();
  EvaluationReport report;
  long long nodes_explored = 0;
  bool proven_optimal = false;
  bool found = false;
};

namespace detail {

// Objective value of a product's computational block. Invariant
// objectives require an (approximately) unitary block, so leaky products
// are inadmissible for them rather than scored.
inline bool score_product(const ComplexMatrix& product, const SearchConfig& cfg,
                          const GateAlphabet& alphabet, double* value) {
  const ComplexMatrix block = product.block(0, 0, alphabet.n_C, alphabet.n_C);
  switch (cfg.objective) {
    case ModelObjective::frobenius:
      *value = j_distance(cfg.target, block);
      return true;
    case ModelObjective::cnot_class:
    case ModelObjective::perfect_entangler: {
      if (alphabet.n_NC > 0 && leakage_of(product, alphabet.n_C) > cfg.leakage_tolerance)
        return false;
      const LocalInvariants g = local_invariants(block);
      *value = cfg.objective == ModelObjective::cnot_class ? d_cnot(g) : d_pe(g);
      return true;
    }
  }
  return false;
}

// Tie-break: smaller value, then shorter program, then lexicographically
// smaller indices. Keeps every mode deterministic.
inline bool better_candidate(double value, const std::vector<int>& prog, double best_value,
                             const std::vector<int>& best_prog, bool found) {
  if (!found) return true;
  if (value != best_value) return value < best_value;
  if (prog.size() != best_prog.size()) return prog.size() < best_prog.size();
  return prog < best_prog;
}

struct DfsContext {
  const GateAlphabet& alphabet;
  const SearchConfig& cfg;
  SearchResult result;
  std::vector<int> current;
  double gate_step_bound = 0.0;  // max over gates of ||G - I||_F
  bool use_bound = false;
  double incumbent = std::numeric_limits<double>::infinity();
};

inline void dfs(DfsContext& ctx, const ComplexMatrix& product, int depth_left) {
  if (ctx.cfg.prefix_filter && !ctx.cfg.prefix_filter->admits(ctx.current)) return;

  double value = 0.0;
  const bool admissible = score_product(product, ctx.cfg, ctx.alphabet, &value);
  if (ctx.use_bound && admissible) {
    const double dist_now = std::sqrt(value);
    const double reachable = std::max(0.0, dist_now - depth_left * ctx.gate_step_bound);
    if (reachable * reachable >= ctx.incumbent) return;  // subtree cannot improve
  }
  ++ctx.result.nodes_explored;
  // With a bound active only strict improvements over the incumbent are
  // recorded (surviving nodes can still score above it); without one the
  // full tie-break order applies.
  const bool improves =
      ctx.use_bound ? value < ctx.incumbent
                    : better_candidate(value, ctx.current, ctx.result.best_value,
                                       ctx.result.best_program.indices, ctx.result.found);
  if (admissible && improves) {
    ctx.result.best_value = value;
    ctx.result.best_program.indices = ctx.current;
    ctx.result.found = true;
    if (ctx.use_bound) ctx.incumbent = value;
  }
  if (depth_left == 0) return;
  for (int i = 0; i < ctx.alphabet.size(); ++i) {
    ctx.current.push_back(i);
    dfs(ctx, ctx.alphabet.gates[static_cast<size_t>(i)] * product, depth_left - 1);
    ctx.current.pop_back();
  }
}

}  // namespace detail

/// Depth-first branch-and-bound for the Frobenius objective. Each applied
/// unitary gate moves the block distance by at most ||G - I||_F, which
/// yields an admissible optimistic bound per subtree. The optimal value
/// always matches exhaustive search; among equal-valued optima this mode
/// returns the first one found (pruning may skip the others), whereas
/// exhaustive mode applies the full shortest-then-lexicographic
/// tie-break. A finite incumbent restricts the search to strictly
/// improving programs and is returned unchanged if none exists.
inline SearchResult branch_bound_frobenius(const GateAlphabet& alphabet,
                                           const ComplexMatrix& target, int max_depth,
                                           std::optional<double> incumbent = std::nullopt,
                                           const PrefixFilter* filter = nullptr) {
  for (const ComplexMatrix& g : alphabet.gates)
    if (!is_unitary(g, 1e-8))
      throw std::invalid_argument("branch_bound_frobenius: alphabet gates must be unitary");
  SearchConfig cfg;
  cfg.objective = ModelObjective::frobenius;
  cfg.target = target;
  cfg.max_depth = max_depth;
  cfg.mode = SearchMode::branch_and_bound;
  cfg.prefix_filter = filter;
  detail::DfsContext ctx{alphabet, cfg, {}, {}, 0.0, true,
                         incumbent.value_or(std::numeric_limits<double>::infinity())};
  const ComplexMatrix eye = ComplexMatrix::identity(alphabet.n);
  for (const ComplexMatrix& g : alphabet.gates)
    ctx.gate_step_bound = std::max(ctx.gate_step_bound, frobenius_norm(g - eye));
  detail::dfs(ctx, eye, max_depth);
  if (!ctx.result.found && incumbent.has_value()) {
    ctx.result.best_value = *incumbent;  // nothing strictly better exists
  }
  ctx.result.proven_optimal = true;
  if (ctx.result.found)
    ctx.result.report =
        evaluate_report(ctx.result.best_program, alphabet, target);
  return ctx.result;
}

namespace detail {

inline SearchResult beam_search(const GateAlphabet& alphabet, const SearchConfig& cfg) {
  struct BeamState {
    std::vector<int> program;
    ComplexMatrix product;
    double value = 0.0;
    bool admissible = false;
  };
  SearchResult result;
  BeamState root{{}, ComplexMatrix::identity(alphabet.n), 0.0, false};
  root.admissible = score_product(root.product, cfg, alphabet, &root.value);
  ++result.nodes_explored;
  if (root.admissible) {
    result.best_value = root.value;
    result.best_program.indices = {};
    result.found = true;
  }
  std::vector<BeamState> beam{std::move(root)};
  for (int depth = 1; depth <= cfg.max_depth && !beam.empty(); ++depth) {
    std::vector<BeamState> candidates;
    candidates.reserve(beam.size() * static_cast<size_t>(alphabet.size()));
    for (const BeamState& state : beam)
      for (int i = 0; i < alphabet.size(); ++i) {
        BeamState child;
        child.program = state.program;
        child.program.push_back(i);
        child.product = alphabet.gates[static_cast<size_t>(i)] * state.product;
        child.admissible = score_product(child.product, cfg, alphabet, &child.value);
        ++result.nodes_explored;
        if (child.admissible &&
            better_candidate(child.value, child.program, result.best_value,
                             result.best_program.indices, result.found)) {
          result.best_value = child.value;
          result.best_program.indices = child.program;
          result.found = true;
        }
        candidates.push_back(std::move(child));
      }
    // Admissible states first by (value, tie-break); leaky states sink to
    // the back and survive only if the beam has room.
    std::sort(candidates.begin(), candidates.end(), [](const BeamState& a, const BeamState& b) {
      if (a.admissible != b.admissible) return a.admissible;
      if (a.value != b.value) return a.value < b.value;
      if (a.program.size() != b.program.size()) return a.program.size() < b.program.size();
      return a.program < b.program;
    });
    if (static_cast<int>(candidates.size()) > cfg.beam_width)
      candidates.resize(static_cast<size_t>(cfg.beam_width));
    beam = std::move(candidates);
  }
  return result;
}

}  // namespace detail

/// Native desk-scale compilation over the gate alphabet. Exhaustive and
/// branch-and-bound enumerate depths 0..max_depth (the empty program is a
/// candidate); beam search keeps beam_width states per depth. Results are
/// deterministic; ties resolve to the shortest, then lexicographically
/// smallest program.
inline SearchResult search(const GateAlphabet& alphabet, const SearchConfig& cfg) {
  if (cfg.max_depth < 1) throw std::invalid_argument("search: max_depth must be >= 1");
  if (cfg.beam_width < 1) throw std::invalid_argument("search: beam_width must be >= 1");
  if (cfg.objective == ModelObjective::frobenius &&
      (cfg.target.rows() != alphabet.n_C || cfg.target.cols() != alphabet.n_C))
    throw std::invalid_argument("search: target dimension mismatch");
  if (cfg.objective != ModelObjective::frobenius && alphabet.n_C != 4)
    throw std::invalid_argument("search: invariant objectives need a 4-dim computational block");

  SearchResult result;
  switch (cfg.mode) {
    case SearchMode::exhaustive: {
      detail::DfsContext ctx{alphabet, cfg, {}, {}, 0.0, false,
                             std::numeric_limits<double>::infinity()};
      detail::dfs(ctx, ComplexMatrix::identity(alphabet.n), cfg.max_depth);
      result = std::move(ctx.result);
      result.proven_optimal = result.found;
      break;
    }
    case SearchMode::branch_and_bound: {
      if (cfg.objective != ModelObjective::frobenius)
        throw std::invalid_argument(
            "search: no admissible bound exists for invariant objectives; use exhaustive or beam");
      result = branch_bound_frobenius(alphabet, cfg.target, cfg.max_depth, cfg.prune_bound,
                                      cfg.prefix_filter);
      return result;  // report already attached
    }
    case SearchMode::beam:
      result = detail::beam_search(alphabet, cfg);
      result.proven_optimal = false;
      break;
  }
  if (result.found) {
    ComplexMatrix report_target;
    if (cfg.target.rows() == alphabet.n_C && cfg.target.cols() == alphabet.n_C)
      report_target = cfg.target;
    else if (alphabet.n_C == 4)
      report_target = cnot_gate();
    else
      report_target = ComplexMatrix::identity(alphabet.n_C);
    result.report = evaluate_report(result.best_program, alphabet, report_target,
                                    ApplicationOrder::first_digit_first, cfg.leakage_tolerance);
  }
  return result;
}

}  // namespace braidc
