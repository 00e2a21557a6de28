// braidc: compile, evaluate and verify braid-gate sequences for the
// non-semisimple Ising anyon gate set.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "braidc/alphabet.hpp"
#include "braidc/invariants.hpp"
#include "braidc/json_io.hpp"
#include "braidc/lp_format.hpp"
#include "braidc/model.hpp"
#include "braidc/model_builder.hpp"
#include "braidc/program.hpp"
#include "braidc/search.hpp"
#include "braidc/table_verify.hpp"
#include "braidc/targets.hpp"

namespace {

using namespace braidc;

std::string num(double v) { return format_number(v); }

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open output file " + out_path);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

AlphabetParams params_from_flags(const std::string& config_path, std::optional<double> alpha,
                                 std::optional<int> k) {
  AlphabetParams params;
  if (!config_path.empty()) params = load_alphabet_config(config_path);
  if (alpha) params.alpha = *alpha;
  if (k) params.q_exponent_k = *k;
  return params;
}

ComplexMatrix target_from_flag(const std::string& spec) {
  if (spec == "cnot") return cnot_gate();
  return load_matrix_file(spec);
}

std::string report_json(const EvaluationReport& rep, const std::string& program_digits,
                        const std::string& order) {
  std::string out = "{\n";
  out += "  \"program\": \"" + program_digits + "\",\n";
  out += "  \"depth\": " + std::to_string(program_digits.size()) + ",\n";
  out += "  \"order\": \"" + order + "\",\n";
  out += "  \"leakage\": " + num(rep.leakage) + ",\n";
  out += std::string("  \"leaky\": ") + (rep.leaky ? "true" : "false") + ",\n";
  out += "  \"j_frobenius\": " + num(rep.j_frobenius) + ",\n";
  out += "  \"d2\": " + num(rep.d2_hilbert_schmidt) + ",\n";
  if (rep.has_invariants) {
    out += "  \"g1\": " + num(rep.invariants.g1) + ",\n";
    out += "  \"g2\": " + num(rep.invariants.g2) + ",\n";
    out += "  \"g3\": " + num(rep.invariants.g3) + ",\n";
    out += "  \"d_cnot\": " + num(rep.d_cnot) + ",\n";
    out += "  \"d_pe\": " + num(rep.d_pe) + ",\n";
  }
  out += "  \"computational_block\": " + matrix_to_json_text(rep.computational_block, "  ") + "\n";
  out += "}";
  return out;
}

std::string read_program_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream f(arg.substr(1));
    if (!f) throw std::runtime_error("cannot open program file " + arg.substr(1));
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
  }
  return arg;
}

int run_alphabet(const std::string& config, std::optional<double> alpha, std::optional<int> k,
                 bool dump, const std::string& out_path) {
  const AlphabetParams params = params_from_flags(config, alpha, k);
  const GateAlphabet alphabet = build_alphabet(params);
  const ValidationReport validation = validate_alphabet(alphabet);
  std::string out = "{\n";
  out += "  \"alpha\": " + num(params.alpha) + ",\n";
  out += "  \"q_exponent_k\": " + std::to_string(params.q_exponent_k) + ",\n";
  out += "  \"n\": " + std::to_string(alphabet.n) + ",\n";
  out += "  \"n_C\": " + std::to_string(alphabet.n_C) + ",\n";
  out += "  \"n_NC\": " + std::to_string(alphabet.n_NC) + ",\n";
  out += "  \"labels\": [";
  for (size_t i = 0; i < alphabet.labels.size(); ++i)
    out += (i ? ", " : "") + ("\"" + alphabet.labels[i] + "\"");
  out += "],\n";
  if (dump) {
    out += "  \"gates\": [\n";
    for (size_t i = 0; i < alphabet.gates.size(); ++i) {
      out += "    " + matrix_to_json_text(alphabet.gates[i], "    ");
      out += i + 1 < alphabet.gates.size() ? ",\n" : "\n";
    }
    out += "  ],\n";
  }
  out += "  \"unitarity_residuals\": [";
  for (size_t i = 0; i < validation.gates.size(); ++i)
    out += (i ? ", " : "") + num(validation.gates[i].unitarity_residual);
  out += "],\n  \"cphase_off_block_residual\": " + num(validation.cphase_off_block_residual) +
         "\n}";
  write_output(out, out_path);
  return 0;
}

int run_eval(const std::string& program_arg, const std::string& target_spec,
             const std::string& config, std::optional<double> alpha, std::optional<int> k,
             const std::string& order, const std::string& out_path) {
  const GateAlphabet alphabet = build_alphabet(params_from_flags(config, alpha, k));
  const Program program = parse_program(read_program_arg(program_arg), alphabet.size());
  const ComplexMatrix target = target_from_flag(target_spec);
  const ApplicationOrder app_order = order == "reversed" ? ApplicationOrder::first_digit_last
                                                         : ApplicationOrder::first_digit_first;
  const EvaluationReport rep = evaluate_report(program, alphabet, target, app_order);
  write_output(report_json(rep, program.digits(), order), out_path);
  return 0;
}

int run_invariants(const std::string& matrix_path, const std::string& out_path) {
  const ComplexMatrix u = load_matrix_file(matrix_path);
  const LocalInvariants g = local_invariants(u);
  std::string out = "{\n";
  out += "  \"g1\": " + num(g.g1) + ",\n";
  out += "  \"g2\": " + num(g.g2) + ",\n";
  out += "  \"g3\": " + num(g.g3) + ",\n";
  out += "  \"d_cnot\": " + num(d_cnot(g)) + ",\n";
  out += "  \"d_pe\": " + num(d_pe(g)) + "\n}";
  write_output(out, out_path);
  return 0;
}

int run_sweep(int gate, int lmax, const std::string& csv_path, const std::string& config,
              std::optional<double> alpha, std::optional<int> k) {
  const GateAlphabet alphabet = build_alphabet(params_from_flags(config, alpha, k));
  const auto points = power_sweep(gate, alphabet, lmax);
  std::string out = "L,d_pe,d_cnot,g1,g2,g3\n";
  for (const SweepPoint& p : points)
    out += std::to_string(p.power) + "," + num(p.d_pe) + "," + num(p.d_cnot) + "," + num(p.g1) +
           "," + num(p.g2) + "," + num(p.g3) + "\n";
  write_output(out, csv_path);
  return 0;
}

ModelObjective objective_from_flag(const std::string& s) {
  if (s == "frobenius") return ModelObjective::frobenius;
  if (s == "cnot-class") return ModelObjective::cnot_class;
  return ModelObjective::perfect_entangler;
}

int run_compile(const std::string& objective, const std::string& target_spec, int max_depth,
                const std::string& mode, int beam_width, const std::string& config,
                std::optional<double> alpha, std::optional<int> k, const std::string& out_path) {
  const GateAlphabet alphabet = build_alphabet(params_from_flags(config, alpha, k));
  SearchConfig cfg;
  cfg.objective = objective_from_flag(objective);
  cfg.target = target_from_flag(target_spec);
  cfg.max_depth = max_depth;
  cfg.beam_width = beam_width;
  cfg.mode = mode == "exhaustive"  ? SearchMode::exhaustive
             : mode == "beam"      ? SearchMode::beam
                                   : SearchMode::branch_and_bound;
  const SearchResult result = search(alphabet, cfg);
  std::string out = "{\n";
  out += "  \"objective\": \"" + objective + "\",\n";
  out += "  \"mode\": \"" + mode + "\",\n";
  out += "  \"max_depth\": " + std::to_string(max_depth) + ",\n";
  out += "  \"beam_width\": " + std::to_string(beam_width) + ",\n";
  out += std::string("  \"found\": ") + (result.found ? "true" : "false") + ",\n";
  out += "  \"best_value\": " + (result.found ? num(result.best_value) : std::string("null")) +
         ",\n";
  out += "  \"nodes_explored\": " + std::to_string(result.nodes_explored) + ",\n";
  out += std::string("  \"proven_optimal\": ") + (result.proven_optimal ? "true" : "false") +
         ",\n";
  out += "  \"program\": \"" + result.best_program.digits() + "\",\n";
  out += "  \"report\": " + (result.found ? report_json(result.report, result.best_program.digits(),
                                                        "forward")
                                          : std::string("null")) +
         "\n}";
  write_output(out, out_path);
  return 0;
}

int run_export_model(const std::string& objective, const std::string& target_spec, int depth,
                     bool linearize, bool pad_identity, const std::string& config,
                     std::optional<double> alpha, std::optional<int> k,
                     const std::string& out_path, const std::string& assignment_path) {
  const GateAlphabet alphabet = build_alphabet(params_from_flags(config, alpha, k));
  const ModelObjective obj = objective_from_flag(objective);
  MiqcqpModel model =
      obj == ModelObjective::frobenius
          ? build_frobenius_model(alphabet, target_from_flag(target_spec), depth, linearize,
                                  pad_identity)
          : build_invariant_model(alphabet, depth, obj, linearize, pad_identity);
  if (!assignment_path.empty()) {
    const AssignmentCheck check = evaluate_assignment(model, load_assignment(assignment_path));
    std::string out = "{\n  \"objective_value\": " + num(check.objective) +
                      ",\n  \"max_violation\": " + num(check.max_violation) + "\n}";
    write_output(out, "");
    return 0;
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << lp_string(model);
  } else {
    export_model(model, out_path);
    std::cerr << "wrote " << out_path << " (" << model.vars().size() << " vars, "
              << model.linear().size() << " linear, " << model.quadratic().size()
              << " quadratic constraints)\n";
  }
  return 0;
}

int run_verify_tables(const std::string& fixtures_path, const std::string& config,
                      std::optional<double> alpha, std::optional<int> k,
                      const std::string& out_path) {
  const GateAlphabet alphabet = build_alphabet(params_from_flags(config, alpha, k));
  const auto fixtures = load_fixtures(fixtures_path);
  const VerificationSummary summary = verify_tables(fixtures, alphabet);
  std::string out = "{\n";
  out += "  \"passed\": " + std::to_string(summary.passed) + ",\n";
  out += "  \"failed\": " + std::to_string(summary.failed) + ",\n";
  out += "  \"rows\": [\n";
  for (size_t i = 0; i < summary.rows.size(); ++i) {
    const TableRowResult& r = summary.rows[i];
    out += "    {\"table\": " + std::to_string(r.row.table) +
           ", \"depth\": " + std::to_string(r.row.depth) + ", \"metric\": \"" + r.row.metric +
           "\", \"stated\": " + num(r.row.value) +
           ", \"measured_forward\": " + num(r.measured_forward) +
           ", \"measured_reversed\": " + num(r.measured_reversed) + ", \"pass\": " +
           (r.pass ? "true" : "false") + ", \"convention\": \"" + r.convention + "\"}";
    out += i + 1 < summary.rows.size() ? ",\n" : "\n";
  }
  out += "  ]\n}";
  write_output(out, out_path);
  return 0;  // row failures are data, not command failure
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"braid-gate sequence compiler and verifier for the NON-SEMI anyon gate set"};
  app.require_subcommand(1);

  std::string config, out_path, order = "normal", target_spec = "cnot";
  std::optional<double> alpha;
  std::optional<int> k_exp;

  auto add_alphabet_flags = [&](CLI::App* cmd) {
    cmd->add_option("--alphabet,--config", config, "alphabet configuration JSON file");
    cmd->add_option("--alpha", alpha, "override the alpha parameter");
    cmd->add_option("--k", k_exp, "override the eighth-root exponent k")->check(CLI::Range(0, 7));
  };

  // alphabet
  auto* cmd_alphabet = app.add_subcommand("alphabet", "construct and dump the gate alphabet");
  bool dump = false;
  cmd_alphabet->add_flag("--dump", dump, "emit all gate matrices as JSON");
  add_alphabet_flags(cmd_alphabet);
  cmd_alphabet->add_option("--out", out_path, "output file (default stdout)");

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "evaluate a digit program against a target");
  std::string program_arg;
  cmd_eval->add_option("--program", program_arg, "digit string, or @file")->required();
  cmd_eval->add_option("--target", target_spec, "cnot or a matrix JSON file");
  cmd_eval->add_option("--order", order, "digit application order")
      ->check(CLI::IsMember({"normal", "reversed"}));
  add_alphabet_flags(cmd_eval);
  cmd_eval->add_option("--out", out_path, "output file (default stdout)");

  // invariants
  auto* cmd_inv = app.add_subcommand("invariants", "local invariants of a 4x4 unitary");
  std::string matrix_path;
  cmd_inv->add_option("--matrix", matrix_path, "matrix JSON file")->required();
  cmd_inv->add_option("--out", out_path, "output file (default stdout)");

  // compile
  auto* cmd_compile = app.add_subcommand("compile", "native search for a gate sequence");
  std::string objective = "frobenius", mode = "exhaustive";
  int max_depth = 1, beam_width = 64;
  cmd_compile->add_option("--objective", objective, "optimization objective")
      ->check(CLI::IsMember({"frobenius", "cnot-class", "pe"}));
  cmd_compile->add_option("--target", target_spec, "cnot or a matrix JSON file");
  cmd_compile->add_option("--max-depth", max_depth, "maximum circuit depth")->required();
  cmd_compile->add_option("--mode", mode, "search strategy")
      ->check(CLI::IsMember({"exhaustive", "branch-and-bound", "bb", "beam"}));
  cmd_compile->add_option("--beam-width", beam_width, "beam width (beam mode)");
  add_alphabet_flags(cmd_compile);
  cmd_compile->add_option("--out", out_path, "result JSON file (default stdout)");

  // export-model
  auto* cmd_export = app.add_subcommand("export-model", "emit the MIQCQP as LP-format text");
  int depth = 1;
  bool linearize = false, pad_identity = false;
  std::string assignment_path;
  cmd_export->add_option("--objective", objective, "model objective")
      ->check(CLI::IsMember({"frobenius", "cnot-class", "pe"}));
  cmd_export->add_option("--target", target_spec, "cnot or a matrix JSON file");
  cmd_export->add_option("--depth", depth, "circuit depth")->required();
  cmd_export->add_flag("--linearize", linearize, "McCormick-linearize the step constraints");
  cmd_export->add_flag("--pad-identity", pad_identity,
                       "append the identity gate so depths <= depth are searchable");
  cmd_export->add_option("--check-assignment", assignment_path,
                         "evaluate a {name: value} JSON assignment instead of exporting");
  add_alphabet_flags(cmd_export);
  cmd_export->add_option("--out", out_path, "LP output file (default stdout)");

  // sweep
  auto* cmd_sweep = app.add_subcommand("sweep", "metrics of successive powers of one gate");
  int gate = 4, lmax = 50;
  std::string csv_path = "-";
  cmd_sweep->add_option("--gate", gate, "alphabet gate index");
  cmd_sweep->add_option("--lmax", lmax, "largest power")->required();
  cmd_sweep->add_option("--csv", csv_path, "CSV output file, - for stdout");
  add_alphabet_flags(cmd_sweep);

  // verify-tables
  auto* cmd_verify = app.add_subcommand("verify-tables", "re-evaluate reference table fixtures");
  std::string fixtures_path;
  cmd_verify->add_option("--fixtures", fixtures_path, "fixtures JSON file")->required();
  add_alphabet_flags(cmd_verify);
  cmd_verify->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(cmd_alphabet))
      return run_alphabet(config, alpha, k_exp, dump, out_path);
    if (app.got_subcommand(cmd_eval))
      return run_eval(program_arg, target_spec, config, alpha, k_exp, order, out_path);
    if (app.got_subcommand(cmd_inv)) return run_invariants(matrix_path, out_path);
    if (app.got_subcommand(cmd_compile))
      return run_compile(objective, target_spec, max_depth, mode, beam_width, config, alpha,
                         k_exp, out_path);
    if (app.got_subcommand(cmd_export))
      return run_export_model(objective, target_spec, depth, linearize, pad_identity, config,
                              alpha, k_exp, out_path, assignment_path);
    if (app.got_subcommand(cmd_sweep))
      return run_sweep(gate, lmax, csv_path, config, alpha, k_exp);
    if (app.got_subcommand(cmd_verify))
      return run_verify_tables(fixtures_path, config, alpha, k_exp, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
