#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#include "braidc/json_io.hpp"
#include "braidc/lp_format.hpp"
#include "braidc/model_builder.hpp"
#include "braidc/targets.hpp"
#include "testutil.hpp"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(BRAIDC_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buffer{};
  CliResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t got;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.output.append(buffer.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("cli eval: smoke test with invariants") {
  const CliResult r = run_cli("eval --program 4444 --target cnot");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j.contains("d_cnot"));
  CHECK(j.at("depth") == 4);
  CHECK(j.at("leakage") == 0.0);
}

TEST_CASE("cli eval: order flag and program files") {
  const std::string path = temp_file("braidc_prog.txt");
  std::ofstream(path) << "44 44\n4";
  const CliResult r = run_cli("eval --program @" + path + " --order reversed");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j.at("depth") == 5);
  CHECK(j.at("order") == "reversed");
  std::remove(path.c_str());
}

TEST_CASE("cli sweep: CSV endpoint values") {
  const CliResult r = run_cli("sweep --gate 4 --lmax 35 --csv -");
  CHECK(r.exit_code == 0);
  std::istringstream in(r.output);
  std::string line;
  std::getline(in, line);
  CHECK(line == "L,d_pe,d_cnot,g1,g2,g3");
  int rows = 0;
  std::string last;
  while (std::getline(in, line))
    if (!line.empty()) {
      last = line;
      ++rows;
    }
  CHECK(rows == 35);
  // last row: L = 35, d_pe below machine noise
  std::istringstream ls(last);
  std::string field;
  std::getline(ls, field, ',');
  CHECK(field == "35");
  std::getline(ls, field, ',');
  CHECK(std::stod(field) < 1e-15);
}

TEST_CASE("cli alphabet: dump is valid JSON with five unitary gates") {
  const CliResult r = run_cli("alphabet --dump");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j.at("gates").size() == 5);
  CHECK(j.at("n_C") == 4);
  const braidc::ComplexMatrix cp = braidc::matrix_from_json(j.at("gates")[4]);
  CHECK(braidc::unitarity_residual(cp) < 1e-10);
  for (double res : j.at("unitarity_residuals")) CHECK(res < 1e-10);
}

TEST_CASE("cli invariants: reads the matrix file format") {
  const std::string path = temp_file("braidc_cnot.json");
  {
    // CNOT by hand in the [re, im] pair format
    std::ofstream f(path);
    f << "[[[1,0],[0,0],[0,0],[0,0]],"
         "[[0,0],[1,0],[0,0],[0,0]],"
         "[[0,0],[0,0],[0,0],[1,0]],"
         "[[0,0],[0,0],[1,0],[0,0]]]";
  }
  const CliResult r = run_cli("invariants --matrix " + path);
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(std::abs(j.at("g1").get<double>()) < 1e-12);
  CHECK(std::abs(j.at("g3").get<double>() - 1.0) < 1e-12);
  CHECK(j.at("d_pe").get<double>() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("cli compile: exhaustive search result JSON") {
  const CliResult r = run_cli("compile --objective cnot-class --max-depth 2 --mode exhaustive");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j.at("found") == true);
  CHECK(j.at("proven_optimal") == true);
  CHECK(j.at("best_value").get<double>() >= 0.0);
  CHECK(j.at("report").contains("d_cnot"));
}

TEST_CASE("cli export-model: LP file round-trips") {
  const std::string path = temp_file("braidc_model.lp");
  const CliResult r = run_cli(
      "export-model --objective frobenius --target cnot --depth 2 --linearize --out " + path);
  CHECK(r.exit_code == 0);
  const braidc::MiqcqpModel model = braidc::parse_model(path);
  CHECK(model.meta().depth == 2);
  CHECK(model.meta().linearized);
  CHECK(model.vars().size() > 100);
  std::remove(path.c_str());
}

TEST_CASE("cli export-model: certifies an assignment file") {
  // witness for a depth-2 model, serialized as a {name: value} JSON file,
  // handed back through the CLI certification path
  const braidc::GateAlphabet a = testutil::nonsemi_alphabet();
  const braidc::MiqcqpModel model =
      braidc::build_frobenius_model(a, braidc::cnot_gate(), 2, /*linearize=*/false);
  braidc::Program p;
  p.indices = {4, 4};
  const std::vector<double> witness = braidc::witness_assignment(model, p, a);
  const std::string path = temp_file("braidc_assignment.json");
  {
    std::ofstream f(path);
    f << "{";
    bool first = true;
    for (const braidc::VarRef& v : model.vars()) {
      f << (first ? "" : ",") << "\"" << v.name
        << "\": " << braidc::format_number(witness[static_cast<size_t>(v.id)]);
      first = false;
    }
    f << "}";
  }
  const CliResult r = run_cli(
      "export-model --objective frobenius --target cnot --depth 2 --check-assignment " + path);
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j.at("max_violation").get<double>() < 1e-9);
  const double expected =
      braidc::evaluate_report(p, a, braidc::cnot_gate()).j_frobenius;
  CHECK(std::abs(j.at("objective_value").get<double>() - expected) < 1e-9);
  std::remove(path.c_str());
}

TEST_CASE("cli verify-tables: summary with per-row data") {
  const CliResult r =
      run_cli("verify-tables --fixtures " + testutil::data_path("tables.json"));
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j.at("rows").size() == 80);
  CHECK(j.at("passed").get<int>() > 30);
  CHECK(j.at("failed").get<int>() > 0);  // solver-noise rows; see test_tables
}

TEST_CASE("cli: alphabet config file feeds every subcommand") {
  const std::string path = temp_file("braidc_cfg.json");
  std::ofstream(path) << R"({"alpha": 2.4, "q_exponent_k": 1,
    "cphase_theta1": -1.772, "cphase_theta2": -1.682,
    "v_block": [[[0,0],[1,0]],[[1,0],[0,0]]]})";
  const CliResult dump = run_cli("alphabet --dump --config " + path);
  CHECK(dump.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(dump.output);
  const braidc::ComplexMatrix cp = braidc::matrix_from_json(j.at("gates")[4]);
  CHECK(cp(4, 5) == braidc::Complex{1.0, 0.0});  // custom V block in place

  // the V block never touches computational-block metrics
  const CliResult eval = run_cli("eval --program 4444 --alphabet " + path);
  CHECK(eval.exit_code == 0);
  const CliResult base = run_cli("eval --program 4444");
  CHECK(nlohmann::json::parse(eval.output).at("d_cnot") ==
        nlohmann::json::parse(base.output).at("d_cnot"));
  std::remove(path.c_str());
}

TEST_CASE("cli exit codes: usage and domain errors") {
  CHECK(run_cli("no-such-subcommand").exit_code == 2);
  CHECK(run_cli("eval").exit_code == 2);                       // missing required flag
  CHECK(run_cli("eval --program 4 --bogus-flag 1").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("eval --program 9").exit_code == 1);           // digit out of range
  CHECK(run_cli("invariants --matrix /no/such/file.json").exit_code == 1);
  CHECK(run_cli("compile --objective pe --max-depth 2 --mode bb").exit_code == 1);
  CHECK(run_cli("alphabet --alpha 0.5 --dump").exit_code == 1);  // non-unitary window
}
