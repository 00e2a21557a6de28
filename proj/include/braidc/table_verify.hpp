#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "braidc/json_io.hpp"
#include "braidc/program.hpp"
#include "braidc/targets.hpp"

namespace braidc {

/// Agreement to four significant figures: within half a unit in the
/// fourth significant digit, expressed relatively. Stated zeros are
/// compared at an absolute 1e-12 instead.
inline bool matches_4_sig_figs(double measured, double stated) {
  if (stated == 0.0) return std::abs(measured) < 1e-12;
  return std::abs(measured - stated) <= 5e-4 * std::abs(stated);
}

struct TableRowResult {
  TableFixtureRow row;
  double measured_forward = 0.0;   // first printed digit applied first
  double measured_reversed = 0.0;  // first printed digit applied last
  bool pass = false;
  std::string convention;  // "either", "forward", "reversed", "none"
};

struct VerificationSummary {
  std::vector<TableRowResult> rows;
  int passed = 0;
  int failed = 0;
};

namespace detail {

inline double row_metric(const TableFixtureRow& row, const EvaluationReport& rep) {
  if (row.metric == "J") return rep.j_frobenius;
  if (row.metric == "d2") return rep.d2_hilbert_schmidt;
  if (row.metric == "D_CNOT") return rep.d_cnot;
  if (row.metric == "D_PE") return rep.d_pe;
  throw std::invalid_argument("verify_tables: unknown metric '" + row.metric + "'");
}

}  // namespace detail

/// Re-evaluates every fixture row under both application-order conventions
/// and compares the stated metric at four significant figures. Failures
/// are data, not errors: the summary carries both measured values.
inline VerificationSummary verify_tables(const std::vector<TableFixtureRow>& fixtures,
                                         const GateAlphabet& alphabet) {
  VerificationSummary summary;
  const ComplexMatrix target = cnot_gate();
  for (const TableFixtureRow& fixture : fixtures) {
    TableRowResult result;
    result.row = fixture;
    const Program program = parse_program(fixture.program, alphabet.size());
    const EvaluationReport forward =
        evaluate_report(program, alphabet, target, ApplicationOrder::first_digit_first);
    const EvaluationReport reversed =
        evaluate_report(program, alphabet, target, ApplicationOrder::first_digit_last);
    result.measured_forward = detail::row_metric(fixture, forward);
    result.measured_reversed = detail::row_metric(fixture, reversed);
    const bool ok_f = matches_4_sig_figs(result.measured_forward, fixture.value);
    const bool ok_r = matches_4_sig_figs(result.measured_reversed, fixture.value);
    result.pass = ok_f || ok_r;
    result.convention = ok_f && ok_r ? "either" : ok_f ? "forward" : ok_r ? "reversed" : "none";
    if (result.pass)
      ++summary.passed;
    else
      ++summary.failed;
    summary.rows.push_back(std::move(result));
  }
  return summary;
}

}  // namespace braidc
