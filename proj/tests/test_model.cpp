#include "doctest.h"

#include <random>

#include "braidc/model.hpp"
#include "braidc/model_builder.hpp"
#include "braidc/program.hpp"
#include "braidc/targets.hpp"
#include "testutil.hpp"

using namespace braidc;

namespace {

Program random_program(int depth, int alphabet_size, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> gate(0, alphabet_size - 1);
  Program p;
  for (int i = 0; i < depth; ++i) p.indices.push_back(gate(rng));
  return p;
}

}  // namespace

TEST_CASE("build_frobenius_model: variable counts") {
  const GateAlphabet a = testutil::nonsemi_alphabet();
  const int depth = 3;
  const MiqcqpModel model = build_frobenius_model(a, cnot_gate(), depth, /*linearize=*/true);
  const ModelCounts counts = audit_counts(model);
  CHECK(counts.binaries == 5 * depth);
  CHECK(counts.y_components == 2 * 36 * (depth + 1));
  // 2 components x (nonzero gate entries summed over i,k,p) x n columns x depth;
  // the NON-SEMI gates have 38 nonzero entries in total
  int nonzero = 0;
  for (const ComplexMatrix& g : a.gates)
    for (int k = 0; k < 6; ++k)
      for (int p = 0; p < 6; ++p)
        if (g(k, p) != Complex{}) ++nonzero;
  CHECK(counts.z_components == 2 * nonzero * 6 * depth);
  CHECK(counts.onehot_constraints == depth);

  const MiqcqpModel bilinear = build_frobenius_model(a, cnot_gate(), depth, /*linearize=*/false);
  const ModelCounts bc = audit_counts(bilinear);
  CHECK(bc.z_components == 0);
  CHECK(bc.binaries == 5 * depth);
  CHECK(bc.quadratic_constraints == 2 * 36 * depth);

  CHECK_THROWS_AS(build_frobenius_model(a, cnot_gate(), 0, false), std::invalid_argument);
  CHECK_THROWS_AS(build_frobenius_model(a, ComplexMatrix::identity(3), 1, false),
                  std::invalid_argument);
}

TEST_CASE("build_frobenius_model: depth-1 exact hit on a toy alphabet") {
  GateAlphabet toy;
  toy.labels = {"I", "X"};
  toy.gates = {ComplexMatrix::identity(2), ComplexMatrix(2, 2, {0, 1, 1, 0})};
  toy.n = 2;
  toy.n_C = 2;
  toy.n_NC = 0;
  const MiqcqpModel model = build_frobenius_model(toy, toy.gates[1], 1, /*linearize=*/true);
  Program p;
  p.indices = {1};
  const auto witness = witness_assignment(model, p, toy);
  const AssignmentCheck check = evaluate_assignment(model, witness);
  CHECK(check.objective == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(check.max_violation < 1e-12);
}

TEST_CASE("witness embedding: bilinear and linearized models agree with the evaluator") {
  const GateAlphabet a = testutil::nonsemi_alphabet();
  const ComplexMatrix cnot = cnot_gate();
  std::mt19937_64 rng(97);
  std::uniform_int_distribution<int> depth_dist(1, 6);
  for (int trial = 0; trial < 10; ++trial) {
    const int depth = depth_dist(rng);
    const Program p = random_program(depth, a.size(), rng);
    const double expected_j = evaluate_report(p, a, cnot).j_frobenius;
    for (const bool linearize : {false, true}) {
      const MiqcqpModel model = build_frobenius_model(a, cnot, depth, linearize);
      const AssignmentCheck check = evaluate_assignment(model, witness_assignment(model, p, a));
      CHECK(check.max_violation < 1e-9);
      CHECK(check.objective == doctest::Approx(expected_j).epsilon(1e-9));
    }
  }
}

TEST_CASE("witness embedding: identity-padded models") {
  const GateAlphabet a = testutil::nonsemi_alphabet();
  const MiqcqpModel model =
      build_frobenius_model(a, cnot_gate(), 4, /*linearize=*/true, /*include_identity_gate=*/true);
  CHECK(audit_counts(model).binaries == 6 * 4);
  Program p;
  p.indices = {4, 5, 4, 5};  // gate 5 is the padded identity
  const AssignmentCheck check = evaluate_assignment(model, witness_assignment(model, p, a));
  CHECK(check.max_violation < 1e-9);
  const Program p2 = parse_program("44", a.size());
  CHECK(check.objective ==
        doctest::Approx(evaluate_report(p2, a, cnot_gate()).j_frobenius).epsilon(1e-9));
}

TEST_CASE("evaluate_assignment: one-hot violation and missing variables") {
  const GateAlphabet a = testutil::nonsemi_alphabet();
  const MiqcqpModel model = build_frobenius_model(a, cnot_gate(), 1, false);
  Program p;
  p.indices = {4};
  auto witness = witness_assignment(model, p, a);
  // select a second gate in step 1: constraint (ii) breaks by exactly one
  witness[static_cast<size_t>(model.var_id(x_name(1, 0)))] = 1.0;
  const AssignmentCheck check = evaluate_assignment(model, witness);
  CHECK(check.max_violation >= 1.0);

  std::unordered_map<std::string, double> partial{{"g_nope", 1.0}};
  CHECK_THROWS_AS(evaluate_assignment(model, partial), std::invalid_argument);

  std::vector<double> short_vec(3, 0.0);
  CHECK_THROWS_AS(evaluate_assignment(model, short_vec), std::invalid_argument);
}

TEST_CASE("linearize_bilinear: zero coefficient pins z") {
  MiqcqpModel model;
  const int x = model.add_binary("x");
  const int y_re = model.add_continuous("y_re", -1.0, 1.0);
  const int y_im = model.add_continuous("y_im", -1.0, 1.0);
  const int z_re = model.add_continuous("z_re", -1.0, 1.0);
  const int z_im = model.add_continuous("z_im", -1.0, 1.0);
  const auto constraints = linearize_bilinear(model, z_re, z_im, x, Complex{}, y_re, y_im, "mc");
  CHECK(constraints.empty());
  CHECK(model.vars()[static_cast<size_t>(z_re)].lower == 0.0);
  CHECK(model.vars()[static_cast<size_t>(z_re)].upper == 0.0);
}

TEST_CASE("linearize_bilinear: envelope collapses to the exact product at binary points") {
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    MiqcqpModel model;
    const int x = model.add_binary("x");
    const int y_re = model.add_continuous("y_re", -1.0, 1.0);
    const int y_im = model.add_continuous("y_im", -1.0, 1.0);
    const Complex c{coef(rng), coef(rng)};
    const double big_m = std::abs(c.real()) + std::abs(c.imag());
    const int z_re = model.add_continuous("z_re", -big_m, big_m);
    const int z_im = model.add_continuous("z_im", -big_m, big_m);
    const auto constraints = linearize_bilinear(model, z_re, z_im, x, c, y_re, y_im, "mc");
    REQUIRE(constraints.size() == 8);

    for (int xv = 0; xv <= 1; ++xv)
      for (double yr = -1.0; yr <= 1.0001; yr += 0.25)
        for (double yi = -1.0; yi <= 1.0001; yi += 0.25) {
          // feasible z interval from the four inequalities of each component
          const Complex product = static_cast<double>(xv) * (c * Complex{yr, yi});
          for (const bool re_part : {true, false}) {
            double lo = -1e30, hi = 1e30;
            const int z_var = re_part ? z_re : z_im;
            for (const LinearConstraint& lc : constraints) {
              double z_coef = 0.0, rest = 0.0;
              for (const LinTerm& t : lc.terms) {
                double value = 0.0;
                if (t.var == x) value = xv;
                else if (t.var == y_re) value = yr;
                else if (t.var == y_im) value = yi;
                if (t.var == z_var)
                  z_coef += t.coef;
                else
                  rest += t.coef * value;
              }
              if (z_coef == 0.0) continue;
              // z_coef is always +1 in the emitted envelopes
              if (lc.sense == Sense::ge)
                lo = std::max(lo, lc.rhs - rest);
              else
                hi = std::min(hi, lc.rhs - rest);
            }
            const double expected = re_part ? product.real() : product.imag();
            CHECK(lo == doctest::Approx(expected).epsilon(1e-12));
            CHECK(hi == doctest::Approx(expected).epsilon(1e-12));
          }
        }
  }
}

TEST_CASE("build_invariant_model: depth-0 degenerate objectives") {
  const GateAlphabet a = testutil::nonsemi_alphabet();
  {
    const MiqcqpModel model = build_invariant_model(a, 0, ModelObjective::cnot_class);
    const AssignmentCheck check =
        evaluate_assignment(model, witness_assignment(model, Program{}, a));
    CHECK(check.objective == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(check.max_violation < 1e-12);
  }
  {
    const MiqcqpModel model = build_invariant_model(a, 0, ModelObjective::perfect_entangler);
    const AssignmentCheck check =
        evaluate_assignment(model, witness_assignment(model, Program{}, a));
    CHECK(check.objective == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(check.max_violation < 1e-12);
  }
  CHECK_THROWS_AS(build_invariant_model(a, 1, ModelObjective::frobenius), std::invalid_argument);
}

TEST_CASE("build_invariant_model: depth-35 all-CPHASE witness hits the reference objective") {
  const GateAlphabet a = testutil::nonsemi_alphabet();
  const MiqcqpModel model = build_invariant_model(a, 35, ModelObjective::cnot_class);
  Program p;
  p.indices.assign(35, 4);
  const AssignmentCheck check = evaluate_assignment(model, witness_assignment(model, p, a));
  CHECK(check.max_violation < 1e-9);
  CHECK(std::abs(check.objective - 1.5617e-09) <= 5e-4 * 1.5617e-09);
}

TEST_CASE("build_invariant_model: witness feasibility for both objectives") {
  const GateAlphabet a = testutil::nonsemi_alphabet();
  std::mt19937_64 rng(139);
  for (const auto objective : {ModelObjective::cnot_class, ModelObjective::perfect_entangler}) {
    for (int trial = 0; trial < 3; ++trial) {
      const int depth = 1 + trial;
      const Program p = random_program(depth, a.size(), rng);
      const MiqcqpModel model = build_invariant_model(a, depth, objective);
      const AssignmentCheck check = evaluate_assignment(model, witness_assignment(model, p, a));
      CHECK(check.max_violation < 1e-9);
      const EvaluationReport rep = evaluate_report(p, a, cnot_gate());
      const double expected =
          objective == ModelObjective::cnot_class ? rep.d_cnot : rep.d_pe;
      CHECK(check.objective == doctest::Approx(expected).epsilon(1e-6));
    }
  }
}

TEST_CASE("determinant encoding: constraint recursion reproduces the Laplace value") {
  const GateAlphabet a = testutil::nonsemi_alphabet();
  const MiqcqpModel model = build_invariant_model(a, 0, ModelObjective::cnot_class);
  std::mt19937_64 rng(149);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix u = testutil::random_unitary(4, rng);
    std::vector<double> values(model.vars().size(), 0.0);
    for (int k = 1; k <= 4; ++k)
      for (int l = 1; l <= 4; ++l) {
        values[static_cast<size_t>(model.var_id(y_name(true, 0, k, l)))] = u(k - 1, l - 1).real();
        values[static_cast<size_t>(model.var_id(y_name(false, 0, k, l)))] = u(k - 1, l - 1).imag();
      }
    // Solve each det-definition constraint for its defined variable, in
    // subset-size order; the constraints are linear in the defined var.
    for (int size = 2; size <= 4; ++size)
      for (const QuadraticConstraint& c : model.quadratic()) {
        if (c.name.rfind("det_def_", 0) != 0) continue;
        const std::string suffix = c.name.substr(c.name.find_last_of('_') + 1);
        if (static_cast<int>(suffix.size()) != size) continue;
        double sum = 0.0;
        for (const QuadTerm& t : c.bilinear)
          sum += t.coef * values[static_cast<size_t>(t.var_a)] * values[static_cast<size_t>(t.var_b)];
        // constraint: det_var + sum = 0
        values[static_cast<size_t>(c.linear[0].var)] = -sum;
      }
    const Complex expected = determinant(u);
    CHECK(values[static_cast<size_t>(model.var_id("det_re_1234"))] ==
          doctest::Approx(expected.real()).epsilon(1e-9));
    CHECK(values[static_cast<size_t>(model.var_id("det_im_1234"))] ==
          doctest::Approx(expected.imag()).epsilon(1e-9));
  }
}

TEST_CASE("build_invariant_model: linearized step constraints stay exact") {
  const GateAlphabet a = testutil::nonsemi_alphabet();
  std::mt19937_64 rng(157);
  const Program p = random_program(3, a.size(), rng);
  const MiqcqpModel model =
      build_invariant_model(a, 3, ModelObjective::perfect_entangler, /*linearize=*/true);
  CHECK(audit_counts(model).z_components > 0);
  const AssignmentCheck check = evaluate_assignment(model, witness_assignment(model, p, a));
  CHECK(check.max_violation < 1e-9);
  CHECK(check.objective ==
        doctest::Approx(evaluate_report(p, a, cnot_gate()).d_pe).epsilon(1e-6));
}

TEST_CASE("evaluate_assignment: name-keyed maps match id-indexed vectors") {
  const GateAlphabet a = testutil::nonsemi_alphabet();
  const MiqcqpModel model = build_frobenius_model(a, cnot_gate(), 2, true);
  Program p;
  p.indices = {4, 1};
  const std::vector<double> witness = witness_assignment(model, p, a);
  std::unordered_map<std::string, double> by_name;
  for (const VarRef& v : model.vars()) by_name[v.name] = witness[static_cast<size_t>(v.id)];
  const AssignmentCheck from_vec = evaluate_assignment(model, witness);
  const AssignmentCheck from_map = evaluate_assignment(model, by_name);
  CHECK(from_map.objective == from_vec.objective);
  CHECK(from_map.max_violation == from_vec.max_violation);
}

TEST_CASE("witness_assignment: rejects mismatched depth") {
  const GateAlphabet a = testutil::nonsemi_alphabet();
  const MiqcqpModel model = build_frobenius_model(a, cnot_gate(), 2, false);
  Program p;
  p.indices = {4};
  CHECK_THROWS_AS(witness_assignment(model, p, a), std::invalid_argument);
}
