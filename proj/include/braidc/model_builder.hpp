#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "braidc/alphabet.hpp"
#include "braidc/complex_matrix.hpp"
#include "braidc/invariants.hpp"
#include "braidc/model.hpp"
#include "braidc/program.hpp"

namespace braidc {

enum class ModelObjective { frobenius, cnot_class, perfect_entangler };

inline const char* objective_name(ModelObjective o) {
  switch (o) {
    case ModelObjective::frobenius: return "frobenius";
    case ModelObjective::cnot_class: return "cnot-class";
    case ModelObjective::perfect_entangler: return "pe";
  }
  return "?";
}

// Deterministic variable naming. Steps t run 1..d (0 for the initial
// product), matrix indices k,l,p are 1-based, gate indices i are the
// program digits (0-based).
inline std::string x_name(int t, int i) {
  return "x_" + std::to_string(t) + "_" + std::to_string(i);
}
inline std::string y_name(bool re, int t, int k, int l) {
  return std::string(re ? "Yre_" : "Yim_") + std::to_string(t) + "_" + std::to_string(k) + "_" +
         std::to_string(l);
}
inline std::string z_name(bool re, int t, int k, int l, int p, int i) {
  return std::string(re ? "z_re_" : "z_im_") + std::to_string(t) + "_" + std::to_string(k) + "_" +
         std::to_string(l) + "_" + std::to_string(p) + "_" + std::to_string(i);
}

/// Four envelope inequalities making z equal x * (coef_a a + coef_b b) at
/// binary x, where |coef_a| + |coef_b| <= big_m bounds the linear part on
/// the unit box. Exact at x in {0,1}: x=0 pins z to 0, x=1 pins z to the
/// linear part.
inline std::vector<LinearConstraint> mccormick_envelope(int z, int x, double coef_a, int a,
                                                        double coef_b, int b, double big_m,
                                                        const std::string& prefix) {
  std::vector<LinearConstraint> out;
  out.reserve(4);
  auto p_terms = [&](double z_sign, double x_coef) {
    std::vector<LinTerm> terms;
    terms.push_back({1.0, z});
    if (z_sign != 0.0) {
      if (coef_a != 0.0) terms.push_back({z_sign * coef_a, a});
      if (coef_b != 0.0) terms.push_back({z_sign * coef_b, b});
    }
    if (x_coef != 0.0) terms.push_back({x_coef, x});
    return terms;
  };
  // z >= -M x
  out.push_back({p_terms(0.0, big_m), Sense::ge, 0.0, prefix + "_lo0"});
  // z >= p + M x - M
  out.push_back({p_terms(-1.0, -big_m), Sense::ge, -big_m, prefix + "_lop"});
  // z <= M x
  out.push_back({p_terms(0.0, -big_m), Sense::le, 0.0, prefix + "_hi0"});
  // z <= p - M x + M
  out.push_back({p_terms(-1.0, big_m), Sense::le, big_m, prefix + "_hip"});
  return out;
}

/// Linearization of the complex bilinear product z = x * (coeff * y) with
/// binary x and y components bounded in [-1, 1]. Returns the envelope
/// constraints for both components; a zero coefficient yields no
/// constraints and pins both z components to zero instead.
inline std::vector<LinearConstraint> linearize_bilinear(MiqcqpModel& model, int z_re, int z_im,
                                                        int x, Complex coeff, int y_re, int y_im,
                                                        const std::string& prefix) {
  const double rc = coeff.real(), ic = coeff.imag();
  if (rc == 0.0 && ic == 0.0) {
    model.fix_var(z_re, 0.0);
    model.fix_var(z_im, 0.0);
    return {};
  }
  const double big_m = std::abs(rc) + std::abs(ic);
  // Re(c y) = rc*y_re - ic*y_im ; Im(c y) = rc*y_im + ic*y_re
  std::vector<LinearConstraint> out = mccormick_envelope(z_re, x, rc, y_re, -ic, y_im, big_m,
                                                         prefix + "_re");
  std::vector<LinearConstraint> im = mccormick_envelope(z_im, x, rc, y_im, ic, y_re, big_m,
                                                        prefix + "_im");
  out.insert(out.end(), im.begin(), im.end());
  return out;
}

namespace detail {

struct BaseModelRefs {
  int depth = 0;
  int n = 0;
  int m = 0;
};

// Variables Y_t (t = 0..d) and x_t (t = 1..d), the identity pinning of
// Y_0, the per-step product constraints (bilinear or McCormick-linearized),
// the one-hot gate selection, and the zero-leakage constraints on Y_d.
inline BaseModelRefs build_base_model(MiqcqpModel& model, const std::vector<ComplexMatrix>& gates,
                                      int n, int n_c, int depth, bool linearize) {
  const int m = static_cast<int>(gates.size());
  BaseModelRefs refs{depth, n, m};

  auto add_y_block = [&](int t) {
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l) {
        model.add_continuous(y_name(true, t, k, l), -1.0, 1.0);
        model.add_continuous(y_name(false, t, k, l), -1.0, 1.0);
      }
  };

  add_y_block(0);
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) {
      model.add_linear({{{1.0, model.var_id(y_name(true, 0, k, l))}},
                        Sense::eq,
                        k == l ? 1.0 : 0.0,
                        "y0_pin_re_" + std::to_string(k) + "_" + std::to_string(l)});
      model.add_linear({{{1.0, model.var_id(y_name(false, 0, k, l))}},
                        Sense::eq,
                        0.0,
                        "y0_pin_im_" + std::to_string(k) + "_" + std::to_string(l)});
    }

  for (int t = 1; t <= depth; ++t) {
    for (int i = 0; i < m; ++i) model.add_binary(x_name(t, i));
    {
      LinearConstraint onehot;
      onehot.name = "onehot_" + std::to_string(t);
      onehot.sense = Sense::eq;
      onehot.rhs = 1.0;
      for (int i = 0; i < m; ++i) onehot.terms.push_back({1.0, model.var_id(x_name(t, i))});
      model.add_linear(std::move(onehot));
    }

    if (linearize) {
      // z variables and their envelopes, then the substituted linear sums.
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l)
          for (int p = 1; p <= n; ++p)
            for (int i = 0; i < m; ++i) {
              const Complex c = gates[static_cast<size_t>(i)](k - 1, p - 1);
              if (c == Complex{}) continue;  // elided entirely
              const double big_m = std::abs(c.real()) + std::abs(c.imag());
              const int z_re = model.add_continuous(z_name(true, t, k, l, p, i), -big_m, big_m);
              const int z_im = model.add_continuous(z_name(false, t, k, l, p, i), -big_m, big_m);
              auto cs = linearize_bilinear(
                  model, z_re, z_im, model.var_id(x_name(t, i)), c,
                  model.var_id(y_name(true, t - 1, p, l)), model.var_id(y_name(false, t - 1, p, l)),
                  "mc_" + std::to_string(t) + "_" + std::to_string(k) + "_" + std::to_string(l) +
                      "_" + std::to_string(p) + "_" + std::to_string(i));
              for (auto& cons : cs) model.add_linear(std::move(cons));
            }
      add_y_block(t);
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) {
          LinearConstraint sum_re, sum_im;
          sum_re.name = "step_re_" + std::to_string(t) + "_" + std::to_string(k) + "_" +
                        std::to_string(l);
          sum_im.name = "step_im_" + std::to_string(t) + "_" + std::to_string(k) + "_" +
                        std::to_string(l);
          sum_re.sense = sum_im.sense = Sense::eq;
          sum_re.rhs = sum_im.rhs = 0.0;
          sum_re.terms.push_back({1.0, model.var_id(y_name(true, t, k, l))});
          sum_im.terms.push_back({1.0, model.var_id(y_name(false, t, k, l))});
          for (int p = 1; p <= n; ++p)
            for (int i = 0; i < m; ++i) {
              if (!model.has_var(z_name(true, t, k, l, p, i))) continue;
              sum_re.terms.push_back({-1.0, model.var_id(z_name(true, t, k, l, p, i))});
              sum_im.terms.push_back({-1.0, model.var_id(z_name(false, t, k, l, p, i))});
            }
          model.add_linear(std::move(sum_re));
          model.add_linear(std::move(sum_im));
        }
    } else {
      add_y_block(t);
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) {
          QuadraticConstraint step_re, step_im;
          step_re.name = "step_re_" + std::to_string(t) + "_" + std::to_string(k) + "_" +
                         std::to_string(l);
          step_im.name = "step_im_" + std::to_string(t) + "_" + std::to_string(k) + "_" +
                         std::to_string(l);
          step_re.sense = step_im.sense = Sense::eq;
          step_re.rhs = step_im.rhs = 0.0;
          step_re.linear.push_back({1.0, model.var_id(y_name(true, t, k, l))});
          step_im.linear.push_back({1.0, model.var_id(y_name(false, t, k, l))});
          for (int p = 1; p <= n; ++p)
            for (int i = 0; i < m; ++i) {
              const Complex c = gates[static_cast<size_t>(i)](k - 1, p - 1);
              if (c == Complex{}) continue;
              const int x = model.var_id(x_name(t, i));
              const int yr = model.var_id(y_name(true, t - 1, p, l));
              const int yi = model.var_id(y_name(false, t - 1, p, l));
              if (c.real() != 0.0) {
                step_re.bilinear.push_back({-c.real(), x, yr});
                step_im.bilinear.push_back({-c.real(), x, yi});
              }
              if (c.imag() != 0.0) {
                step_re.bilinear.push_back({c.imag(), x, yi});
                step_im.bilinear.push_back({-c.imag(), x, yr});
              }
            }
          model.add_quadratic(std::move(step_re));
          model.add_quadratic(std::move(step_im));
        }
    }
  }

  // Constraints (v), (vi): the final product must not couple the
  // computational and non-computational blocks.
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) {
      const bool comp_k = k <= n_c, comp_l = l <= n_c;
      if (comp_k == comp_l) continue;
      model.add_linear({{{1.0, model.var_id(y_name(true, depth, k, l))}},
                        Sense::eq,
                        0.0,
                        "leak_re_" + std::to_string(k) + "_" + std::to_string(l)});
      model.add_linear({{{1.0, model.var_id(y_name(false, depth, k, l))}},
                        Sense::eq,
                        0.0,
                        "leak_im_" + std::to_string(k) + "_" + std::to_string(l)});
    }
  return refs;
}

inline std::vector<ComplexMatrix> model_gates(const GateAlphabet& alphabet,
                                              bool include_identity_gate) {
  std::vector<ComplexMatrix> gates = alphabet.gates;
  if (include_identity_gate) gates.push_back(ComplexMatrix::identity(alphabet.n));
  return gates;
}

}  // namespace detail

/// The gate-compilation MIQCQP: minimize the squared Frobenius distance
/// between the target and the computational block of the depth-d product,
/// subject to the product chain, one-hot gate selection and zero leakage.
/// With linearize=true the binary-times-continuous products are replaced
/// by McCormick-linearized z variables; the feasible set is unchanged.
/// include_identity_gate appends the identity to the alphabet so depths
/// up to d can be searched with a fixed-depth model.
inline MiqcqpModel build_frobenius_model(const GateAlphabet& alphabet, const ComplexMatrix& target,
                                         int depth, bool linearize,
                                         bool include_identity_gate = false) {
  if (depth < 1) throw std::invalid_argument("build_frobenius_model: depth must be >= 1");
  if (target.rows() != alphabet.n_C || target.cols() != alphabet.n_C)
    throw std::invalid_argument("build_frobenius_model: target dimension mismatch");
  MiqcqpModel model;
  const auto gates = detail::model_gates(alphabet, include_identity_gate);
  detail::build_base_model(model, gates, alphabet.n, alphabet.n_C, depth, linearize);

  QuadObjective& obj = model.objective();
  for (int k = 1; k <= alphabet.n_C; ++k)
    for (int l = 1; l <= alphabet.n_C; ++l) {
      const int yr = model.var_id(y_name(true, depth, k, l));
      const int yi = model.var_id(y_name(false, depth, k, l));
      const Complex t_val = target(k - 1, l - 1);
      obj.quad.push_back({1.0, yr, yr});
      obj.quad.push_back({1.0, yi, yi});
      if (t_val.real() != 0.0) obj.linear.push_back({-2.0 * t_val.real(), yr});
      if (t_val.imag() != 0.0) obj.linear.push_back({-2.0 * t_val.imag(), yi});
      obj.constant += std::norm(t_val);
    }

  model.meta() = {depth, static_cast<int>(gates.size()), alphabet.n, alphabet.n_C,
                  objective_name(ModelObjective::frobenius), linearize};
  return model;
}

namespace detail {

// Column subsets of {1..4} in the order the first-row expansion visits
// them; rows are always the trailing |S| rows of the block.
inline std::string subset_suffix(const std::vector<int>& cols) {
  std::string s;
  for (int c : cols) s += std::to_string(c);
  return s;
}

inline void add_det_recursion(MiqcqpModel& model, int depth, const std::vector<int>& cols) {
  const int size = static_cast<int>(cols.size());
  const int row = 4 - size + 1;  // 1-based row within the computational block
  const std::string suffix = subset_suffix(cols);
  if (model.has_var("det_re_" + suffix)) return;
  const int d_re = model.add_continuous("det_re_" + suffix, -1.0, 1.0);
  const int d_im = model.add_continuous("det_im_" + suffix, -1.0, 1.0);

  QuadraticConstraint c_re, c_im;
  c_re.name = "det_def_re_" + suffix;
  c_im.name = "det_def_im_" + suffix;
  c_re.sense = c_im.sense = Sense::eq;
  c_re.rhs = c_im.rhs = 0.0;
  c_re.linear.push_back({1.0, d_re});
  c_im.linear.push_back({1.0, d_im});

  if (size == 2) {
    // 2x2 base case: A11 A22 - A12 A21 on the last two rows.
    auto add_product = [&](double sign, int r1, int c1, int r2, int c2) {
      const int a_re = model.var_id(y_name(true, depth, r1, c1));
      const int a_im = model.var_id(y_name(false, depth, r1, c1));
      const int b_re = model.var_id(y_name(true, depth, r2, c2));
      const int b_im = model.var_id(y_name(false, depth, r2, c2));
      c_re.bilinear.push_back({-sign, a_re, b_re});
      c_re.bilinear.push_back({sign, a_im, b_im});
      c_im.bilinear.push_back({-sign, a_re, b_im});
      c_im.bilinear.push_back({-sign, a_im, b_re});
    };
    add_product(1.0, row, cols[0], row + 1, cols[1]);
    add_product(-1.0, row, cols[1], row + 1, cols[0]);
  } else {
    for (int j = 0; j < size; ++j) {
      std::vector<int> minor_cols = cols;
      minor_cols.erase(minor_cols.begin() + j);
      add_det_recursion(model, depth, minor_cols);
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      const int a_re = model.var_id(y_name(true, depth, row, cols[j]));
      const int a_im = model.var_id(y_name(false, depth, row, cols[j]));
      const int m_re = model.var_id("det_re_" + subset_suffix(minor_cols));
      const int m_im = model.var_id("det_im_" + subset_suffix(minor_cols));
      c_re.bilinear.push_back({-sign, a_re, m_re});
      c_re.bilinear.push_back({sign, a_im, m_im});
      c_im.bilinear.push_back({-sign, a_re, m_im});
      c_im.bilinear.push_back({-sign, a_im, m_re});
    }
  }
  model.add_quadratic(std::move(c_re));
  model.add_quadratic(std::move(c_im));
}

}  // namespace detail

/// The local-invariant MIQCQP: ties Bell-basis, Makhlin-matrix, trace,
/// determinant (recursive cofactor encoding) and quotient variables to the
/// computational block of the depth-d product, then minimizes the distance
/// to the CNOT class or to the perfect-entangler set. None of the
/// continuous-by-continuous bilinear constraints are McCormick-linearized;
/// linearize applies only to the binary-selection step constraints.
/// depth 0 is allowed and yields the degenerate identity-product model.
inline MiqcqpModel build_invariant_model(const GateAlphabet& alphabet, int depth,
                                         ModelObjective objective, bool linearize = false,
                                         bool include_identity_gate = false) {
  if (objective == ModelObjective::frobenius)
    throw std::invalid_argument("build_invariant_model: use build_frobenius_model");
  if (alphabet.n_C != 4)
    throw std::invalid_argument("build_invariant_model: invariants need a 4-dim computational block");
  if (depth < 0) throw std::invalid_argument("build_invariant_model: negative depth");
  MiqcqpModel model;
  const auto gates = detail::model_gates(alphabet, include_identity_gate);
  detail::build_base_model(model, gates, alphabet.n, alphabet.n_C, depth, linearize);

  // Bell-basis variables: UB = Q^dagger Y_d^C Q, linear in Y_d.
  const ComplexMatrix& q = bell_transform();
  for (int k = 1; k <= 4; ++k)
    for (int l = 1; l <= 4; ++l) {
      const std::string suffix = std::to_string(k) + "_" + std::to_string(l);
      const int ub_re = model.add_continuous("UBre_" + suffix, -1.0, 1.0);
      const int ub_im = model.add_continuous("UBim_" + suffix, -1.0, 1.0);
      LinearConstraint c_re, c_im;
      c_re.name = "ub_def_re_" + suffix;
      c_im.name = "ub_def_im_" + suffix;
      c_re.sense = c_im.sense = Sense::eq;
      c_re.rhs = c_im.rhs = 0.0;
      c_re.terms.push_back({1.0, ub_re});
      c_im.terms.push_back({1.0, ub_im});
      for (int p = 1; p <= 4; ++p)
        for (int r = 1; r <= 4; ++r) {
          const Complex w = std::conj(q(p - 1, k - 1)) * q(r - 1, l - 1);
          if (w == Complex{}) continue;
          const int yr = model.var_id(y_name(true, depth, p, r));
          const int yi = model.var_id(y_name(false, depth, p, r));
          if (w.real() != 0.0) {
            c_re.terms.push_back({-w.real(), yr});
            c_im.terms.push_back({-w.real(), yi});
          }
          if (w.imag() != 0.0) {
            c_re.terms.push_back({w.imag(), yi});
            c_im.terms.push_back({-w.imag(), yr});
          }
        }
      model.add_linear(std::move(c_re));
      model.add_linear(std::move(c_im));
    }

  // Makhlin matrix m = UB^T UB, bilinear in UB.
  for (int k = 1; k <= 4; ++k)
    for (int l = 1; l <= 4; ++l) {
      const std::string suffix = std::to_string(k) + "_" + std::to_string(l);
      const int m_re = model.add_continuous("mre_" + suffix, -1.0, 1.0);
      const int m_im = model.add_continuous("mim_" + suffix, -1.0, 1.0);
      QuadraticConstraint c_re, c_im;
      c_re.name = "m_def_re_" + suffix;
      c_im.name = "m_def_im_" + suffix;
      c_re.sense = c_im.sense = Sense::eq;
      c_re.rhs = c_im.rhs = 0.0;
      c_re.linear.push_back({1.0, m_re});
      c_im.linear.push_back({1.0, m_im});
      for (int p = 1; p <= 4; ++p) {
        const std::string pk = std::to_string(p) + "_" + std::to_string(k);
        const std::string pl = std::to_string(p) + "_" + std::to_string(l);
        const int a_re = model.var_id("UBre_" + pk);
        const int a_im = model.var_id("UBim_" + pk);
        const int b_re = model.var_id("UBre_" + pl);
        const int b_im = model.var_id("UBim_" + pl);
        c_re.bilinear.push_back({-1.0, a_re, b_re});
        c_re.bilinear.push_back({1.0, a_im, b_im});
        c_im.bilinear.push_back({-1.0, a_re, b_im});
        c_im.bilinear.push_back({-1.0, a_im, b_re});
      }
      model.add_quadratic(std::move(c_re));
      model.add_quadratic(std::move(c_im));
    }

  // Traces of m and m^2, and the squared trace.
  const int trm_re = model.add_continuous("trm_re", -4.0, 4.0);
  const int trm_im = model.add_continuous("trm_im", -4.0, 4.0);
  {
    LinearConstraint c_re{{{1.0, trm_re}}, Sense::eq, 0.0, "trm_def_re"};
    LinearConstraint c_im{{{1.0, trm_im}}, Sense::eq, 0.0, "trm_def_im"};
    for (int k = 1; k <= 4; ++k) {
      const std::string kk = std::to_string(k) + "_" + std::to_string(k);
      c_re.terms.push_back({-1.0, model.var_id("mre_" + kk)});
      c_im.terms.push_back({-1.0, model.var_id("mim_" + kk)});
    }
    model.add_linear(std::move(c_re));
    model.add_linear(std::move(c_im));
  }
  const int tr2_re = model.add_continuous("tr2_re", -16.0, 16.0);
  const int tr2_im = model.add_continuous("tr2_im", -16.0, 16.0);
  {
    QuadraticConstraint c_re, c_im;
    c_re.name = "tr2_def_re";
    c_im.name = "tr2_def_im";
    c_re.sense = c_im.sense = Sense::eq;
    c_re.rhs = c_im.rhs = 0.0;
    c_re.linear.push_back({1.0, tr2_re});
    c_re.bilinear.push_back({-1.0, trm_re, trm_re});
    c_re.bilinear.push_back({1.0, trm_im, trm_im});
    c_im.linear.push_back({1.0, tr2_im});
    c_im.bilinear.push_back({-2.0, trm_re, trm_im});
    model.add_quadratic(std::move(c_re));
    model.add_quadratic(std::move(c_im));
  }
  const int trm2_re = model.add_continuous("trm2_re", -4.0, 4.0);
  const int trm2_im = model.add_continuous("trm2_im", -4.0, 4.0);
  {
    QuadraticConstraint c_re, c_im;
    c_re.name = "trm2_def_re";
    c_im.name = "trm2_def_im";
    c_re.sense = c_im.sense = Sense::eq;
    c_re.rhs = c_im.rhs = 0.0;
    c_re.linear.push_back({1.0, trm2_re});
    c_im.linear.push_back({1.0, trm2_im});
    for (int k = 1; k <= 4; ++k)
      for (int l = 1; l <= 4; ++l) {
        const std::string kl = std::to_string(k) + "_" + std::to_string(l);
        const std::string lk = std::to_string(l) + "_" + std::to_string(k);
        c_re.bilinear.push_back({-1.0, model.var_id("mre_" + kl), model.var_id("mre_" + lk)});
        c_re.bilinear.push_back({1.0, model.var_id("mim_" + kl), model.var_id("mim_" + lk)});
        c_im.bilinear.push_back({-1.0, model.var_id("mre_" + kl), model.var_id("mim_" + lk)});
        c_im.bilinear.push_back({-1.0, model.var_id("mim_" + kl), model.var_id("mre_" + lk)});
      }
    model.add_quadratic(std::move(c_re));
    model.add_quadratic(std::move(c_im));
  }

  // det(Y_d^C) via the recursive cofactor encoding.
  detail::add_det_recursion(model, depth, {1, 2, 3, 4});
  const int det_re = model.var_id("det_re_1234");
  const int det_im = model.var_id("det_im_1234");

  // Quotients as bilinear constraints: tr2 = 16 det (g1 + i g2) and
  // tr2 - trm2 = 4 det (g3 + i g3_im).
  const int g1 = model.add_continuous("g1", -1.0, 1.0);
  const int g2 = model.add_continuous("g2", -1.0, 1.0);
  const int g3 = model.add_continuous("g3", -5.0, 5.0);
  const int g3_im = model.add_continuous("g3_im", -5.0, 5.0);
  {
    QuadraticConstraint c_re, c_im;
    c_re.name = "div_g12_re";
    c_im.name = "div_g12_im";
    c_re.sense = c_im.sense = Sense::eq;
    c_re.rhs = c_im.rhs = 0.0;
    c_re.bilinear.push_back({16.0, det_re, g1});
    c_re.bilinear.push_back({-16.0, det_im, g2});
    c_re.linear.push_back({-1.0, tr2_re});
    c_im.bilinear.push_back({16.0, det_re, g2});
    c_im.bilinear.push_back({16.0, det_im, g1});
    c_im.linear.push_back({-1.0, tr2_im});
    model.add_quadratic(std::move(c_re));
    model.add_quadratic(std::move(c_im));
  }
  {
    QuadraticConstraint c_re, c_im;
    c_re.name = "div_g3_re";
    c_im.name = "div_g3_im";
    c_re.sense = c_im.sense = Sense::eq;
    c_re.rhs = c_im.rhs = 0.0;
    c_re.bilinear.push_back({4.0, det_re, g3});
    c_re.bilinear.push_back({-4.0, det_im, g3_im});
    c_re.linear.push_back({-1.0, tr2_re});
    c_re.linear.push_back({1.0, trm2_re});
    c_im.bilinear.push_back({4.0, det_re, g3_im});
    c_im.bilinear.push_back({4.0, det_im, g3});
    c_im.linear.push_back({-1.0, tr2_im});
    c_im.linear.push_back({1.0, trm2_im});
    model.add_quadratic(std::move(c_re));
    model.add_quadratic(std::move(c_im));
  }

  QuadObjective& obj = model.objective();
  if (objective == ModelObjective::cnot_class) {
    // g1^2 + g2^2 + (g3 - 1)^2
    obj.quad.push_back({1.0, g1, g1});
    obj.quad.push_back({1.0, g2, g2});
    obj.quad.push_back({1.0, g3, g3});
    obj.linear.push_back({-2.0, g3});
    obj.constant = 1.0;
  } else {
    // (g1 - g3 s)^2 with s >= 0, s^2 = g1^2 + g2^2; the square root the
    // closed form needs is introduced as the auxiliary s, and the cubic
    // g3*s product as the auxiliary e.
    const double root2 = std::sqrt(2.0);
    const int s = model.add_continuous("pe_s", 0.0, root2);
    const int e = model.add_continuous("pe_e", -5.0 * root2, 5.0 * root2);
    QuadraticConstraint radius, cross;
    radius.name = "pe_radius";
    radius.sense = Sense::eq;
    radius.rhs = 0.0;
    radius.bilinear.push_back({1.0, s, s});
    radius.bilinear.push_back({-1.0, g1, g1});
    radius.bilinear.push_back({-1.0, g2, g2});
    cross.name = "pe_cross";
    cross.sense = Sense::eq;
    cross.rhs = 0.0;
    cross.linear.push_back({1.0, e});
    cross.bilinear.push_back({-1.0, g3, s});
    model.add_quadratic(std::move(radius));
    model.add_quadratic(std::move(cross));
    obj.quad.push_back({1.0, g1, g1});
    obj.quad.push_back({-2.0, g1, e});
    obj.quad.push_back({1.0, e, e});
  }

  model.meta() = {depth, static_cast<int>(gates.size()), alphabet.n, alphabet.n_C,
                  objective_name(objective), linearize};
  return model;
}

/// The assignment a given program induces: one-hot binaries, exact partial
/// products for every Y_t, realized z values, and the derived invariant
/// variables. Feasible in the corresponding model up to roundoff, which is
/// what certifies the encoding against the evaluator.
inline std::vector<double> witness_assignment(const MiqcqpModel& model, const Program& program,
                                              const GateAlphabet& alphabet) {
  const ModelMeta& meta = model.meta();
  if (program.depth() != meta.depth)
    throw std::invalid_argument("witness_assignment: program depth " +
                                std::to_string(program.depth()) + " != model depth " +
                                std::to_string(meta.depth));
  const auto gates = detail::model_gates(alphabet, meta.alphabet_size == alphabet.size() + 1);
  if (meta.alphabet_size != static_cast<int>(gates.size()) || meta.dim != alphabet.n)
    throw std::invalid_argument("witness_assignment: alphabet does not match the model");

  std::vector<double> values(model.vars().size(), 0.0);
  auto set = [&](const std::string& name, double v) {
    values[static_cast<size_t>(model.var_id(name))] = v;
  };

  const int n = meta.dim;
  std::vector<ComplexMatrix> prefix(static_cast<size_t>(meta.depth) + 1);
  prefix[0] = ComplexMatrix::identity(n);
  for (int t = 1; t <= meta.depth; ++t) {
    const int gate = program.indices[static_cast<size_t>(t) - 1];
    if (gate < 0 || gate >= static_cast<int>(gates.size()))
      throw std::invalid_argument("witness_assignment: program index out of range");
    prefix[static_cast<size_t>(t)] = gates[static_cast<size_t>(gate)] * prefix[static_cast<size_t>(t) - 1];
  }

  for (int t = 0; t <= meta.depth; ++t)
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l) {
        const Complex v = prefix[static_cast<size_t>(t)](k - 1, l - 1);
        set(y_name(true, t, k, l), v.real());
        set(y_name(false, t, k, l), v.imag());
      }
  for (int t = 1; t <= meta.depth; ++t) {
    const int gate = program.indices[static_cast<size_t>(t) - 1];
    for (int i = 0; i < meta.alphabet_size; ++i) set(x_name(t, i), i == gate ? 1.0 : 0.0);
    if (meta.linearized) {
      for (int k = 1; k <= n; ++k)
        for (int p = 1; p <= n; ++p) {
          const Complex c = gates[static_cast<size_t>(gate)](k - 1, p - 1);
          if (c == Complex{}) continue;
          for (int l = 1; l <= n; ++l) {
            const Complex zv = c * prefix[static_cast<size_t>(t) - 1](p - 1, l - 1);
            set(z_name(true, t, k, l, p, gate), zv.real());
            set(z_name(false, t, k, l, p, gate), zv.imag());
          }
        }
    }
  }

  if (meta.objective == std::string("cnot-class") || meta.objective == std::string("pe")) {
    const ComplexMatrix block = prefix.back().block(0, 0, 4, 4);
    const ComplexMatrix ub = bell_basis(block);
    const ComplexMatrix m = transpose(ub) * ub;
    for (int k = 1; k <= 4; ++k)
      for (int l = 1; l <= 4; ++l) {
        const std::string suffix = std::to_string(k) + "_" + std::to_string(l);
        set("UBre_" + suffix, ub(k - 1, l - 1).real());
        set("UBim_" + suffix, ub(k - 1, l - 1).imag());
        set("mre_" + suffix, m(k - 1, l - 1).real());
        set("mim_" + suffix, m(k - 1, l - 1).imag());
      }
    const Complex tr = trace(m);
    const Complex tr2 = tr * tr;
    const Complex trm2 = trace(m * m);
    set("trm_re", tr.real());
    set("trm_im", tr.imag());
    set("tr2_re", tr2.real());
    set("tr2_im", tr2.imag());
    set("trm2_re", trm2.real());
    set("trm2_im", trm2.imag());

    // Minors over trailing rows and every column subset the recursion uses.
    std::vector<std::vector<int>> subsets;
    for (int mask = 0; mask < 16; ++mask) {
      std::vector<int> cols;
      for (int c = 1; c <= 4; ++c)
        if (mask & (1 << (c - 1))) cols.push_back(c);
      if (cols.size() >= 2) subsets.push_back(cols);
    }
    for (const auto& cols : subsets) {
      const int size = static_cast<int>(cols.size());
      const int row0 = 4 - size;  // 0-based first row
      ComplexMatrix sub(size, size);
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) sub(r, c) = block(row0 + r, cols[static_cast<size_t>(c)] - 1);
      const Complex d = determinant(sub);
      const std::string suffix = detail::subset_suffix(cols);
      set("det_re_" + suffix, d.real());
      set("det_im_" + suffix, d.imag());
    }

    const Complex det = determinant(block);
    const Complex g12 = tr2 / (16.0 * det);
    const Complex g3c = (tr2 - trm2) / (4.0 * det);
    set("g1", g12.real());
    set("g2", g12.imag());
    set("g3", g3c.real());
    set("g3_im", g3c.imag());
    if (meta.objective == std::string("pe")) {
      const double s = std::sqrt(g12.real() * g12.real() + g12.imag() * g12.imag());
      set("pe_s", s);
      set("pe_e", g3c.real() * s);
    }
  }
  return values;
}

}  // namespace braidc
