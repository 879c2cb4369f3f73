#pragma once

#include "qrf/canon.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace qrf {

// Weyl-ordered affine-plus-quadratic observable over the 2n phase variables
// (same slot ordering as qrf::canon):
//   f = sum_ab quad[a][b] * W(A_a A_b) + sum_a linear[a] * A_a + constant,
// where W denotes the symmetrized product (A_a A_b + A_b A_a)/2. `quad`
// is kept symmetric; the constant may be complex (needed for operator
// identities that absorb half a commutator).
struct QuadraticForm {
  Eigen::MatrixXd quad;
  Eigen::VectorXd linear;
  std::complex<double> constant{0.0, 0.0};

  std::size_t n_vars() const { return static_cast<std::size_t>(linear.size()); }
  bool is_linear() const { return quad.isZero(0.0); }

  static QuadraticForm zero(std::size_t n_modes);
  static QuadraticForm position(std::size_t n_modes, std::size_t dof);
  static QuadraticForm momentum(std::size_t n_modes, std::size_t dof);
  // W(a b) for two purely linear forms a, b (constants multiply through).
  static QuadraticForm weyl_product(const QuadraticForm& a,
                                    const QuadraticForm& b);

  QuadraticForm operator+(const QuadraticForm& rhs) const;
  QuadraticForm operator-(const QuadraticForm& rhs) const;
  QuadraticForm scaled(double factor) const;
};

// Substitutes the map's primed variables into the form: the result g
// satisfies g(A) = f(M A + tau). Weyl ordering is preserved by affine
// substitution, so the transform is exact on the coefficients.
QuadraticForm conjugate_through(const QuadraticForm& form,
                                const canon::LinearPhaseMap& map);

// The affine-linear form of one primed variable: row `slot` of the map,
// with the translation entry as the constant.
QuadraticForm row_form(const canon::LinearPhaseMap& map, std::size_t slot);

// Shift operator record: exp(-i * displacement * P_dof / hbar) under the
// convention that it maps psi(u) to psi(u + displacement).
struct ShiftSpec {
  std::size_t dof = 0;
  double displacement = 0.0;
};

}  // namespace qrf
