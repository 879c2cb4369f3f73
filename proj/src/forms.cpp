#include "qrf/forms.hpp"

#include <stdexcept>

namespace qrf {

QuadraticForm QuadraticForm::zero(std::size_t n_modes) {
  QuadraticForm f;
  f.quad = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  f.linear = Eigen::VectorXd::Zero(2 * n_modes);
  return f;
}

QuadraticForm QuadraticForm::position(std::size_t n_modes, std::size_t dof) {
  QuadraticForm f = zero(n_modes);
  f.linear(canon::position_slot(dof)) = 1.0;
  return f;
}

QuadraticForm QuadraticForm::momentum(std::size_t n_modes, std::size_t dof) {
  QuadraticForm f = zero(n_modes);
  f.linear(canon::momentum_slot(dof)) = 1.0;
  return f;
}

QuadraticForm QuadraticForm::weyl_product(const QuadraticForm& a,
                                          const QuadraticForm& b) {
  if (!a.is_linear() || !b.is_linear())
    throw std::invalid_argument("weyl_product expects linear forms");
  if (a.linear.size() != b.linear.size())
    throw std::invalid_argument("weyl_product dimension mismatch");
  QuadraticForm f;
  f.quad = 0.5 * (a.linear * b.linear.transpose() +
                  b.linear * a.linear.transpose());
  f.linear = a.constant.real() * b.linear + b.constant.real() * a.linear;
  f.constant = a.constant * b.constant;
  if (a.constant.imag() != 0.0 || b.constant.imag() != 0.0) {
    // Complex constants only multiply cleanly when one factor is purely a
    // constant; keep the restriction explicit.
    if (!a.linear.isZero(0.0) && !b.linear.isZero(0.0))
      throw std::invalid_argument(
          "weyl_product with complex constants on both linear factors");
  }
  return f;
}

QuadraticForm QuadraticForm::operator+(const QuadraticForm& rhs) const {
  if (linear.size() != rhs.linear.size())
    throw std::invalid_argument("form dimension mismatch");
  QuadraticForm f;
  f.quad = quad + rhs.quad;
  f.linear = linear + rhs.linear;
  f.constant = constant + rhs.constant;
  return f;
}

QuadraticForm QuadraticForm::operator-(const QuadraticForm& rhs) const {
  return *this + rhs.scaled(-1.0);
}

QuadraticForm QuadraticForm::scaled(double factor) const {
  QuadraticForm f = *this;
  f.quad *= factor;
  f.linear *= factor;
  f.constant *= factor;
  return f;
}

QuadraticForm row_form(const canon::LinearPhaseMap& map, std::size_t slot) {
  if (slot >= map.size()) throw std::invalid_argument("row slot out of range");
  QuadraticForm f = QuadraticForm::zero(map.dim);
  for (std::size_t j = 0; j < map.size(); ++j)
    f.linear(j) = to_double(map.matrix.at(slot, j));
  f.constant = map.translation[slot];
  return f;
}

QuadraticForm conjugate_through(const QuadraticForm& form,
                                const canon::LinearPhaseMap& map) {
  const std::size_t n = map.size();
  if (form.n_vars() != n)
    throw std::invalid_argument("form does not match map dimension");

  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = to_double(map.matrix.at(i, j));
  Eigen::VectorXd tau(n);
  for (std::size_t i = 0; i < n; ++i) tau(i) = map.translation[i];

  // f(M A + tau): quadratic part M^T Q M, linear part M^T (l + 2 Q tau),
  // constant picks up l.tau + tau^T Q tau.
  QuadraticForm out;
  out.quad = m.transpose() * form.quad * m;
  out.linear = m.transpose() * (form.linear + 2.0 * form.quad * tau);
  out.constant = form.constant + form.linear.dot(tau) +
                 tau.dot(form.quad * tau);
  return out;
}

}  // namespace qrf
