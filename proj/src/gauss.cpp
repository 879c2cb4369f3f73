#include "qrf/gauss.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qrf::gauss {

namespace {

constexpr double kPi = std::numbers::pi;

void check_spd(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("quad not square");
  if (!a.isApprox(a.transpose(), 1e-12))
    throw std::invalid_argument("quad not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("quad not positive definite");
}

// Complex Gaussian pair data for <t_left | ... | t_right> integrals: the
// product conj(t_left) t_right is C exp(-y^T M y/2 + w^T y) in y = z - c_left.
struct PairMoments {
  std::complex<double> weight;  // integral of conj(t_left) t_right
  Eigen::VectorXcd mean;        // complex mean of z under the pair measure
  Eigen::MatrixXd cov;          // M^{-1}, real
  Eigen::VectorXcd dcoef;       // E[i k_r - A_r (z - c_r)]
  const GaussTerm* right = nullptr;
};

PairMoments pair_moments(const GaussTerm& left, const GaussTerm& right) {
  const Eigen::Index n = left.center.size();
  const Eigen::MatrixXd m = left.quad + right.quad;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("degenerate Gaussian pair");

  const Eigen::VectorXd delta = right.center - left.center;
  const std::complex<double> i_unit(0.0, 1.0);
  Eigen::VectorXcd w = (right.quad * delta).cast<std::complex<double>>() +
                       i_unit * (right.wavevec - left.wavevec);
  const Eigen::VectorXcd minv_w =
      llt.solve(w.real()).cast<std::complex<double>>() +
      i_unit * llt.solve(w.imag()).cast<std::complex<double>>();

  // Plain bilinear w^T M^{-1} w (no conjugation on w).
  std::complex<double> exponent = 0.5 * (w.transpose() * minv_w)(0, 0);
  exponent += -0.5 * delta.dot(right.quad * delta) -
              i_unit * right.wavevec.dot(delta);

  double half_log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    half_log_det += std::log(llt.matrixL()(i, i));

  PairMoments pm;
  pm.weight = std::conj(left.coeff) * right.coeff *
              std::exp(0.5 * static_cast<double>(n) * std::log(2.0 * kPi) -
                       half_log_det + exponent.real()) *
              std::exp(i_unit * exponent.imag());
  pm.mean = left.center.cast<std::complex<double>>() + minv_w;
  pm.cov = llt.solve(Eigen::MatrixXd::Identity(n, n));
  pm.dcoef = i_unit * right.wavevec.cast<std::complex<double>>() -
             (right.quad.cast<std::complex<double>>() *
              (pm.mean - right.center.cast<std::complex<double>>()));
  pm.right = &right;
  return pm;
}

// Ordered phase-space second moment <A_a A_b> (operator order a then b)
// under the pair measure, normalized to weight 1.
std::complex<double> ordered_second_moment(const PairMoments& pm,
                                           std::size_t slot_a,
                                           std::size_t slot_b, double hbar) {
  const std::complex<double> i_unit(0.0, 1.0);
  const std::size_t a = slot_a / 2, b = slot_b / 2;
  const bool a_mom = slot_a % 2, b_mom = slot_b % 2;
  const Eigen::MatrixXd& ar = pm.right->quad;

  if (!a_mom && !b_mom) return pm.mean(a) * pm.mean(b) + pm.cov(a, b);
  if (!a_mom && b_mom) {  // <X_a P_b>
    const std::complex<double> sigma_ab = (pm.cov * ar)(a, b);
    return -i_unit * hbar * (pm.mean(a) * pm.dcoef(b) - sigma_ab);
  }
  if (a_mom && !b_mom)  // <P_a X_b> = <X_b P_a> - i hbar delta_ab
    return ordered_second_moment(pm, slot_b, slot_a, hbar) -
           (a == b ? i_unit * hbar : std::complex<double>(0.0));
  const std::complex<double> quad_ab = (ar * pm.cov * ar)(a, b);
  return -hbar * hbar *
         (pm.dcoef(a) * pm.dcoef(b) + quad_ab - ar(a, b));
}

std::complex<double> first_moment(const PairMoments& pm, std::size_t slot,
                                  double hbar) {
  if (slot % 2 == 0) return pm.mean(slot / 2);
  return std::complex<double>(0.0, -hbar) * pm.dcoef(slot / 2);
}

double sqrt_gauss_log(double z, double mean, double sigma) {
  return -0.25 * std::log(2.0 * kPi * sigma * sigma) -
         (z - mean) * (z - mean) / (4.0 * sigma * sigma);
}

}  // namespace

std::complex<double> GaussTerm::value(const Eigen::VectorXd& z) const {
  const Eigen::VectorXd y = z - center;
  const std::complex<double> i_unit(0.0, 1.0);
  return coeff * std::exp(-0.5 * y.dot(quad * y) + i_unit * wavevec.dot(y));
}

GaussTerm GaussTerm::packet(const Eigen::VectorXd& center,
                            const Eigen::VectorXd& widths,
                            const Eigen::VectorXd& wavevec) {
  const Eigen::Index n = center.size();
  if (widths.size() != n || wavevec.size() != n)
    throw std::invalid_argument("packet parameter length mismatch");
  GaussTerm term;
  term.center = center;
  term.wavevec = wavevec;
  term.quad = Eigen::MatrixXd::Zero(n, n);
  double log_norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sigma = widths(i);
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      throw std::invalid_argument("packet width must be strictly positive");
    term.quad(i, i) = 1.0 / (2.0 * sigma * sigma);
    log_norm += -0.25 * std::log(2.0 * kPi * sigma * sigma);
  }
  const std::complex<double> i_unit(0.0, 1.0);
  term.coeff = std::exp(log_norm) * std::exp(i_unit * wavevec.dot(center));
  return term;
}

GaussState::GaussState(std::vector<GaussTerm> terms, canon::MassList masses,
                       double hbar)
    : dim_(0), terms_(std::move(terms)), masses_(std::move(masses)),
      hbar_(hbar) {
  if (terms_.empty()) throw std::invalid_argument("state needs terms");
  if (!(hbar_ > 0.0)) throw std::invalid_argument("hbar must be positive");
  dim_ = static_cast<std::size_t>(terms_.front().center.size());
  if (masses_.size() != dim_)
    throw std::invalid_argument("mass list length must equal state dim");
  for (const auto& t : terms_) {
    if (static_cast<std::size_t>(t.center.size()) != dim_ ||
        static_cast<std::size_t>(t.wavevec.size()) != dim_)
      throw std::invalid_argument("term dimension mismatch");
    check_spd(t.quad);
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
      throw std::invalid_argument("term coefficient not finite");
  }
}

std::complex<double> GaussState::value(const Eigen::VectorXd& z) const {
  std::complex<double> acc = 0.0;
  for (const auto& t : terms_) acc += t.value(z);
  return acc;
}

GaussState make_packet(double center, double sigma, double wavevector,
                       Rational mass, double hbar) {
  Eigen::VectorXd c(1), s(1), k(1);
  c << center;
  s << sigma;
  k << wavevector;
  return GaussState({GaussTerm::packet(c, s, k)}, canon::MassList({mass}),
                    hbar);
}

GaussState tensor(const GaussState& a, const GaussState& b) {
  if (a.hbar() != b.hbar())
    throw std::invalid_argument("tensor factors disagree on hbar");
  const std::size_t na = a.dim(), nb = b.dim();
  std::vector<GaussTerm> terms;
  terms.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) {
      GaussTerm t;
      t.coeff = ta.coeff * tb.coeff;
      t.center.resize(na + nb);
      t.center << ta.center, tb.center;
      t.wavevec.resize(na + nb);
      t.wavevec << ta.wavevec, tb.wavevec;
      t.quad = Eigen::MatrixXd::Zero(na + nb, na + nb);
      t.quad.topLeftCorner(na, na) = ta.quad;
      t.quad.bottomRightCorner(nb, nb) = tb.quad;
      terms.push_back(std::move(t));
    }
  std::vector<Rational> masses = a.masses().masses();
  for (const auto& m : b.masses().masses()) masses.push_back(m);
  return GaussState(std::move(terms), canon::MassList(std::move(masses)),
                    a.hbar());
}

GaussState decay_state(double d, double phi, const Rational& m0,
                       const Rational& m1, double sigma0, double sigma1,
                       double hbar) {
  if (!(d > 0.0)) throw std::invalid_argument("separation must be positive");
  if (!(sigma0 > 0.0) || !(sigma1 > 0.0))
    throw std::invalid_argument("widths must be positive");
  const double x = d * to_double(m1 / (m0 + m1));
  const GaussState branch_a =
      tensor(make_packet(x, sigma0, 0.0, m0, hbar),
             make_packet(-d + x, sigma1, 0.0, m1, hbar));
  const GaussState branch_b =
      tensor(make_packet(-x, sigma0, 0.0, m0, hbar),
             make_packet(d - x, sigma1, 0.0, m1, hbar));
  const std::complex<double> i_unit(0.0, 1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<GaussTerm> terms;
  for (const auto& t : branch_a.terms()) {
    GaussTerm copy = t;
    copy.coeff *= inv_sqrt2;
    terms.push_back(copy);
  }
  for (const auto& t : branch_b.terms()) {
    GaussTerm copy = t;
    copy.coeff *= inv_sqrt2 * std::exp(i_unit * phi);
    terms.push_back(copy);
  }
  return GaussState(std::move(terms), canon::MassList({m0, m1}), hbar);
}

std::complex<double> inner_product(const GaussState& a, const GaussState& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("inner product dimension mismatch");
  if (a.hbar() != b.hbar())
    throw std::invalid_argument("inner product hbar mismatch");
  std::complex<double> acc = 0.0;
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) acc += pair_moments(ta, tb).weight;
  return acc;
}

double norm(const GaussState& state) {
  return std::sqrt(std::abs(inner_product(state, state)));
}

GaussState normalized(const GaussState& state) {
  return scaled(state, 1.0 / norm(state));
}

GaussState apply_point_map(const GaussState& state,
                           const canon::LinearPhaseMap& map) {
  const std::size_t n = state.dim();
  if (map.dim != n) throw std::invalid_argument("map dimension mismatch");

  // Verify the map is a pure coordinate substitution: translation-free,
  // positions mix only positions, momenta carry the contragredient block.
  RatMatrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (map.matrix.at(canon::position_slot(i), canon::momentum_slot(j)) != 0)
        throw std::invalid_argument("map mixes positions with momenta");
      if (map.matrix.at(canon::momentum_slot(i), canon::position_slot(j)) != 0)
        throw std::invalid_argument("map mixes momenta with positions");
      s.at(i, j) = map.matrix.at(canon::position_slot(i),
                                 canon::position_slot(j));
    }
  for (double t : map.translation)
    if (t != 0.0)
      throw std::invalid_argument("point substitution must be translation-free");
  Rational det = s.determinant();
  if (det < 0) det = -det;
  if (det != 1)
    throw std::invalid_argument(
        "position block must have |det| = 1 for a unitary substitution");
  const RatMatrix s_inv = s.inverse();
  const RatMatrix s_inv_t = s_inv.transposed();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (map.matrix.at(canon::momentum_slot(i), canon::momentum_slot(j)) !=
          s_inv_t.at(i, j))
        throw std::invalid_argument(
            "momentum block is not the contragredient of the position block");

  Eigen::MatrixXd s_d(n, n), t_d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      s_d(i, j) = to_double(s.at(i, j));
      t_d(i, j) = to_double(s_inv.at(i, j));
    }

  std::vector<GaussTerm> terms;
  terms.reserve(state.terms().size());
  for (const auto& t : state.terms()) {
    GaussTerm out;
    out.coeff = t.coeff;
    out.center = s_d * t.center;
    out.quad = t_d.transpose() * t.quad * t_d;
    out.wavevec = t_d.transpose() * t.wavevec;
    terms.push_back(std::move(out));
  }
  return GaussState(std::move(terms), state.masses(), state.hbar());
}

GaussState shifted_arguments(const GaussState& state,
                             const Eigen::VectorXd& shift) {
  if (static_cast<std::size_t>(shift.size()) != state.dim())
    throw std::invalid_argument("shift dimension mismatch");
  std::vector<GaussTerm> terms = state.terms();
  for (auto& t : terms) t.center -= shift;
  return GaussState(std::move(terms), state.masses(), state.hbar());
}

GaussState modulated(const GaussState& state, const Eigen::VectorXd& q) {
  if (static_cast<std::size_t>(q.size()) != state.dim())
    throw std::invalid_argument("modulation dimension mismatch");
  const std::complex<double> i_unit(0.0, 1.0);
  std::vector<GaussTerm> terms = state.terms();
  for (auto& t : terms) {
    t.coeff *= std::exp(i_unit * q.dot(t.center));
    t.wavevec += q;
  }
  return GaussState(std::move(terms), state.masses(), state.hbar());
}

GaussState scaled(const GaussState& state, std::complex<double> factor) {
  std::vector<GaussTerm> terms = state.terms();
  for (auto& t : terms) t.coeff *= factor;
  return GaussState(std::move(terms), state.masses(), state.hbar());
}

std::complex<double> expect_quadratic(const GaussState& state,
                                      const QuadraticForm& form) {
  if (form.n_vars() != 2 * state.dim())
    throw std::invalid_argument("form does not match state dimension");
  const double hbar = state.hbar();
  std::complex<double> numerator = 0.0;
  std::complex<double> denominator = 0.0;
  for (const auto& ta : state.terms())
    for (const auto& tb : state.terms()) {
      const PairMoments pm = pair_moments(ta, tb);
      std::complex<double> val = form.constant;
      for (std::size_t a = 0; a < form.n_vars(); ++a) {
        if (form.linear(a) != 0.0)
          val += form.linear(a) * first_moment(pm, a, hbar);
        for (std::size_t b = 0; b < form.n_vars(); ++b) {
          const double q = form.quad(a, b);
          if (q == 0.0) continue;
          // Weyl value: symmetrize the ordered moment.
          const std::complex<double> w =
              0.5 * (ordered_second_moment(pm, a, b, hbar) +
                     ordered_second_moment(pm, b, a, hbar));
          val += q * w;
        }
      }
      numerator += pm.weight * val;
      denominator += pm.weight;
    }
  return numerator / denominator;
}

std::complex<double> expect_ordered_product(const GaussState& state,
                                            const QuadraticForm& lin1,
                                            const QuadraticForm& lin2) {
  if (!lin1.is_linear() || !lin2.is_linear())
    throw std::invalid_argument("ordered product expects linear forms");
  if (lin1.n_vars() != 2 * state.dim() || lin2.n_vars() != 2 * state.dim())
    throw std::invalid_argument("form does not match state dimension");
  const double hbar = state.hbar();
  std::complex<double> numerator = 0.0;
  std::complex<double> denominator = 0.0;
  for (const auto& ta : state.terms())
    for (const auto& tb : state.terms()) {
      const PairMoments pm = pair_moments(ta, tb);
      std::complex<double> val = lin1.constant * lin2.constant;
      for (std::size_t a = 0; a < lin1.n_vars(); ++a) {
        if (lin1.linear(a) != 0.0)
          val += lin1.linear(a) * lin2.constant * first_moment(pm, a, hbar);
        if (lin2.linear(a) != 0.0)
          val += lin2.linear(a) * lin1.constant * first_moment(pm, a, hbar);
        for (std::size_t b = 0; b < lin2.n_vars(); ++b)
          if (lin1.linear(a) != 0.0 && lin2.linear(b) != 0.0)
            val += lin1.linear(a) * lin2.linear(b) *
                   ordered_second_moment(pm, a, b, hbar);
      }
      numerator += pm.weight * val;
      denominator += pm.weight;
    }
  return numerator / denominator;
}

std::complex<double> expect_shift(const GaussState& state, std::size_t dof,
                                  double displacement) {
  if (dof >= state.dim()) throw std::invalid_argument("shift dof out of range");
  Eigen::VectorXd s = Eigen::VectorXd::Zero(state.dim());
  s(dof) = displacement;
  return expect_shift_along(state, s);
}

std::complex<double> expect_shift_along(const GaussState& state,
                                        const Eigen::VectorXd& displacement) {
  const GaussState shifted = shifted_arguments(state, displacement);
  return inner_product(state, shifted) / inner_product(state, state);
}

GammaCheckResult gamma_factorization_check(
    double a, double b, double sigma0, double sigma1,
    const std::vector<std::pair<double, double>>& samples) {
  if (!(sigma0 > 0.0) || !(sigma1 > 0.0))
    throw std::invalid_argument("widths must be positive");
  if (samples.empty()) throw std::invalid_argument("degenerate sample set");

  GammaCheckResult result;
  result.sigma_s = sigma0 * sigma1 / std::sqrt(sigma0 * sigma0 +
                                               sigma1 * sigma1);

  // Work in the log domain: both sides are positive Gaussians times a
  // positive crossing factor, so the ratio is a well-defined exponential.
  result.log_ratios.reserve(samples.size());
  for (const auto& [u, v] : samples) {
    const double lhs = sqrt_gauss_log(-u, a, sigma0) +
                       sqrt_gauss_log(v - u, b, sigma1);
    const double rhs = sqrt_gauss_log(u, -a, result.sigma_s) +
                       sqrt_gauss_log(v, b - a, sigma1) +
                       (u + a) * (v - b + a) / (2.0 * sigma1 * sigma1);
    result.log_ratios.push_back(lhs - rhs);
  }
  double mean_log = 0.0;
  for (double r : result.log_ratios) mean_log += r;
  mean_log /= static_cast<double>(result.log_ratios.size());
  result.fitted_constant = std::exp(mean_log);
  for (double r : result.log_ratios)
    result.max_rel_error =
        std::max(result.max_rel_error, std::abs(std::expm1(r - mean_log)));
  return result;
}

BoundingBox bounding_box(const GaussState& state, double n_sigma) {
  const std::size_t n = state.dim();
  BoundingBox box;
  box.lo.assign(n, 0.0);
  box.hi.assign(n, 0.0);
  bool first = true;
  for (const auto& t : state.terms()) {
    const Eigen::MatrixXd cov = t.quad.inverse();
    for (std::size_t d = 0; d < n; ++d) {
      const double spread = std::sqrt(cov(d, d));
      const double lo = t.center(d) - n_sigma * spread;
      const double hi = t.center(d) + n_sigma * spread;
      if (first) {
        box.lo[d] = lo;
        box.hi[d] = hi;
      } else {
        box.lo[d] = std::min(box.lo[d], lo);
        box.hi[d] = std::max(box.hi[d], hi);
      }
    }
    first = false;
  }
  return box;
}

nlohmann::json state_to_json(const GaussState& state) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : state.terms()) {
    nlohmann::json term;
    term["coeff_re"] = t.coeff.real();
    term["coeff_im"] = t.coeff.imag();
    term["center"] = std::vector<double>(t.center.data(),
                                         t.center.data() + t.center.size());
    term["wavevec"] = std::vector<double>(
        t.wavevec.data(), t.wavevec.data() + t.wavevec.size());
    const Eigen::MatrixXd& a = t.quad;
    bool diagonal = true;
    for (Eigen::Index i = 0; i < a.rows() && diagonal; ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (i != j && a(i, j) != 0.0) {
          diagonal = false;
          break;
        }
    if (diagonal) {
      std::vector<double> widths;
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        widths.push_back(std::sqrt(1.0 / (2.0 * a(i, i))));
      term["widths"] = widths;
    } else {
      nlohmann::json rows = nlohmann::json::array();
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
        rows.push_back(std::move(row));
      }
      term["quad"] = rows;
    }
    terms.push_back(std::move(term));
  }
  nlohmann::json out;
  out["dim"] = state.dim();
  out["hbar"] = state.hbar();
  nlohmann::json masses = nlohmann::json::array();
  for (const auto& m : state.masses().masses())
    masses.push_back(to_fraction_string(m));
  out["masses"] = masses;
  out["terms"] = std::move(terms);
  return out;
}

}  // namespace qrf::gauss
