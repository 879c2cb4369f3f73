#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qrf/gauss.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace qrf;
using namespace qrf::gauss;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Independent quadrature oracles. These integrate the sampled wavefunction
// directly (Riemann sums, central differences for momentum) and never touch
// the closed-form overlap machinery they are used to check.
// ---------------------------------------------------------------------------

struct Quad1D {
  double lo, hi;
  std::size_t n;
  double step() const { return (hi - lo) / static_cast<double>(n); }
  double point(std::size_t i) const { return lo + (i + 0.5) * step(); }
};

Quad1D oracle_box(const GaussState& state, std::size_t dof,
                  std::size_t n = 6000) {
  const auto box = bounding_box(state, 10.0);
  return Quad1D{box.lo[dof], box.hi[dof], n};
}

std::vector<cplx> sample_line(const GaussState& state, const Quad1D& q) {
  std::vector<cplx> psi(q.n);
  Eigen::VectorXd z(1);
  for (std::size_t i = 0; i < q.n; ++i) {
    z(0) = q.point(i);
    psi[i] = state.value(z);
  }
  return psi;
}

cplx quad_inner_1d(const GaussState& a, const GaussState& b) {
  Quad1D q = oracle_box(a, 0);
  const auto boxb = bounding_box(b, 10.0);
  q.lo = std::min(q.lo, boxb.lo[0]);
  q.hi = std::max(q.hi, boxb.hi[0]);
  const auto psi_a = sample_line(a, q);
  const auto psi_b = sample_line(b, q);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < q.n; ++i) acc += std::conj(psi_a[i]) * psi_b[i];
  return acc * q.step();
}

double quad_position_moment(const GaussState& state, int power) {
  const Quad1D q = oracle_box(state, 0);
  const auto psi = sample_line(state, q);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < q.n; ++i) {
    const double w = std::norm(psi[i]);
    num += std::pow(q.point(i), power) * w;
    den += w;
  }
  return num / den;
}

cplx quad_momentum_moment(const GaussState& state, int power) {
  const Quad1D q = oracle_box(state, 0);
  const auto psi = sample_line(state, q);
  const double h = q.step();
  const double hbar = state.hbar();
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t i = 1; i + 1 < q.n; ++i) {
    den += std::norm(psi[i]);
    if (power == 1) {
      const cplx dpsi = (psi[i + 1] - psi[i - 1]) / (2.0 * h);
      num += std::conj(psi[i]) * cplx(0.0, -hbar) * dpsi;
    } else {
      const cplx d2psi = (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) / (h * h);
      num += std::conj(psi[i]) * (-hbar * hbar) * d2psi;
    }
  }
  return num / den;
}

cplx quad_shift_1d(const GaussState& state, double displacement) {
  const Quad1D q = oracle_box(state, 0);
  const auto psi = sample_line(state, q);
  Eigen::VectorXd z(1);
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < q.n; ++i) {
    z(0) = q.point(i) + displacement;
    num += std::conj(psi[i]) * state.value(z);
    den += std::norm(psi[i]);
  }
  return num / den;
}

GaussState two_packet_superposition(double a, double b, double sigma,
                                    double phi) {
  Eigen::VectorXd ca(1), cb(1), s(1), k(1);
  ca << a;
  cb << b;
  s << sigma;
  k << 0.0;
  GaussTerm ta = GaussTerm::packet(ca, s, k);
  GaussTerm tb = GaussTerm::packet(cb, s, k);
  const double inv = 1.0 / std::sqrt(2.0);
  ta.coeff *= inv;
  tb.coeff *= inv * std::exp(cplx(0.0, phi));
  return GaussState({ta, tb}, canon::MassList({Rational(1)}), 1.0);
}

GaussState random_state(std::mt19937_64& rng, std::size_t dim,
                        std::size_t n_terms) {
  std::uniform_real_distribution<double> center(-1.5, 1.5);
  std::uniform_real_distribution<double> width(0.4, 1.3);
  std::uniform_real_distribution<double> wave(-1.5, 1.5);
  std::uniform_real_distribution<double> re(-1.0, 1.0);
  std::vector<GaussTerm> terms;
  for (std::size_t t = 0; t < n_terms; ++t) {
    Eigen::VectorXd c(dim), s(dim), k(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      c(d) = center(rng);
      s(d) = width(rng);
      k(d) = wave(rng);
    }
    GaussTerm term = GaussTerm::packet(c, s, k);
    term.coeff *= cplx(re(rng), re(rng));
    terms.push_back(term);
  }
  std::vector<Rational> masses(dim, Rational(1));
  std::uniform_int_distribution<int> mnum(1, 8);
  for (auto& m : masses) m = Rational(mnum(rng), 1 + mnum(rng) % 4);
  GaussState state(terms, canon::MassList(masses), 1.0);
  return normalized(state);
}

QuadraticForm random_form(std::mt19937_64& rng, std::size_t n_modes) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  QuadraticForm f = QuadraticForm::zero(n_modes);
  for (Eigen::Index i = 0; i < f.linear.size(); ++i) {
    f.linear(i) = coef(rng);
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = coef(rng);
      f.quad(i, j) = v;
      f.quad(j, i) = v;
    }
  }
  f.constant = coef(rng);
  return f;
}

}  // namespace

TEST_CASE("packet normalization and moments") {
  const GaussState g = make_packet(0.0, 1.0, 0.0);
  CHECK(norm(g) == doctest::Approx(1.0).epsilon(1e-12));

  const GaussState g2 = make_packet(1.7, 0.8, 0.0);
  CHECK(expect_quadratic(g2, QuadraticForm::position(1, 0)).real() ==
        doctest::Approx(1.7).epsilon(1e-12));

  const double hbar = 1.0, k0 = 1.3;
  const GaussState g3 = make_packet(0.4, 0.7, k0);
  const cplx p = expect_quadratic(g3, QuadraticForm::momentum(1, 0));
  CHECK(p.real() == doctest::Approx(hbar * k0).epsilon(1e-12));
  CHECK(p.imag() == doctest::Approx(0.0).epsilon(1e-12));
  // cross-check against the finite-difference oracle
  CHECK(quad_momentum_moment(g3, 1).real() ==
        doctest::Approx(hbar * k0).epsilon(1e-5));
  CHECK(quad_position_moment(g3, 1) == doctest::Approx(0.4).epsilon(1e-8));

  CHECK_THROWS_AS(make_packet(0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_packet(0.0, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("packet second moments") {
  const double a = 0.6, sigma = 0.9, k0 = -0.8;
  const GaussState g = make_packet(a, sigma, k0);

  auto x = QuadraticForm::position(1, 0);
  auto p = QuadraticForm::momentum(1, 0);
  const cplx x2 = expect_quadratic(g, QuadraticForm::weyl_product(x, x));
  CHECK(x2.real() == doctest::Approx(sigma * sigma + a * a).epsilon(1e-12));

  const cplx p2 = expect_quadratic(g, QuadraticForm::weyl_product(p, p));
  const double expected_p2 = k0 * k0 + 1.0 / (4.0 * sigma * sigma);
  CHECK(p2.real() == doctest::Approx(expected_p2).epsilon(1e-12));
  CHECK(quad_momentum_moment(g, 2).real() ==
        doctest::Approx(expected_p2).epsilon(1e-4));

  const cplx xp = expect_quadratic(g, QuadraticForm::weyl_product(x, p));
  CHECK(xp.real() == doctest::Approx(k0 * a).epsilon(1e-12));
  CHECK(xp.imag() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("packet value matches the plane-wave amplitude") {
  const double a = 0.3, sigma = 0.75, k0 = 1.1;
  const GaussState g = make_packet(a, sigma, k0);
  Eigen::VectorXd z(1);
  for (double zv : {-1.0, 0.0, 0.4, 2.3}) {
    z(0) = zv;
    const cplx expected =
        std::pow(2.0 * kPi * sigma * sigma, -0.25) *
        std::exp(-(zv - a) * (zv - a) / (4.0 * sigma * sigma)) *
        std::exp(cplx(0.0, k0 * zv));
    CHECK(std::abs(g.value(z) - expected) < 1e-14);
  }
}

TEST_CASE("tensor products") {
  const GaussState a = make_packet(0.5, 1.0, 0.0);
  const GaussState b = make_packet(-1.5, 0.7, 0.0);
  const GaussState ab = tensor(a, b);
  CHECK(ab.dim() == 2);
  CHECK(norm(ab) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expect_quadratic(ab, QuadraticForm::position(2, 0)).real() ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(expect_quadratic(ab, QuadraticForm::position(2, 1)).real() ==
        doctest::Approx(-1.5).epsilon(1e-12));

  const GaussState s1 = two_packet_superposition(-1.0, 1.0, 0.5, 0.0);
  const GaussState s2 = two_packet_superposition(-2.0, 2.0, 0.5, 1.0);
  CHECK(tensor(s1, s2).terms().size() == 4);

  const GaussState other_hbar = make_packet(0.0, 1.0, 0.0, Rational(1), 2.0);
  CHECK_THROWS_AS(tensor(a, other_hbar), std::invalid_argument);
}

TEST_CASE("decay state geometry") {
  const double d = 4.0;
  const GaussState psi =
      decay_state(d, kPi / 3.0, Rational(1), Rational(1), 0.1, 0.1);
  REQUIRE(psi.terms().size() == 2);
  CHECK(psi.terms()[0].center(0) == doctest::Approx(d / 2));
  CHECK(psi.terms()[0].center(1) == doctest::Approx(-d / 2));
  CHECK(psi.terms()[1].center(0) == doctest::Approx(-d / 2));
  CHECK(psi.terms()[1].center(1) == doctest::Approx(d / 2));

  // <X1 - X0> = 0 and <(m0 X0 + m1 X1)/M> = 0
  QuadraticForm rel = QuadraticForm::position(2, 1) -
                      QuadraticForm::position(2, 0);
  CHECK(std::abs(expect_quadratic(psi, rel)) < 1e-12);
  QuadraticForm cm =
      QuadraticForm::position(2, 0).scaled(0.5) +
      QuadraticForm::position(2, 1).scaled(0.5);
  CHECK(std::abs(expect_quadratic(psi, cm)) < 1e-12);

  // unequal masses: x = d m1 / M
  const GaussState psi2 =
      decay_state(d, 0.0, Rational(1), Rational(3), 0.1, 0.1);
  CHECK(psi2.terms()[0].center(0) == doctest::Approx(3.0));
  CHECK(psi2.terms()[0].center(1) == doctest::Approx(-1.0));

  CHECK_THROWS_AS(decay_state(-1.0, 0.0, Rational(1), Rational(1), 0.1, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(decay_state(1.0, 0.0, Rational(1), Rational(1), -0.1, 0.1),
                  std::invalid_argument);
}

TEST_CASE("inner products") {
  const GaussState g = make_packet(0.0, 1.0, 0.0);
  CHECK(std::abs(inner_product(g, g) - cplx(1.0)) < 1e-13);

  // two unit packets separated by s with common width: overlap e^{-s^2/8s^2}
  for (double s : {0.5, 1.0, 3.0}) {
    const double sigma = 0.8;
    const GaussState a = make_packet(0.0, sigma, 0.0);
    const GaussState b = make_packet(s, sigma, 0.0);
    const double expected = std::exp(-s * s / (8.0 * sigma * sigma));
    CHECK(inner_product(a, b).real() ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(inner_product(a, b) - quad_inner_1d(a, b)) < 1e-9);
  }

  // orthogonality limit
  CHECK(std::abs(inner_product(make_packet(0.0, 0.3, 0.0),
                               make_packet(30.0, 0.3, 0.0))) < 1e-100);

  // conjugate symmetry on random states
  std::mt19937_64 rng(3);
  for (int round = 0; round < 10; ++round) {
    const GaussState a = random_state(rng, 1, 2);
    const GaussState b = random_state(rng, 1, 2);
    const cplx ab = inner_product(a, b);
    const cplx ba = inner_product(b, a);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-12);
    CHECK(std::abs(ab - quad_inner_1d(a, b)) < 1e-7);
  }

  CHECK_THROWS_AS(inner_product(g, tensor(g, g)), std::invalid_argument);
}

TEST_CASE("point maps move packet centers like position eigenstates") {
  const double a = 0.9, b = -0.4;
  const Rational m0(1), m1(3);
  const GaussState prod = tensor(make_packet(a, 0.2, 0.0, m0),
                                 make_packet(b, 0.3, 0.0, m1));

  const GaussState cmr = apply_point_map(prod, canon::map_cm_r(m0, m1));
  const double expected_cm = (1.0 * a + 3.0 * b) / 4.0;
  CHECK(cmr.terms()[0].center(0) == doctest::Approx(expected_cm));
  CHECK(cmr.terms()[0].center(1) == doctest::Approx(b - a));
  CHECK(norm(cmr) == doctest::Approx(norm(prod)).epsilon(1e-12));

  const GaussState rel = apply_point_map(prod, canon::map_R(m0, m1));
  CHECK(rel.terms()[0].center(0) == doctest::Approx(-a));
  CHECK(rel.terms()[0].center(1) == doctest::Approx(b - a));
  CHECK(norm(rel) == doctest::Approx(norm(prod)).epsilon(1e-12));
}

TEST_CASE("point maps are unitary on random states") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 12; ++round) {
    const GaussState psi = random_state(rng, 2, 2);
    const GaussState chi = random_state(rng, 2, 2);
    for (const auto& map :
         {canon::map_cm_r(Rational(1), Rational(2)),
          canon::map_R(Rational(1), Rational(1)), canon::parity_map(2)}) {
      const cplx before = inner_product(psi, chi);
      const cplx after =
          inner_product(apply_point_map(psi, map), apply_point_map(chi, map));
      CHECK(std::abs(before - after) < 1e-12);
    }
  }
}

TEST_CASE("point map validation") {
  // |det S| != 1 must be rejected even though the map is canonical.
  canon::LinearPhaseMap squeeze = canon::LinearPhaseMap::identity(1);
  squeeze.matrix.at(0, 0) = Rational(2);
  squeeze.matrix.at(1, 1) = Rational(1, 2);
  const GaussState g = make_packet(0.0, 1.0, 0.0);
  CHECK(canon::is_canonical(squeeze));
  CHECK_THROWS_AS(apply_point_map(g, squeeze), std::invalid_argument);

  // translations are not point substitutions
  CHECK_THROWS_AS(apply_point_map(g, canon::boost_map(1.0, 1.0, 1.0)),
                  std::invalid_argument);

  // maps mixing X and P are rejected
  canon::LinearPhaseMap mix = canon::LinearPhaseMap::identity(1);
  mix.matrix.at(0, 1) = Rational(1);
  CHECK_THROWS_AS(apply_point_map(g, mix), std::invalid_argument);
}

TEST_CASE("parity involution and single-particle relational map") {
  const GaussState g = make_packet(1.2, 0.5, 0.7);
  const auto parity = canon::parity_map(1);
  const GaussState flipped = apply_point_map(g, parity);
  CHECK(flipped.terms()[0].center(0) == doctest::Approx(-1.2));
  const GaussState twice = apply_point_map(flipped, parity);
  CHECK(std::abs(inner_product(g, twice) - inner_product(g, g)) < 1e-13);
  Eigen::VectorXd z(1);
  z << 0.37;
  CHECK(std::abs(g.value(z) - twice.value(z)) < 1e-13);
}

TEST_CASE("boosted frame expectation via the affine map") {
  const double x = 2.0, v = 1.0, t = 3.0;
  const GaussState g = make_packet(x, 1.0, 0.0);
  const auto boosted_x = conjugate_through(QuadraticForm::position(1, 0),
                                           canon::boost_map(v, t, 1.0));
  CHECK(expect_quadratic(g, boosted_x).real() ==
        doctest::Approx(x - v * t).epsilon(1e-12));
}

TEST_CASE("relative coordinate of the decay state vanishes") {
  const GaussState psi =
      decay_state(4.0, 1.0, Rational(1), Rational(2), 0.1, 0.1);
  // X1' expressed through the map equals X1 - X0.
  const auto map = canon::map_cm_r(Rational(1), Rational(2));
  const auto x1p = row_form(map, canon::position_slot(1));
  CHECK(std::abs(expect_quadratic(psi, x1p)) < 1e-12);
  // and the same through the relational map
  const auto x1p_rel =
      row_form(canon::map_R(Rational(1), Rational(2)), canon::position_slot(1));
  CHECK(std::abs(expect_quadratic(psi, x1p_rel)) < 1e-12);
}

TEST_CASE("symmetrized action identity pins the Weyl ordering constant") {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 20; ++round) {
    std::uniform_int_distribution<int> mnum(1, 9);
    const canon::MassList masses(
        {Rational(mnum(rng)), Rational(mnum(rng)), Rational(mnum(rng))});
    const auto target = canon::target_relational_map(masses);
    const auto x1p = row_form(target, canon::position_slot(1));
    const auto p2p = row_form(target, canon::momentum_slot(2));

    const GaussState psi = random_state(rng, 3, 2);
    const cplx weyl =
        expect_quadratic(psi, QuadraticForm::weyl_product(x1p, p2p));
    const double m0 = to_double(masses.mass(0));
    const double m2 = to_double(masses.mass(2));
    const cplx ordered = expect_ordered_product(psi, x1p, p2p) -
                         cplx(0.0, psi.hbar() * m2 / (2.0 * (m2 + m0)));
    CHECK(std::abs(weyl - ordered) < 1e-9);
  }
}

TEST_CASE("ordered products see the canonical commutator") {
  std::mt19937_64 rng(31);
  const GaussState psi = random_state(rng, 1, 3);
  const auto x = QuadraticForm::position(1, 0);
  const auto p = QuadraticForm::momentum(1, 0);
  const cplx xp = expect_ordered_product(psi, x, p);
  const cplx px = expect_ordered_product(psi, p, x);
  CHECK(std::abs(xp - px - cplx(0.0, psi.hbar())) < 1e-12);
  const cplx weyl = expect_quadratic(psi, QuadraticForm::weyl_product(x, p));
  CHECK(std::abs(0.5 * (xp + px) - weyl) < 1e-12);
}

TEST_CASE("moment engine agrees with quadrature on random states") {
  std::mt19937_64 rng(37);
  for (int round = 0; round < 8; ++round) {
    const GaussState psi = random_state(rng, 1, 2);
    const auto x = QuadraticForm::position(1, 0);
    const auto p = QuadraticForm::momentum(1, 0);
    CHECK(expect_quadratic(psi, x).real() ==
          doctest::Approx(quad_position_moment(psi, 1)).epsilon(1e-6));
    CHECK(expect_quadratic(psi, QuadraticForm::weyl_product(x, x)).real() ==
          doctest::Approx(quad_position_moment(psi, 2)).epsilon(1e-6));
    CHECK(expect_quadratic(psi, p).real() ==
          doctest::Approx(quad_momentum_moment(psi, 1).real())
              .epsilon(2e-4));
  }
}

TEST_CASE("shift expectation: identity, composition, and the paradox value") {
  const GaussState g = make_packet(0.0, 1.0, 0.4);
  CHECK(std::abs(expect_shift(g, 0, 0.0) - cplx(1.0)) < 1e-13);
  CHECK_THROWS_AS(expect_shift(g, 3, 1.0), std::invalid_argument);

  // operator-level composition: two shifts equal the combined shift
  Eigen::VectorXd e(1);
  e << 1.0;
  const GaussState s1 = shifted_arguments(g, 0.7 * e);
  const GaussState s12 = shifted_arguments(s1, 0.5 * e);
  const GaussState s_combined = shifted_arguments(g, 1.2 * e);
  CHECK(std::abs(inner_product(g, s12) - inner_product(g, s_combined)) <
        1e-13);

  // modular-momentum expectation of the transformed decay state
  const double d = 4.0, phi = kPi / 3.0, sigma = 0.1;
  const GaussState psi =
      decay_state(d, phi, Rational(1), Rational(1), sigma, sigma);
  const GaussState cmr =
      apply_point_map(psi, canon::map_cm_r(Rational(1), Rational(1)));
  const cplx shift_cmr = expect_shift(cmr, 1, 2.0 * d);
  CHECK(std::abs(shift_cmr) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::arg(shift_cmr) == doctest::Approx(phi).epsilon(1e-10));

  const GaussState rel =
      apply_point_map(psi, canon::map_R(Rational(1), Rational(1)));
  CHECK(std::abs(expect_shift(rel, 1, 2.0 * d)) < 1e-3);

  // quadrature oracle on a 1-D two-packet superposition
  const GaussState chi = two_packet_superposition(-2.0, 2.0, 0.25, 0.9);
  const cplx closed = expect_shift(chi, 0, 4.0);
  const cplx quad = quad_shift_1d(chi, 4.0);
  CHECK(std::abs(closed - quad) < 1e-8);
  CHECK(std::abs(closed) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::arg(closed) == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("gamma factorization identity") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> par(-1.5, 1.5);
  std::uniform_real_distribution<double> width(0.3, 1.6);
  for (int round = 0; round < 20; ++round) {
    const double a = par(rng), b = par(rng);
    const double s0 = width(rng), s1 = width(rng);
    const double ss = s0 * s1 / std::sqrt(s0 * s0 + s1 * s1);
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 41; ++i)
      for (int j = 0; j < 41; ++j) {
        const double u = -a + (i - 20) / 20.0 * 4.0 * ss;
        const double v = (b - a) + (j - 20) / 20.0 * 4.0 * s1;
        samples.emplace_back(u, v);
      }
    const auto result = gamma_factorization_check(a, b, s0, s1, samples);
    CHECK(result.max_rel_error <= 1e-12);
    CHECK(result.sigma_s ==
          doctest::Approx(s0 * s1 / std::sqrt(s0 * s0 + s1 * s1)));
  }

  // at u = -a the crossing term is 1 for any v
  const double a = 0.8, b = -0.3, s1 = 0.9;
  for (double v : {-2.0, 0.0, 1.3})
    CHECK(std::exp((-a + a) * (v - b + a) / (2.0 * s1 * s1)) ==
          doctest::Approx(1.0));

  // equal widths give sigma_S = sigma/sqrt(2)
  const auto equal =
      gamma_factorization_check(0.0, 1.0, 0.7, 0.7, {{0.0, 1.0}});
  CHECK(equal.sigma_s == doctest::Approx(0.7 / std::sqrt(2.0)).epsilon(1e-14));

  CHECK_THROWS_AS(gamma_factorization_check(0.0, 0.0, 1.0, 1.0, {}),
                  std::invalid_argument);
}

TEST_CASE("passive and active pictures agree for point maps") {
  std::mt19937_64 rng(43);
  for (int round = 0; round < 10; ++round) {
    const GaussState psi = random_state(rng, 2, 2);
    const QuadraticForm form = random_form(rng, 2);
    for (const auto& map :
         {canon::map_cm_r(Rational(2), Rational(3)),
          canon::map_R(Rational(1), Rational(1)), canon::parity_map(2)}) {
      const cplx passive = expect_quadratic(psi, conjugate_through(form, map));
      const cplx active =
          expect_quadratic(apply_point_map(psi, map), form);
      CHECK(std::abs(passive - active) < 1e-9);
    }
  }
}

TEST_CASE("state json serialization") {
  const GaussState g = make_packet(0.5, 0.8, 1.2);
  const nlohmann::json j = state_to_json(g);
  CHECK(j["dim"] == 1);
  CHECK(j["terms"].size() == 1);
  CHECK(j["terms"][0]["widths"][0].get<double>() ==
        doctest::Approx(0.8).epsilon(1e-12));
  CHECK(j["terms"][0]["center"][0].get<double>() == doctest::Approx(0.5));
  CHECK(j["masses"][0].get<std::string>() == "1/1");

  const auto mapd = apply_point_map(
      tensor(g, make_packet(0.0, 0.5, 0.0)),
      canon::map_cm_r(Rational(1), Rational(1)));
  const nlohmann::json j2 = state_to_json(mapd);
  CHECK(j2["terms"][0].contains("quad"));  // correlated term
}

TEST_CASE("bounding box covers term centers") {
  const GaussState chi = two_packet_superposition(-3.0, 3.0, 0.5, 0.0);
  const auto box = bounding_box(chi, 8.0);
  CHECK(box.lo[0] < -3.0);
  CHECK(box.hi[0] > 3.0);
  CHECK(box.lo[0] == doctest::Approx(-3.0 - 8.0 * 0.5 * std::sqrt(2.0)));
}
