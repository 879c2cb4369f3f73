#pragma once

#include "qrf/canon.hpp"
#include "qrf/forms.hpp"

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include <complex>
#include <cstddef>
#include <vector>

// Analytic state backend: finite superpositions of multivariate Gaussian
// amplitude terms. A term with diagonal quadratic part and width sigma per
// axis is the standard packet amplitude
//     (2 pi sigma^2)^{-1/4} exp(-(z-c)^2 / (4 sigma^2)) exp(i k z);
// linear coordinate substitutions produce correlated quadratic forms, so a
// term carries a full symmetric positive-definite matrix internally. The
// public constructors only build diagonal packets.
//
// Shift-operator convention, pinned project-wide: exp(-i L P / hbar) acts as
// psi(u) -> psi(u + L). With the textbook P = -i hbar d/du the same symbol
// would act as psi(u - L) and flip the sign of the modular phase; the pinned
// choice reproduces the reference value exp(+i phi)/2 for the decay state.
namespace qrf::gauss {

struct GaussTerm {
  std::complex<double> coeff{1.0, 0.0};
  Eigen::VectorXd center;   // c, length n
  Eigen::MatrixXd quad;     // A, n x n real symmetric positive definite
  Eigen::VectorXd wavevec;  // k, length n

  // value(z) = coeff * exp(-(z-c)^T A (z-c)/2 + i k.(z-c))
  std::complex<double> value(const Eigen::VectorXd& z) const;

  // Unit-norm diagonal packet; coeff absorbs the normalization and the
  // e^{i k c} phase so the value equals the plane-wave form e^{i k z}.
  static GaussTerm packet(const Eigen::VectorXd& center,
                          const Eigen::VectorXd& widths,
                          const Eigen::VectorXd& wavevec);
};

class GaussState {
 public:
  GaussState(std::vector<GaussTerm> terms, canon::MassList masses,
             double hbar = 1.0);

  std::size_t dim() const { return dim_; }
  const std::vector<GaussTerm>& terms() const { return terms_; }
  const canon::MassList& masses() const { return masses_; }
  double hbar() const { return hbar_; }

  std::complex<double> value(const Eigen::VectorXd& z) const;

 private:
  std::size_t dim_;
  std::vector<GaussTerm> terms_;
  canon::MassList masses_;
  double hbar_;
};

// Single-particle unit-norm packet. sigma must be strictly positive.
GaussState make_packet(double center, double sigma, double wavevector,
                       Rational mass = Rational(1), double hbar = 1.0);

// Product state; requires matching hbar. Term lists multiply pairwise.
GaussState tensor(const GaussState& a, const GaussState& b);

// Two-branch decay superposition
//   (|x>_0 |-d+x>_1 + e^{i phi} |-x>_0 |d-x>_1) / sqrt(2),
// with x = d m1/(m0+m1) so the center of mass sits at the origin. Packets
// carry widths sigma0, sigma1 and zero wavevectors.
GaussState decay_state(double d, double phi, const Rational& m0,
                       const Rational& m1, double sigma0, double sigma1,
                       double hbar = 1.0);

// <a|b>; closed-form Gaussian overlap, sesquilinear in (a, b).
std::complex<double> inner_product(const GaussState& a, const GaussState& b);

double norm(const GaussState& state);
GaussState normalized(const GaussState& state);

// psi'(z) = psi(S^{-1} z) for a map whose position rows form an invertible
// matrix S over positions only, whose momentum rows equal S^{-T} over
// momenta only, and whose translation vanishes. Requires |det S| = 1
// (checked exactly in rational arithmetic); throws otherwise.
GaussState apply_point_map(const GaussState& state,
                           const canon::LinearPhaseMap& map);

// psi'(z) = psi(z + shift).
GaussState shifted_arguments(const GaussState& state,
                             const Eigen::VectorXd& shift);

// psi'(z) = e^{i q.z} psi(z).
GaussState modulated(const GaussState& state, const Eigen::VectorXd& q);

GaussState scaled(const GaussState& state, std::complex<double> factor);

// Tr[f(R) rho] for the normalized pure state, with Weyl ordering applied to
// the quadratic cross terms.
std::complex<double> expect_quadratic(const GaussState& state,
                                      const QuadraticForm& form);

// Expectation of the ordered operator product L1 * L2 of two affine-linear
// forms (no symmetrization). Used to pin the Weyl ordering constant.
std::complex<double> expect_ordered_product(const GaussState& state,
                                            const QuadraticForm& lin1,
                                            const QuadraticForm& lin2);

// <psi| exp(-i L P_dof / hbar) |psi> / <psi|psi> under the pinned
// convention psi(u) -> psi(u + L).
std::complex<double> expect_shift(const GaussState& state, std::size_t dof,
                                  double displacement);

// Same for a simultaneous displacement along several axes.
std::complex<double> expect_shift_along(const GaussState& state,
                                        const Eigen::VectorXd& displacement);

// Pointwise check of the relational factorization
//   psi(-u, v-u) = sqrtG_{-a,sigma_S}(u) sqrtG_{b-a,sigma_1}(v) Gamma(u,v),
//   Gamma(u,v) = exp[(u+a)(v-b+a)/(2 sigma_1^2)],
// for psi(u,v) = sqrtG_{a,sigma_0}(u) sqrtG_{b,sigma_1}(v). A single overall
// normalization constant between the two sides is fitted first (the identity
// holds with proportional amplitude conventions); the worst relative
// discrepancy after the fit is returned.
struct GammaCheckResult {
  double max_rel_error = 0.0;
  double fitted_constant = 0.0;
  double sigma_s = 0.0;
  std::vector<double> log_ratios;  // per sample, before the constant fit
};

GammaCheckResult gamma_factorization_check(
    double a, double b, double sigma0, double sigma1,
    const std::vector<std::pair<double, double>>& samples);

// Axis-aligned region containing every term center plus n_sigma spreads.
struct BoundingBox {
  std::vector<double> lo;
  std::vector<double> hi;
};
BoundingBox bounding_box(const GaussState& state, double n_sigma);

nlohmann::json state_to_json(const GaussState& state);

}  // namespace qrf::gauss
