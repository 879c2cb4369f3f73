#include "qrf/frames.hpp"

#include <cmath>

namespace qrf::frames {

namespace {

using cplx = std::complex<double>;

canon::MassList unit_masses(std::size_t n) {
  return canon::MassList(std::vector<Rational>(n, Rational(1)));
}

}  // namespace

FrameTransform::FrameTransform(Kind kind, canon::MassList masses,
                               canon::LinearPhaseMap phase_map,
                               bool has_active_action)
    : kind_(kind), masses_(std::move(masses)), phase_map_(std::move(phase_map)),
      has_active_action_(has_active_action) {}

FrameTransform FrameTransform::boost(double velocity, double time,
                                     double mass) {
  FrameTransform t(Kind::Boost, unit_masses(1),
                   canon::boost_map(velocity, time, mass), true);
  t.boost_ = BoostParams{velocity, time, mass};
  return t;
}

FrameTransform FrameTransform::parity(std::size_t n_particles,
                                      std::size_t particle) {
  return FrameTransform(Kind::Parity, unit_masses(n_particles),
                        canon::parity_map(n_particles, particle), true);
}

FrameTransform FrameTransform::cm_rel(const Rational& m0, const Rational& m1) {
  return FrameTransform(Kind::CMRel, canon::MassList({m0, m1}),
                        canon::map_cm_r(m0, m1), true);
}

FrameTransform FrameTransform::relational(const Rational& m0,
                                          const Rational& m1) {
  return FrameTransform(Kind::Relational, canon::MassList({m0, m1}),
                        canon::map_R(m0, m1), true);
}

FrameTransform FrameTransform::cm_rel_n(const canon::MassList& masses) {
  return FrameTransform(Kind::CMRelN, masses, canon::map_cm_r_N(masses), true);
}

FrameTransform FrameTransform::target_relational(
    const canon::MassList& masses, canon::FrameCompletion completion) {
  FrameTransform t(Kind::TargetRelational, masses,
                   canon::target_relational_map(masses, completion), false);
  t.completion_ = completion;
  return t;
}

FrameTransform FrameTransform::castro(const canon::MassList& masses) {
  return FrameTransform(Kind::CastroSub, masses, canon::map_castro(masses),
                        false);
}

std::string FrameTransform::name() const {
  switch (kind_) {
    case Kind::Boost: return "boost";
    case Kind::Parity: return "parity";
    case Kind::CMRel: return "cm-rel";
    case Kind::Relational: return "relational";
    case Kind::CMRelN: return "cm-rel-n";
    case Kind::TargetRelational: return "target-relational";
    case Kind::CastroSub: return "castro-sub";
  }
  return "unknown";
}

namespace {

cplx passive_shift(const FrameTransform& transform, const ShiftSpec& shift,
                   const gauss::GaussState& state) {
  const auto& map = transform.phase_map();
  const std::size_t slot = canon::momentum_slot(shift.dof);
  if (shift.dof >= map.dim)
    throw std::invalid_argument("shift dof out of range");

  Eigen::VectorXd displacement(state.dim());
  for (std::size_t a = 0; a < map.dim; ++a) {
    if (map.matrix.at(slot, canon::position_slot(a)) != 0)
      throw std::invalid_argument(
          "shift of a momentum row with position coefficients is not in the "
          "supported operator family");
    displacement(a) =
        shift.displacement *
        to_double(map.matrix.at(slot, canon::momentum_slot(a)));
  }
  // Pinned convention psi(u) -> psi(u+L): the generator is -P, so the
  // momentum translation tau enters with the conjugate phase e^{+i L tau}.
  const double tau = map.translation[slot];
  const cplx phase =
      std::exp(cplx(0.0, shift.displacement * tau / state.hbar()));
  return phase * gauss::expect_shift_along(state, displacement);
}

canon::NogoCertificate castro_certificate(const canon::MassList& masses) {
  canon::NogoCertificate cert;
  cert.deviation = canon::map_deviation(canon::map_castro(masses));
  cert.max_entry = cert.deviation.max_abs();
  Rational rel_max = 0;
  for (std::size_t i = 2; i < masses.size(); ++i)
    for (std::size_t j = 2; j < masses.size(); ++j)
      for (std::size_t a : {canon::position_slot(i), canon::momentum_slot(i)})
        for (std::size_t b :
             {canon::position_slot(j), canon::momentum_slot(j)}) {
          Rational v = cert.deviation.at(a, b);
          if (v < 0) v = -v;
          if (v > rel_max) rel_max = v;
        }
  cert.relative_block_max = rel_max;
  cert.relative_block_canonical = (rel_max == 0);
  return cert;
}

}  // namespace

cplx passive_expect(const FrameTransform& transform,
                    const Observable& observable,
                    const gauss::GaussState& state) {
  if (state.dim() != transform.phase_map().dim)
    throw std::invalid_argument("state dimension does not match transform");
  if (const auto* form = std::get_if<QuadraticForm>(&observable))
    return gauss::expect_quadratic(
        state, conjugate_through(*form, transform.phase_map()));
  return passive_shift(transform, std::get<ShiftSpec>(observable), state);
}

gauss::GaussState active_state(const FrameTransform& transform,
                               const gauss::GaussState& state) {
  if (state.dim() != transform.phase_map().dim)
    throw std::invalid_argument("state dimension does not match transform");
  if (!transform.has_active_action()) {
    if (transform.kind() == Kind::TargetRelational)
      throw NoUnitaryError(
          "no unitary yields the fully relational variable set; the relative "
          "block of M Omega M^T deviates from Omega",
          canon::nogo_certificate(transform.masses(), transform.completion()));
    throw NoUnitaryError(
        "the subsystem reference map has no catalogued active action; its "
        "full commutator table deviates from Omega",
        castro_certificate(transform.masses()));
  }

  if (transform.kind() == Kind::Boost) {
    const BoostParams& b = *transform.boost_params();
    Eigen::VectorXd shift(1), modulation(1);
    shift << b.velocity * b.time;
    modulation << -b.mass * b.velocity / state.hbar();
    const double global =
        -b.mass * b.velocity * b.velocity * b.time / (2.0 * state.hbar());
    return gauss::scaled(
        gauss::modulated(gauss::shifted_arguments(state, shift), modulation),
        std::exp(cplx(0.0, global)));
  }
  return gauss::apply_point_map(state, transform.phase_map());
}

double invariance_check(const FrameTransform& transform,
                        const QuadraticForm& observable,
                        const gauss::GaussState& state) {
  const cplx plain = gauss::expect_quadratic(state, observable);
  const gauss::GaussState transformed = active_state(transform, state);
  const QuadraticForm primed =
      conjugate_through(observable, transform.phase_map().inverse());
  const cplx sandwiched = gauss::expect_quadratic(transformed, primed);
  return std::abs(sandwiched - plain);
}

}  // namespace qrf::frames
