#pragma once

#include "qrf/canon.hpp"
#include "qrf/forms.hpp"
#include "qrf/gauss.hpp"

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

// The transformation catalog: binds the named frame transformations to
// their phase-space maps and, where a unitary exists, to their active state
// actions. The two expectation prescriptions live here:
//   passive_expect   <O>' = <psi| T^dag O T |psi>   (measured in S')
//   invariance_check residual of <psi'|O'|psi'> = <psi|O|psi> with O' = T O T^dag
namespace qrf::frames {

enum class Kind {
  Boost,
  Parity,
  CMRel,
  Relational,
  CMRelN,
  TargetRelational,
  CastroSub,
};

struct BoostParams {
  double velocity = 0.0;
  double time = 0.0;
  double mass = 1.0;
};

class FrameTransform {
 public:
  // T = T_G^dag specialization: produces <X>' = <X> - v t.
  static FrameTransform boost(double velocity, double time, double mass);
  static FrameTransform parity(std::size_t n_particles = 1,
                               std::size_t particle = 0);
  static FrameTransform cm_rel(const Rational& m0, const Rational& m1);
  static FrameTransform relational(const Rational& m0, const Rational& m1);
  static FrameTransform cm_rel_n(const canon::MassList& masses);
  static FrameTransform target_relational(
      const canon::MassList& masses,
      canon::FrameCompletion completion = canon::FrameCompletion::TotalMomentum);
  static FrameTransform castro(const canon::MassList& masses);

  Kind kind() const { return kind_; }
  const canon::MassList& masses() const { return masses_; }
  const canon::LinearPhaseMap& phase_map() const { return phase_map_; }
  bool has_active_action() const { return has_active_action_; }
  const std::optional<BoostParams>& boost_params() const { return boost_; }
  canon::FrameCompletion completion() const { return completion_; }
  std::string name() const;

 private:
  FrameTransform(Kind kind, canon::MassList masses,
                 canon::LinearPhaseMap phase_map, bool has_active_action);

  Kind kind_;
  canon::MassList masses_;
  canon::LinearPhaseMap phase_map_;
  bool has_active_action_;
  std::optional<BoostParams> boost_;
  canon::FrameCompletion completion_ = canon::FrameCompletion::TotalMomentum;
};

// Raised when an active state action is requested from a transform that has
// none; carries the exact commutator deviation witnessing why.
class NoUnitaryError : public std::runtime_error {
 public:
  NoUnitaryError(const std::string& message, canon::NogoCertificate cert)
      : std::runtime_error(message), certificate(std::move(cert)) {}
  canon::NogoCertificate certificate;
};

using Observable = std::variant<QuadraticForm, ShiftSpec>;

// Conjugates the observable through the phase map and evaluates it on the
// untransformed state. Works for every catalog entry, including
// TargetRelational (the prescription needs only the variable substitution).
std::complex<double> passive_expect(const FrameTransform& transform,
                                    const Observable& observable,
                                    const gauss::GaussState& state);

// T|psi>. Throws NoUnitaryError for TargetRelational and CastroSub.
gauss::GaussState active_state(const FrameTransform& transform,
                               const gauss::GaussState& state);

// | <psi'|O'|psi'> - <psi|O|psi> | with O' = T O T^dag realized by the
// inverse phase map; zero for every unitary catalog entry.
double invariance_check(const FrameTransform& transform,
                        const QuadraticForm& observable,
                        const gauss::GaussState& state);

}  // namespace qrf::frames
