#pragma once

#include "qrf/ratmatrix.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <vector>

// Exact phase-space algebra for linear canonical transformations.
//
// Variable ordering convention (fixed throughout the project): the 2N phase
// variables of an N-particle system are listed as
//     (X_0, P_0, X_1, P_1, ..., X_{N-1}, P_{N-1}),
// so particle i occupies slots 2i (position) and 2i+1 (momentum).
// Commutator tables store the coefficient of i*hbar: entry C[a][b] means
// [A_a', A_b'] = i*hbar*C[a][b].
namespace qrf::canon {

enum class VarKind { Position, Momentum };

struct PhaseIndex {
  std::size_t particle = 0;
  VarKind kind = VarKind::Position;
};

inline std::size_t phase_slot(const PhaseIndex& idx) {
  return 2 * idx.particle + (idx.kind == VarKind::Momentum ? 1 : 0);
}
inline std::size_t position_slot(std::size_t particle) { return 2 * particle; }
inline std::size_t momentum_slot(std::size_t particle) {
  return 2 * particle + 1;
}

// Ordered list of strictly positive particle masses.
class MassList {
 public:
  explicit MassList(std::vector<Rational> masses);

  std::size_t size() const { return masses_.size(); }
  const Rational& mass(std::size_t i) const { return masses_.at(i); }
  const std::vector<Rational>& masses() const { return masses_; }

  Rational total() const;
  // m_i / M
  Rational fraction(std::size_t i) const;
  // mu_ij = m_i m_j / (m_i + m_j)
  Rational reduced(std::size_t i, std::size_t j) const;

 private:
  std::vector<Rational> masses_;
};

// Affine linear map on the 2N canonical variables: primed variable a equals
// sum_b matrix[a][b] * A_b + translation[a]. The matrix is exact; the
// translation (used only by the Galilean boost) is real-valued and never
// enters bracket computations.
struct LinearPhaseMap {
  std::size_t dim = 0;  // number of particles N
  RatMatrix matrix;     // 2N x 2N
  std::vector<double> translation;  // length 2N

  std::size_t size() const { return 2 * dim; }

  static LinearPhaseMap identity(std::size_t n_particles);
  LinearPhaseMap inverse() const;
};

// compose(outer, inner): apply `inner` first; the result expresses the outer
// primed variables over the original ones, matrix = M_outer * M_inner.
LinearPhaseMap compose(const LinearPhaseMap& outer,
                       const LinearPhaseMap& inner);

// Antisymmetric table C with [A_a', A_b'] = i*hbar*C[a][b].
struct CommutatorTable {
  RatMatrix entries;
  std::size_t size() const { return entries.rows(); }
  bool operator==(const CommutatorTable& rhs) const = default;
};

// The canonical form: [X_i, P_j] = i*hbar*delta_ij. Rejects n_particles = 0.
CommutatorTable symplectic_form(std::size_t n_particles);

// C = M * Omega * M^T in exact rational arithmetic (translations ignored).
CommutatorTable commutator_table(const LinearPhaseMap& map);

// True iff commutator_table(map) equals the symplectic form exactly.
bool is_canonical(const LinearPhaseMap& map);

// Full deviation table M*Omega*M^T - Omega.
RatMatrix map_deviation(const LinearPhaseMap& map);

// Two-particle center-of-mass / relative transformation:
//   X0' = (m0 X0 + m1 X1)/M,  P0' = P0 + P1,
//   X1' = X1 - X0,            P1' = mu01 (P1/m1 - P0/m0).
LinearPhaseMap map_cm_r(const Rational& m0, const Rational& m1);

// Two-particle relational transformation (parity composed with a relative
// shift); masses are accepted for interface uniformity but unused:
//   X0' = -X0,  P0' = -(P0 + P1),  X1' = X1 - X0,  P1' = P1.
LinearPhaseMap map_R(const Rational& m0, const Rational& m1);

// N-particle center-of-mass / relative generalization:
//   X0' = sum_k (m_k/M) X_k,  P0' = sum_k P_k,
//   Xi' = X_i - X_0,          Pi' = P_i - (m_i/M) sum_k P_k.
LinearPhaseMap map_cm_r_N(const MassList& masses);

// Completion of the 0-slot of the target relational variable set. The
// relative block (particles >= 1) is the same for both; see the no-go
// certificate for why only that block matters.
enum class FrameCompletion { TotalMomentum, NegativeP0 };

// The hypothesized fully relational variable set:
//   X0' = -X0,  P0' = -(sum_k P_k) or -P0 depending on the completion,
//   Xi' = X_i - X_0,  Pi' = mu_i0 (P_i/m_i - P_0/m_0).
// This map is a hypothesis to be tested, not asserted canonical.
LinearPhaseMap target_relational_map(
    const MassList& masses,
    FrameCompletion completion = FrameCompletion::TotalMomentum);

// Subsystem variables with particle 0 as position reference and particle 1
// as momentum reference (relabeled from the referenced construction's
// 1-based particles 1 and 2): for k >= 2,
//   Xk' = X_k - X_0,  Pk' = P_k - (m_k/m_1) P_1,
// and identity rows for the two reference particles. Requires N >= 3.
LinearPhaseMap map_castro(const MassList& masses);

// Two-body CM/relative map acting on the particle pair (0, j) with identity
// rows elsewhere; used to build single-particle relative reduced states.
LinearPhaseMap pair_cm_r_map(const MassList& masses, std::size_t j);

// Parity of one particle: X_p' = -X_p, P_p' = -P_p, identity elsewhere.
LinearPhaseMap parity_map(std::size_t n_particles, std::size_t particle = 0);

// Galilean boost in passive form for a single particle of mass m: identity
// matrix with translation (-v*t, -m*v).
LinearPhaseMap boost_map(double velocity, double time, double mass);

// Witness that the target relational variable set cannot come from a
// unitary. `deviation` is the full table M*Omega*M^T - Omega; the verdict
// that matters for the no-go statement is the relative block (slots of
// particles >= 1), whose off-diagonal entries equal m_j/(m_j + m_0) exactly.
// The cross block involving the 0-slot depends on the chosen completion and
// is reported but carries no weight in the verdict.
struct NogoCertificate {
  FrameCompletion completion = FrameCompletion::TotalMomentum;
  RatMatrix deviation;
  Rational max_entry;            // largest |entry| over the full table
  Rational relative_block_max;   // largest |entry| over the relative block
  bool relative_block_canonical = false;
};

NogoCertificate nogo_certificate(
    const MassList& masses,
    FrameCompletion completion = FrameCompletion::TotalMomentum);

// For each ratio r (strictly positive, strictly decreasing) scales every
// mass except m_0 by r and records the certificate's max_entry.
std::vector<Rational> mass_limit_sweep(
    const MassList& base, const std::vector<Rational>& ratios,
    FrameCompletion completion = FrameCompletion::TotalMomentum);

// 2N x 2N array of "p/q" strings.
nlohmann::json table_to_json(const CommutatorTable& table);
nlohmann::json matrix_to_json(const RatMatrix& matrix);

}  // namespace qrf::canon
