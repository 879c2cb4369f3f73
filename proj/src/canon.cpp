#include "qrf/canon.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qrf {

Rational parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  auto parse_int = [](const std::string& t) {
    if (t.empty() || (t.size() == 1 && (t[0] == '+' || t[0] == '-')))
      throw std::invalid_argument("malformed integer in rational literal");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const char c = t[i];
      if (i == 0 && (c == '+' || c == '-')) continue;
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw std::invalid_argument("malformed integer in rational literal");
    }
    return boost::multiprecision::cpp_int(t);
  };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    const auto num = parse_int(s.substr(0, slash));
    const auto den = parse_int(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    const std::string head = s.substr(0, dot);
    const std::string frac = s.substr(dot + 1);
    const bool negative = !head.empty() && head[0] == '-';
    const auto whole = head.empty() || head == "-" || head == "+"
                           ? boost::multiprecision::cpp_int(0)
                           : parse_int(head);
    boost::multiprecision::cpp_int den = 1;
    boost::multiprecision::cpp_int num = 0;
    for (char c : frac) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw std::invalid_argument("malformed decimal literal");
      num = num * 10 + (c - '0');
      den *= 10;
    }
    Rational value(num, den);
    if (negative)
      return Rational(whole) - value;
    return Rational(whole) + value;
  }
  return Rational(parse_int(s));
}

std::string to_fraction_string(const Rational& value) {
  std::ostringstream out;
  out << numerator(value) << "/" << denominator(value);
  return out.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::transposed() const {
  RatMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
  return m;
}

RatMatrix RatMatrix::operator*(const RatMatrix& rhs) const {
  if (cols_ != rhs.rows_)
    throw std::invalid_argument("rational matrix shape mismatch");
  RatMatrix m(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& lik = at(i, k);
      if (lik == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j)
        m.at(i, j) += lik * rhs.at(k, j);
    }
  return m;
}

RatMatrix RatMatrix::operator-(const RatMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("rational matrix shape mismatch");
  RatMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i)
    m.data_[i] = data_[i] - rhs.data_[i];
  return m;
}

Rational RatMatrix::determinant() const {
  if (rows_ != cols_) throw std::invalid_argument("determinant of non-square");
  RatMatrix work = *this;
  Rational det = 1;
  const std::size_t n = rows_;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && work.at(pivot, col) == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(work.at(pivot, j), work.at(col, j));
      det = -det;
    }
    det *= work.at(col, col);
    const Rational inv_pivot = Rational(1) / work.at(col, col);
    for (std::size_t row = col + 1; row < n; ++row) {
      if (work.at(row, col) == 0) continue;
      const Rational factor = work.at(row, col) * inv_pivot;
      for (std::size_t j = col; j < n; ++j)
        work.at(row, j) -= factor * work.at(col, j);
    }
  }
  return det;
}

RatMatrix RatMatrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of non-square");
  const std::size_t n = rows_;
  RatMatrix work = *this;
  RatMatrix inv = identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && work.at(pivot, col) == 0) ++pivot;
    if (pivot == n) throw std::domain_error("singular rational matrix");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work.at(pivot, j), work.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    const Rational inv_pivot = Rational(1) / work.at(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      work.at(col, j) *= inv_pivot;
      inv.at(col, j) *= inv_pivot;
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || work.at(row, col) == 0) continue;
      const Rational factor = work.at(row, col);
      for (std::size_t j = 0; j < n; ++j) {
        work.at(row, j) -= factor * work.at(col, j);
        inv.at(row, j) -= factor * inv.at(col, j);
      }
    }
  }
  return inv;
}

Rational RatMatrix::max_abs() const {
  Rational best = 0;
  for (const auto& v : data_) {
    const Rational a = v < 0 ? Rational(-v) : v;
    if (a > best) best = a;
  }
  return best;
}

}  // namespace qrf

namespace qrf::canon {

MassList::MassList(std::vector<Rational> masses) : masses_(std::move(masses)) {
  if (masses_.empty()) throw std::invalid_argument("mass list must be nonempty");
  for (const auto& m : masses_)
    if (m <= 0) throw std::invalid_argument("masses must be strictly positive");
}

Rational MassList::total() const {
  Rational sum = 0;
  for (const auto& m : masses_) sum += m;
  return sum;
}

Rational MassList::fraction(std::size_t i) const { return mass(i) / total(); }

Rational MassList::reduced(std::size_t i, std::size_t j) const {
  const Rational &mi = mass(i), &mj = mass(j);
  return mi * mj / (mi + mj);
}

LinearPhaseMap LinearPhaseMap::identity(std::size_t n_particles) {
  LinearPhaseMap map;
  map.dim = n_particles;
  map.matrix = RatMatrix::identity(2 * n_particles);
  map.translation.assign(2 * n_particles, 0.0);
  return map;
}

LinearPhaseMap LinearPhaseMap::inverse() const {
  LinearPhaseMap inv;
  inv.dim = dim;
  inv.matrix = matrix.inverse();
  inv.translation.assign(size(), 0.0);
  // A = M^{-1} A' - M^{-1} tau
  for (std::size_t i = 0; i < size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < size(); ++j)
      acc += to_double(inv.matrix.at(i, j)) * translation[j];
    inv.translation[i] = -acc;
  }
  return inv;
}

LinearPhaseMap compose(const LinearPhaseMap& outer,
                       const LinearPhaseMap& inner) {
  if (outer.dim != inner.dim)
    throw std::invalid_argument("phase map dimension mismatch");
  LinearPhaseMap result;
  result.dim = outer.dim;
  result.matrix = outer.matrix * inner.matrix;
  result.translation.assign(result.size(), 0.0);
  for (std::size_t i = 0; i < result.size(); ++i) {
    double acc = outer.translation[i];
    for (std::size_t j = 0; j < result.size(); ++j)
      acc += to_double(outer.matrix.at(i, j)) * inner.translation[j];
    result.translation[i] = acc;
  }
  return result;
}

CommutatorTable symplectic_form(std::size_t n_particles) {
  if (n_particles == 0)
    throw std::invalid_argument("symplectic form needs at least one particle");
  CommutatorTable table{RatMatrix(2 * n_particles, 2 * n_particles)};
  for (std::size_t i = 0; i < n_particles; ++i) {
    table.entries.at(2 * i, 2 * i + 1) = 1;
    table.entries.at(2 * i + 1, 2 * i) = -1;
  }
  return table;
}

CommutatorTable commutator_table(const LinearPhaseMap& map) {
  if (map.dim == 0 || map.matrix.rows() != map.size() ||
      map.matrix.cols() != map.size())
    throw std::invalid_argument("malformed phase map");
  const RatMatrix omega = symplectic_form(map.dim).entries;
  return CommutatorTable{map.matrix * omega * map.matrix.transposed()};
}

bool is_canonical(const LinearPhaseMap& map) {
  return commutator_table(map) == symplectic_form(map.dim);
}

RatMatrix map_deviation(const LinearPhaseMap& map) {
  return commutator_table(map).entries - symplectic_form(map.dim).entries;
}

LinearPhaseMap map_cm_r(const Rational& m0, const Rational& m1) {
  if (m0 <= 0 || m1 <= 0)
    throw std::invalid_argument("masses must be strictly positive");
  const Rational M = m0 + m1;
  LinearPhaseMap map = LinearPhaseMap::identity(2);
  map.matrix = RatMatrix(4, 4);
  map.matrix.at(0, 0) = m0 / M;  // X0' = (m0 X0 + m1 X1)/M
  map.matrix.at(0, 2) = m1 / M;
  map.matrix.at(1, 1) = 1;       // P0' = P0 + P1
  map.matrix.at(1, 3) = 1;
  map.matrix.at(2, 0) = -1;      // X1' = X1 - X0
  map.matrix.at(2, 2) = 1;
  map.matrix.at(3, 1) = -m1 / M; // P1' = mu01 (P1/m1 - P0/m0)
  map.matrix.at(3, 3) = m0 / M;
  return map;
}

LinearPhaseMap map_R(const Rational& m0, const Rational& m1) {
  if (m0 <= 0 || m1 <= 0)
    throw std::invalid_argument("masses must be strictly positive");
  LinearPhaseMap map = LinearPhaseMap::identity(2);
  map.matrix = RatMatrix(4, 4);
  map.matrix.at(0, 0) = -1;  // X0' = -X0
  map.matrix.at(1, 1) = -1;  // P0' = -(P0 + P1)
  map.matrix.at(1, 3) = -1;
  map.matrix.at(2, 0) = -1;  // X1' = X1 - X0
  map.matrix.at(2, 2) = 1;
  map.matrix.at(3, 3) = 1;   // P1' = P1
  return map;
}

LinearPhaseMap map_cm_r_N(const MassList& masses) {
  const std::size_t n = masses.size();
  if (n < 2)
    throw std::invalid_argument("CM/relative map needs at least two particles");
  LinearPhaseMap map = LinearPhaseMap::identity(n);
  map.matrix = RatMatrix(2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    map.matrix.at(position_slot(0), position_slot(k)) = masses.fraction(k);
    map.matrix.at(momentum_slot(0), momentum_slot(k)) = 1;
  }
  for (std::size_t i = 1; i < n; ++i) {
    map.matrix.at(position_slot(i), position_slot(0)) = -1;
    map.matrix.at(position_slot(i), position_slot(i)) = 1;
    // Pi' = P_i - (m_i/M) P_CM
    for (std::size_t k = 0; k < n; ++k)
      map.matrix.at(momentum_slot(i), momentum_slot(k)) = -masses.fraction(i);
    map.matrix.at(momentum_slot(i), momentum_slot(i)) += 1;
  }
  return map;
}

LinearPhaseMap target_relational_map(const MassList& masses,
                                     FrameCompletion completion) {
  const std::size_t n = masses.size();
  if (n < 2)
    throw std::invalid_argument(
        "target relational map needs at least two particles");
  LinearPhaseMap map = LinearPhaseMap::identity(n);
  map.matrix = RatMatrix(2 * n, 2 * n);
  map.matrix.at(position_slot(0), position_slot(0)) = -1;
  if (completion == FrameCompletion::TotalMomentum) {
    for (std::size_t k = 0; k < n; ++k)
      map.matrix.at(momentum_slot(0), momentum_slot(k)) = -1;
  } else {
    map.matrix.at(momentum_slot(0), momentum_slot(0)) = -1;
  }
  for (std::size_t i = 1; i < n; ++i) {
    map.matrix.at(position_slot(i), position_slot(0)) = -1;
    map.matrix.at(position_slot(i), position_slot(i)) = 1;
    const Rational mu = masses.reduced(i, 0);
    map.matrix.at(momentum_slot(i), momentum_slot(0)) = -mu / masses.mass(0);
    map.matrix.at(momentum_slot(i), momentum_slot(i)) = mu / masses.mass(i);
  }
  return map;
}

LinearPhaseMap map_castro(const MassList& masses) {
  const std::size_t n = masses.size();
  if (n < 3)
    throw std::invalid_argument(
        "subsystem reference map needs at least three particles");
  LinearPhaseMap map = LinearPhaseMap::identity(n);
  for (std::size_t k = 2; k < n; ++k) {
    map.matrix.at(position_slot(k), position_slot(0)) = -1;
    map.matrix.at(momentum_slot(k), momentum_slot(1)) =
        -masses.mass(k) / masses.mass(1);
  }
  return map;
}

LinearPhaseMap pair_cm_r_map(const MassList& masses, std::size_t j) {
  const std::size_t n = masses.size();
  if (j == 0 || j >= n)
    throw std::invalid_argument("pair map partner must satisfy 1 <= j < N");
  const Rational& m0 = masses.mass(0);
  const Rational& mj = masses.mass(j);
  const Rational M = m0 + mj;
  LinearPhaseMap map = LinearPhaseMap::identity(n);
  map.matrix.at(position_slot(0), position_slot(0)) = m0 / M;
  map.matrix.at(position_slot(0), position_slot(j)) = mj / M;
  map.matrix.at(momentum_slot(0), momentum_slot(0)) = 1;
  map.matrix.at(momentum_slot(0), momentum_slot(j)) = 1;
  map.matrix.at(position_slot(j), position_slot(0)) = -1;
  map.matrix.at(position_slot(j), position_slot(j)) = 1;
  map.matrix.at(momentum_slot(j), momentum_slot(0)) = -mj / M;
  map.matrix.at(momentum_slot(j), momentum_slot(j)) = m0 / M;
  return map;
}

LinearPhaseMap parity_map(std::size_t n_particles, std::size_t particle) {
  if (particle >= n_particles)
    throw std::invalid_argument("parity particle out of range");
  LinearPhaseMap map = LinearPhaseMap::identity(n_particles);
  map.matrix.at(position_slot(particle), position_slot(particle)) = -1;
  map.matrix.at(momentum_slot(particle), momentum_slot(particle)) = -1;
  return map;
}

LinearPhaseMap boost_map(double velocity, double time, double mass) {
  LinearPhaseMap map = LinearPhaseMap::identity(1);
  map.translation[0] = -velocity * time;
  map.translation[1] = -mass * velocity;
  return map;
}

NogoCertificate nogo_certificate(const MassList& masses,
                                 FrameCompletion completion) {
  NogoCertificate cert;
  cert.completion = completion;
  cert.deviation = map_deviation(target_relational_map(masses, completion));
  cert.max_entry = cert.deviation.max_abs();

  const std::size_t n = masses.size();
  Rational rel_max = 0;
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j)
      for (std::size_t a : {position_slot(i), momentum_slot(i)})
        for (std::size_t b : {position_slot(j), momentum_slot(j)}) {
          Rational v = cert.deviation.at(a, b);
          if (v < 0) v = -v;
          if (v > rel_max) rel_max = v;
        }
  cert.relative_block_max = rel_max;
  cert.relative_block_canonical = (rel_max == 0);
  return cert;
}

std::vector<Rational> mass_limit_sweep(const MassList& base,
                                       const std::vector<Rational>& ratios,
                                       FrameCompletion completion) {
  if (ratios.empty()) throw std::invalid_argument("empty ratio list");
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (ratios[i] <= 0)
      throw std::invalid_argument("ratios must be strictly positive");
    if (i > 0 && ratios[i] >= ratios[i - 1])
      throw std::invalid_argument("ratios must be strictly decreasing");
  }
  std::vector<Rational> deviations;
  deviations.reserve(ratios.size());
  for (const auto& r : ratios) {
    std::vector<Rational> scaled = base.masses();
    for (std::size_t i = 1; i < scaled.size(); ++i) scaled[i] *= r;
    deviations.push_back(
        nogo_certificate(MassList(scaled), completion).max_entry);
  }
  return deviations;
}

nlohmann::json matrix_to_json(const RatMatrix& matrix) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < matrix.cols(); ++j)
      row.push_back(to_fraction_string(matrix.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json table_to_json(const CommutatorTable& table) {
  return matrix_to_json(table.entries);
}

}  // namespace qrf::canon
