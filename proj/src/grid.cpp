#include "qrf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace qrf::grid {

namespace {

using kernels::Mode;
using cplx = std::complex<double>;

constexpr double kBoundaryFraction = 1e-8;
constexpr double kRenormTolerance = 1e-6;
constexpr std::size_t kMaxDensityPoints = 1024;

std::size_t total_points(const std::vector<Grid1D>& grids) {
  std::size_t total = 1;
  for (const auto& g : grids) total *= g.n;
  return total;
}

double peak_magnitude(const std::vector<cplx>& amp) {
  double peak = 0.0;
  for (const auto& a : amp) peak = std::max(peak, std::abs(a));
  return peak;
}

double boundary_magnitude(const std::vector<cplx>& amp,
                          const std::vector<std::size_t>& dims) {
  double worst = 0.0;
  const std::size_t total = amp.size();
  for (std::size_t axis = 0; axis < dims.size(); ++axis) {
    std::size_t stride = 1;
    for (std::size_t d = axis + 1; d < dims.size(); ++d) stride *= dims[d];
    const std::size_t n = dims[axis];
    for (std::size_t i = 0; i < total; ++i) {
      const std::size_t along = (i / stride) % n;
      if (along == 0 || along + 1 == n)
        worst = std::max(worst, std::abs(amp[i]));
    }
  }
  return worst;
}

std::vector<kernels::TermData> flatten_terms(const gauss::GaussState& state) {
  const std::size_t dim = state.dim();
  if (dim > 3)
    throw std::invalid_argument("grid backend supports at most 3 dofs");
  std::vector<kernels::TermData> terms;
  for (const auto& t : state.terms()) {
    kernels::TermData td;
    td.coeff = t.coeff;
    td.dim = dim;
    for (std::size_t i = 0; i < dim; ++i) {
      td.center[i] = t.center(i);
      td.wavevec[i] = t.wavevec(i);
      for (std::size_t j = 0; j < dim; ++j)
        td.quad[i * dim + j] = t.quad(i, j);
    }
    terms.push_back(td);
  }
  return terms;
}

}  // namespace

Grid1D::Grid1D(double lo_in, double hi_in, std::size_t n_in)
    : lo(lo_in), hi(hi_in), n(n_in) {
  if (!(hi > lo)) throw std::invalid_argument("grid needs hi > lo");
  if (n < 64 || (n & (n - 1)) != 0)
    throw std::invalid_argument("grid size must be a power of two >= 64");
}

std::vector<double> Grid1D::points() const {
  std::vector<double> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = point(i);
  return pts;
}

std::vector<double> Grid1D::momenta(double hbar) const {
  std::vector<double> p(n);
  const double dk = 2.0 * std::numbers::pi / (spacing() * static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const double f = j < n / 2 ? static_cast<double>(j)
                               : static_cast<double>(j) - static_cast<double>(n);
    p[j] = hbar * dk * f;
  }
  return p;
}

GridState::GridState(std::vector<Grid1D> grids, std::vector<cplx> amp,
                     double hbar, Mode mode)
    : grids_(std::move(grids)), amp_(std::move(amp)), hbar_(hbar) {
  if (grids_.empty() || grids_.size() > 3)
    throw std::invalid_argument("grid state supports 1 to 3 dofs");
  if (amp_.size() != total_points(grids_))
    throw std::invalid_argument("amplitude tensor shape mismatch");
  if (!(hbar_ > 0.0)) throw std::invalid_argument("hbar must be positive");

  const double peak = peak_magnitude(amp_);
  if (peak == 0.0) throw std::invalid_argument("zero amplitude tensor");
  if (boundary_magnitude(amp_, dims()) > kBoundaryFraction * peak)
    throw std::invalid_argument(
        "packet leaks outside the box (boundary amplitude above 1e-8 of peak)");

  const double norm2 = kernels::sum_abs2(amp_, mode) * cell_volume();
  renorm_correction_ = std::abs(1.0 - std::sqrt(norm2));
  kernels::scale_in_place(amp_, 1.0 / std::sqrt(norm2), mode);
}

std::vector<std::size_t> GridState::dims() const {
  std::vector<std::size_t> d;
  for (const auto& g : grids_) d.push_back(g.n);
  return d;
}

double GridState::cell_volume() const {
  double v = 1.0;
  for (const auto& g : grids_) v *= g.spacing();
  return v;
}

GridState sample(const gauss::GaussState& state,
                 const std::vector<Grid1D>& grids, Mode mode) {
  if (grids.size() != state.dim())
    throw std::invalid_argument("grid count must match state dimension");
  std::vector<std::vector<double>> axis_points;
  for (const auto& g : grids) axis_points.push_back(g.points());
  std::vector<cplx> amp(total_points(grids));
  kernels::eval_terms(flatten_terms(state), axis_points, amp.data(), mode);
  GridState out(grids, std::move(amp), state.hbar(), mode);
  if (out.renorm_correction() >= kRenormTolerance)
    throw std::invalid_argument(
        "sampling renormalization correction exceeds 1e-6; grid too coarse "
        "or box too small");
  return out;
}

std::vector<Grid1D> suggest_grids(const gauss::GaussState& state,
                                  std::size_t n, double margin_sigma,
                                  double extra) {
  const auto box = gauss::bounding_box(state, margin_sigma);
  std::vector<Grid1D> grids;
  for (std::size_t d = 0; d < state.dim(); ++d)
    grids.emplace_back(box.lo[d] - extra, box.hi[d] + extra, n);
  return grids;
}

double expect_position(const GridState& state, std::size_t dof, Mode mode) {
  if (dof >= state.dim()) throw std::invalid_argument("dof out of range");
  const auto pts = state.grid(dof).points();
  const double num = kernels::axis_weighted_abs2(state.amp(), state.dims(),
                                                 dof, pts, mode);
  return num / kernels::sum_abs2(state.amp(), mode);
}

double expect_position_sq(const GridState& state, std::size_t dof, Mode mode) {
  if (dof >= state.dim()) throw std::invalid_argument("dof out of range");
  auto pts = state.grid(dof).points();
  for (auto& p : pts) p *= p;
  const double num = kernels::axis_weighted_abs2(state.amp(), state.dims(),
                                                 dof, pts, mode);
  return num / kernels::sum_abs2(state.amp(), mode);
}

namespace {

std::vector<cplx> momentum_representation(const GridState& state,
                                          std::size_t dof, Mode mode) {
  std::vector<cplx> hat = state.amp();
  kernels::fft_lines(hat.data(), state.dims(), dof, -1, mode);
  return hat;
}

}  // namespace

double expect_momentum(const GridState& state, std::size_t dof, Mode mode) {
  if (dof >= state.dim()) throw std::invalid_argument("dof out of range");
  const auto hat = momentum_representation(state, dof, mode);
  const auto p = state.grid(dof).momenta(state.hbar());
  const double num =
      kernels::axis_weighted_abs2(hat, state.dims(), dof, p, mode);
  return num / kernels::sum_abs2(hat, mode);
}

double expect_momentum_sq(const GridState& state, std::size_t dof, Mode mode) {
  if (dof >= state.dim()) throw std::invalid_argument("dof out of range");
  const auto hat = momentum_representation(state, dof, mode);
  auto p = state.grid(dof).momenta(state.hbar());
  for (auto& v : p) v *= v;
  const double num =
      kernels::axis_weighted_abs2(hat, state.dims(), dof, p, mode);
  return num / kernels::sum_abs2(hat, mode);
}

double expect_xp_sym(const GridState& state, std::size_t xdof,
                     std::size_t pdof, Mode mode) {
  if (xdof >= state.dim() || pdof >= state.dim())
    throw std::invalid_argument("dof out of range");
  const auto dims = state.dims();
  // phi = P psi via the spectral derivative along pdof
  std::vector<cplx> phi = state.amp();
  kernels::fft_lines(phi.data(), dims, pdof, -1, mode);
  const auto p = state.grid(pdof).momenta(state.hbar());
  std::size_t stride = 1;
  for (std::size_t d = pdof + 1; d < dims.size(); ++d) stride *= dims[d];
  const double inv_n = 1.0 / static_cast<double>(dims[pdof]);
  for (std::size_t i = 0; i < phi.size(); ++i)
    phi[i] *= p[(i / stride) % dims[pdof]] * inv_n;
  kernels::fft_lines(phi.data(), dims, pdof, 1, mode);

  const auto x = state.grid(xdof).points();
  const cplx xp = kernels::axis_weighted_dot(state.amp(), phi, dims, xdof, x,
                                             mode) /
                  kernels::sum_abs2(state.amp(), mode);
  return xp.real();  // Weyl value: Re<X P>
}

std::complex<double> overlap(const GridState& a, const GridState& b,
                             Mode mode) {
  if (a.dim() != b.dim()) throw std::invalid_argument("overlap dim mismatch");
  for (std::size_t d = 0; d < a.dim(); ++d) {
    const auto &ga = a.grid(d), &gb = b.grid(d);
    if (ga.lo != gb.lo || ga.hi != gb.hi || ga.n != gb.n)
      throw std::invalid_argument("overlap requires identical grids");
  }
  return kernels::dot_conj(a.amp(), b.amp(), mode) * a.cell_volume();
}

std::complex<double> expect_shift(const GridState& state, std::size_t dof,
                                  double displacement, Mode mode) {
  if (dof >= state.dim()) throw std::invalid_argument("dof out of range");
  const auto& g = state.grid(dof);
  if (std::abs(displacement) >= g.hi - g.lo)
    throw std::invalid_argument("displacement exceeds box extent");
  const auto dims = state.dims();
  const auto hat = momentum_representation(state, dof, mode);

  std::size_t stride = 1;
  for (std::size_t d = dof + 1; d < dims.size(); ++d) stride *= dims[d];
  std::vector<double> weight(g.n, 0.0);
  for (std::size_t i = 0; i < hat.size(); ++i)
    weight[(i / stride) % g.n] += std::norm(hat[i]);

  const auto p = g.momenta(state.hbar());
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    num += std::polar(weight[j], p[j] * displacement / state.hbar());
    den += weight[j];
  }
  return num / den;
}

DensityOp::DensityOp(Grid1D grid, std::vector<cplx> mat, double hbar,
                     Mode mode)
    : grid_(grid), mat_(std::move(mat)), hbar_(hbar) {
  const std::size_t n = grid_.n;
  if (n > kMaxDensityPoints)
    throw std::invalid_argument("density matrices are limited to 1024 points");
  if (mat_.size() != n * n)
    throw std::invalid_argument("density matrix shape mismatch");

  cplx trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += mat_[i * n + i];
  trace *= grid_.spacing();
  if (!(trace.real() > 0.0) || std::abs(trace.imag()) > 1e-9 * trace.real())
    throw std::invalid_argument("density matrix trace must be real positive");
  kernels::scale_in_place(mat_, 1.0 / trace.real(), mode);

  double scale = 0.0, herm_dev = 0.0;
  for (const auto& v : mat_) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      herm_dev = std::max(herm_dev,
                          std::abs(mat_[i * n + j] - std::conj(mat_[j * n + i])));
  if (herm_dev > 1e-9 * (1.0 + scale))
    throw std::invalid_argument("density matrix not Hermitian within 1e-9");
}

double DensityOp::purity(Mode mode) const {
  return kernels::purity(mat_.data(), grid_.n, grid_.spacing(), mode);
}

DensityOp partial_trace(const GridState& state, std::size_t keep, Mode mode) {
  const std::size_t d = state.dim();
  if (keep >= d) throw std::invalid_argument("keep axis out of range");
  if (d < 2) throw std::invalid_argument("nothing to trace in one dof");
  const auto dims = state.dims();
  const std::size_t n = dims[keep];
  std::vector<cplx> rho(n * n);

  if (d == 2) {
    const double weight = state.grid(1 - keep).spacing();
    kernels::partial_trace_2d(state.amp().data(), dims[0], dims[1], keep,
                              weight, rho.data(), mode);
  } else {
    double weight = 1.0;
    for (std::size_t a = 0; a < 3; ++a)
      if (a != keep) weight *= state.grid(a).spacing();
    kernels::partial_trace_3d(state.amp().data(), dims[0], dims[1], dims[2],
                              keep, weight, rho.data(), mode);
  }
  return DensityOp(state.grid(keep), std::move(rho), state.hbar(), mode);
}

std::complex<double> density_shift_expect(const DensityOp& rho,
                                          double displacement, Mode mode) {
  const auto& g = rho.grid();
  if (std::abs(displacement) >= g.hi - g.lo)
    throw std::invalid_argument("displacement exceeds box extent");
  const auto diag = kernels::momentum_diag(rho.mat().data(), g.n, mode);
  const auto p = g.momenta(rho.hbar());
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    const double w = diag[j].real();
    num += std::polar(w, p[j] * displacement / rho.hbar());
    den += w;
  }
  return num / den;
}

DensityOp relative_reduced_state(const gauss::GaussState& state,
                                 const std::vector<Grid1D>& grids,
                                 std::size_t j, Mode mode) {
  if (state.dim() > 3)
    throw std::invalid_argument("grid path supports at most 3 dofs");
  if (j == 0 || j >= state.dim())
    throw std::invalid_argument("relative partner must satisfy 1 <= j < N");
  const auto map = canon::pair_cm_r_map(state.masses(), j);
  const auto transformed = gauss::apply_point_map(state, map);
  const GridState sampled = sample(transformed, grids, mode);
  return partial_trace(sampled, j, mode);
}

void write_density_csv(const DensityOp& rho, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "row,col,re,im\n";
  char line[128];
  const std::size_t n = rho.n();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = rho.at(i, j);
      std::snprintf(line, sizeof(line), "%zu,%zu,%.17g,%.17g\n", i, j,
                    v.real(), v.imag());
      out << line;
    }
}

void write_slices_csv(const GridState& state,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "dof,index,coord,re,im\n";

  const auto dims = state.dims();
  std::size_t peak_flat = 0;
  double peak = -1.0;
  for (std::size_t i = 0; i < state.amp().size(); ++i) {
    const double a = std::abs(state.amp()[i]);
    if (a > peak) {
      peak = a;
      peak_flat = i;
    }
  }
  std::vector<std::size_t> peak_idx(dims.size());
  std::size_t rem = peak_flat;
  for (std::size_t d = dims.size(); d-- > 0;) {
    peak_idx[d] = rem % dims[d];
    rem /= dims[d];
  }

  char line[160];
  for (std::size_t dof = 0; dof < dims.size(); ++dof) {
    std::size_t stride = 1;
    for (std::size_t d = dof + 1; d < dims.size(); ++d) stride *= dims[d];
    std::size_t base = 0;
    for (std::size_t d = 0; d < dims.size(); ++d) {
      std::size_t s = 1;
      for (std::size_t e = d + 1; e < dims.size(); ++e) s *= dims[e];
      if (d != dof) base += peak_idx[d] * s;
    }
    for (std::size_t i = 0; i < dims[dof]; ++i) {
      const auto v = state.amp()[base + i * stride];
      std::snprintf(line, sizeof(line), "%zu,%zu,%.17g,%.17g,%.17g\n", dof, i,
                    state.grid(dof).point(i), v.real(), v.imag());
      out << line;
    }
  }
}

}  // namespace qrf::grid
