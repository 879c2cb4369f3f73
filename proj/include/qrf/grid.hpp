#pragma once

#include "qrf/gauss.hpp"
#include "qrf/kernels.hpp"

#include <complex>
#include <cstddef>
#include <filesystem>
#include <vector>

// Numerical backend: complex amplitude tensors on uniform position grids
// (up to 3 degrees of freedom), spectral momentum operators, and density
// matrices via partial trace. States always enter the grid by sampling an
// analytic GaussState; transformed states are transformed analytically
// first and resampled, never interpolated on the grid.
namespace qrf::grid {

struct Grid1D {
  Grid1D(double lo, double hi, std::size_t n);

  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;

  double spacing() const { return (hi - lo) / static_cast<double>(n); }
  double point(std::size_t i) const { return lo + spacing() * static_cast<double>(i); }
  std::vector<double> points() const;
  // hbar * k_j with FFT frequency wrapping (j >= n/2 maps to negative).
  std::vector<double> momenta(double hbar) const;
};

class GridState {
 public:
  // Takes ownership of the raw amplitudes, normalizes them, and enforces the
  // construction invariants: |1 - norm| < 1e-6 before renormalization and
  // boundary amplitudes below 1e-8 of the peak.
  GridState(std::vector<Grid1D> grids, std::vector<std::complex<double>> amp,
            double hbar,
            kernels::Mode mode = kernels::default_mode());

  std::size_t dim() const { return grids_.size(); }
  const std::vector<Grid1D>& grids() const { return grids_; }
  const Grid1D& grid(std::size_t d) const { return grids_.at(d); }
  const std::vector<std::complex<double>>& amp() const { return amp_; }
  double hbar() const { return hbar_; }
  double renorm_correction() const { return renorm_correction_; }
  std::vector<std::size_t> dims() const;
  double cell_volume() const;

 private:
  std::vector<Grid1D> grids_;
  std::vector<std::complex<double>> amp_;
  double hbar_;
  double renorm_correction_ = 0.0;
};

// Pointwise evaluation of the analytic state followed by renormalization.
GridState sample(const gauss::GaussState& state,
                 const std::vector<Grid1D>& grids,
                 kernels::Mode mode = kernels::default_mode());

// Grids covering the state's packets with margin_sigma spreads plus an
// extra absolute margin (room for the largest shift displacement).
std::vector<Grid1D> suggest_grids(const gauss::GaussState& state,
                                  std::size_t n, double margin_sigma = 8.0,
                                  double extra = 0.0);

double expect_position(const GridState& state, std::size_t dof,
                       kernels::Mode mode = kernels::default_mode());
double expect_position_sq(const GridState& state, std::size_t dof,
                          kernels::Mode mode = kernels::default_mode());
// Spectral momentum moments along one axis.
double expect_momentum(const GridState& state, std::size_t dof,
                       kernels::Mode mode = kernels::default_mode());
double expect_momentum_sq(const GridState& state, std::size_t dof,
                          kernels::Mode mode = kernels::default_mode());
// Weyl-symmetrized <(X_a P_b + P_b X_a)/2> via a spectral derivative.
double expect_xp_sym(const GridState& state, std::size_t xdof,
                     std::size_t pdof,
                     kernels::Mode mode = kernels::default_mode());

std::complex<double> overlap(const GridState& a, const GridState& b,
                             kernels::Mode mode = kernels::default_mode());

// <psi| exp(-i L P_dof/hbar) |psi> under the pinned psi(u) -> psi(u+L)
// convention, evaluated in the momentum representation (no interpolation).
std::complex<double> expect_shift(const GridState& state, std::size_t dof,
                                  double displacement,
                                  kernels::Mode mode = kernels::default_mode());

// One-degree-of-freedom density matrix sampled on a grid; trace-normalized
// and Hermitian within 1e-9 by construction.
class DensityOp {
 public:
  DensityOp(Grid1D grid, std::vector<std::complex<double>> mat, double hbar,
            kernels::Mode mode = kernels::default_mode());

  const Grid1D& grid() const { return grid_; }
  std::size_t n() const { return grid_.n; }
  double hbar() const { return hbar_; }
  const std::vector<std::complex<double>>& mat() const { return mat_; }
  std::complex<double> at(std::size_t i, std::size_t j) const {
    return mat_[i * grid_.n + j];
  }

  double purity(kernels::Mode mode = kernels::default_mode()) const;

 private:
  Grid1D grid_;
  std::vector<std::complex<double>> mat_;
  double hbar_;
};

// rho(v, v') = sum over traced axes of psi(..., v, ...) conj(psi(..., v', ...))
// times the traced cell volume. Supports 2 and 3 degrees of freedom.
DensityOp partial_trace(const GridState& state, std::size_t keep,
                        kernels::Mode mode = kernels::default_mode());

// Tr(exp(-i L P/hbar) rho) via the momentum-diagonal representation.
std::complex<double> density_shift_expect(
    const DensityOp& rho, double displacement,
    kernels::Mode mode = kernels::default_mode());

// Applies the two-body CM/relative map pairing particle j with particle 0
// to the analytic state, samples it, and traces out every other partition.
DensityOp relative_reduced_state(const gauss::GaussState& state,
                                 const std::vector<Grid1D>& grids,
                                 std::size_t j,
                                 kernels::Mode mode = kernels::default_mode());

// CSV exports: density matrices as "row,col,re,im"; amplitude slices through
// the peak as "dof,index,coord,re,im".
void write_density_csv(const DensityOp& rho, const std::filesystem::path& path);
void write_slices_csv(const GridState& state,
                      const std::filesystem::path& path);

}  // namespace qrf::grid
