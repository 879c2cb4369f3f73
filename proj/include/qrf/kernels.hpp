#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Data-parallel kernels backing the grid module. Every kernel exists in two
// variants selected by Mode: a plain serial reference and an OpenMP version.
// The two must produce identical results; reductions accumulate fixed-size
// chunk partials in index order so the sum does not depend on the thread
// count. Unit tests compare the variants, and tools/bench_kernels.cpp times
// them against each other.
namespace qrf::grid::kernels {

enum class Mode { Serial, Parallel };

// Parallel when compiled with OpenMP and QRF_SERIAL is not set.
Mode default_mode();

using cplx = std::complex<double>;

// Flattened Gaussian term for tight evaluation loops (dim <= 3).
struct TermData {
  cplx coeff;
  std::size_t dim = 0;
  std::array<double, 3> center{};
  std::array<double, 3> wavevec{};
  std::array<double, 9> quad{};  // row-major dim x dim
};

// Evaluates the term superposition over the product grid into `out`
// (row-major, last axis fastest).
void eval_terms(const std::vector<TermData>& terms,
                const std::vector<std::vector<double>>& axis_points,
                cplx* out, Mode mode);

double sum_abs2(std::span<const cplx> data, Mode mode);
// sum conj(a[i]) * b[i]
cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b, Mode mode);
void scale_in_place(std::span<cplx> data, cplx factor, Mode mode);

// rho(v, v') = weight * sum_u psi(u, v) conj(psi(u, v')) for keep = 1,
// and the transposed pairing for keep = 0.
void partial_trace_2d(const cplx* amp, std::size_t n0, std::size_t n1,
                      std::size_t keep, double weight, cplx* rho, Mode mode);
// Keeps one of three axes, tracing the other two with the given weight.
void partial_trace_3d(const cplx* amp, std::size_t n0, std::size_t n1,
                      std::size_t n2, std::size_t keep, double weight,
                      cplx* rho, Mode mode);

// Tr(rho^2) * dv^2 for an n x n kernel sampled with spacing dv.
double purity(const cplx* rho, std::size_t n, double dv, Mode mode);

// In-place 1-D FFTs along `axis` of a row-major tensor. sign is the FFTW
// convention: -1 forward (e^{-i...}), +1 backward (e^{+i...}); unnormalized.
void fft_lines(cplx* data, const std::vector<std::size_t>& dims,
               std::size_t axis, int sign, Mode mode);

// Diagonal of F rho F^dagger: w_j = sum_ab e^{-i 2pi j a/n} rho_ab
// e^{+i 2pi j b/n}. Nonnegative for positive semidefinite rho.
std::vector<cplx> momentum_diag(const cplx* rho, std::size_t n, Mode mode);

// sum over elements of weights[index_along_axis] * |data|^2
double axis_weighted_abs2(std::span<const cplx> data,
                          const std::vector<std::size_t>& dims,
                          std::size_t axis, std::span<const double> weights,
                          Mode mode);

// sum over elements of conj(a) * weights[index_along_axis] * b
cplx axis_weighted_dot(std::span<const cplx> a, std::span<const cplx> b,
                       const std::vector<std::size_t>& dims, std::size_t axis,
                       std::span<const double> weights, Mode mode);

}  // namespace qrf::grid::kernels
