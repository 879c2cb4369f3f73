#include "qrf/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qrf::grid::kernels {

namespace {

// Fixed chunking keeps reductions deterministic: partials are accumulated
// per chunk and summed in index order regardless of the thread count.
constexpr std::size_t kChunk = 4096;

template <typename T, typename Body>
T reduce_chunks(std::size_t count, Mode mode, Body&& body) {
  const std::size_t n_chunks = (count + kChunk - 1) / kChunk;
  std::vector<T> partials(n_chunks, T{});
  if (mode == Mode::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
      const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
      const std::size_t end = std::min(begin + kChunk, count);
      partials[static_cast<std::size_t>(c)] = body(begin, end);
    }
  } else {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      const std::size_t begin = c * kChunk;
      const std::size_t end = std::min(begin + kChunk, count);
      partials[c] = body(begin, end);
    }
  }
  T total{};
  for (const T& p : partials) total += p;
  return total;
}

template <typename Body>
void parallel_indices(std::size_t count, Mode mode, Body&& body) {
  if (mode == Mode::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
      body(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < count; ++i) body(i);
  }
}

std::size_t total_size(const std::vector<std::size_t>& dims) {
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  return total;
}

cplx eval_point(const std::vector<TermData>& terms, const double* z,
                std::size_t dim) {
  cplx acc = 0.0;
  for (const auto& t : terms) {
    double quad = 0.0, phase = 0.0;
    double y[3];
    for (std::size_t i = 0; i < dim; ++i) y[i] = z[i] - t.center[i];
    for (std::size_t i = 0; i < dim; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < dim; ++j) row += t.quad[i * dim + j] * y[j];
      quad += y[i] * row;
      phase += t.wavevec[i] * y[i];
    }
    const double mag = std::exp(-0.5 * quad);
    acc += t.coeff * cplx(mag * std::cos(phase), mag * std::sin(phase));
  }
  return acc;
}

// One cached FFTW plan per (length, sign). Plans are created with
// FFTW_UNALIGNED so the new-array execute API accepts any buffer.
class PlanCache {
 public:
  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    const auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cplx> scratch(n);
    fftw_plan plan = fftw_plan_dft_1d(
        static_cast<int>(n), reinterpret_cast<fftw_complex*>(scratch.data()),
        reinterpret_cast<fftw_complex*>(scratch.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

Mode default_mode() {
#ifdef _OPENMP
  if (std::getenv("QRF_SERIAL") != nullptr) return Mode::Serial;
  return Mode::Parallel;
#else
  return Mode::Serial;
#endif
}

void eval_terms(const std::vector<TermData>& terms,
                const std::vector<std::vector<double>>& axis_points,
                cplx* out, Mode mode) {
  const std::size_t dim = axis_points.size();
  if (dim == 0 || dim > 3)
    throw std::invalid_argument("eval_terms supports 1 to 3 axes");
  std::vector<std::size_t> dims;
  for (const auto& pts : axis_points) dims.push_back(pts.size());
  const std::size_t total = total_size(dims);

  parallel_indices(total, mode, [&](std::size_t flat) {
    double z[3];
    std::size_t rem = flat;
    for (std::size_t d = dim; d-- > 0;) {
      z[d] = axis_points[d][rem % dims[d]];
      rem /= dims[d];
    }
    out[flat] = eval_point(terms, z, dim);
  });
}

double sum_abs2(std::span<const cplx> data, Mode mode) {
  return reduce_chunks<double>(data.size(), mode,
                               [&](std::size_t b, std::size_t e) {
                                 double acc = 0.0;
                                 for (std::size_t i = b; i < e; ++i)
                                   acc += std::norm(data[i]);
                                 return acc;
                               });
}

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b, Mode mode) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot_conj length mismatch");
  return reduce_chunks<cplx>(a.size(), mode,
                             [&](std::size_t begin, std::size_t end) {
                               cplx acc = 0.0;
                               for (std::size_t i = begin; i < end; ++i)
                                 acc += std::conj(a[i]) * b[i];
                               return acc;
                             });
}

void scale_in_place(std::span<cplx> data, cplx factor, Mode mode) {
  parallel_indices(data.size(), mode,
                   [&](std::size_t i) { data[i] *= factor; });
}

void partial_trace_2d(const cplx* amp, std::size_t n0, std::size_t n1,
                      std::size_t keep, double weight, cplx* rho, Mode mode) {
  if (keep > 1) throw std::invalid_argument("keep axis out of range");
  if (keep == 1) {
    parallel_indices(n1, mode, [&](std::size_t v) {
      for (std::size_t vp = 0; vp < n1; ++vp) {
        cplx acc = 0.0;
        for (std::size_t u = 0; u < n0; ++u)
          acc += amp[u * n1 + v] * std::conj(amp[u * n1 + vp]);
        rho[v * n1 + vp] = acc * weight;
      }
    });
  } else {
    parallel_indices(n0, mode, [&](std::size_t u) {
      for (std::size_t up = 0; up < n0; ++up) {
        cplx acc = 0.0;
        for (std::size_t v = 0; v < n1; ++v)
          acc += amp[u * n1 + v] * std::conj(amp[up * n1 + v]);
        rho[u * n0 + up] = acc * weight;
      }
    });
  }
}

void partial_trace_3d(const cplx* amp, std::size_t n0, std::size_t n1,
                      std::size_t n2, std::size_t keep, double weight,
                      cplx* rho, Mode mode) {
  if (keep > 2) throw std::invalid_argument("keep axis out of range");
  const std::size_t s0 = n1 * n2, s1 = n2, s2 = 1;
  const std::size_t nk = keep == 0 ? n0 : (keep == 1 ? n1 : n2);
  const std::size_t sk = keep == 0 ? s0 : (keep == 1 ? s1 : s2);
  const std::size_t na = keep == 0 ? n1 : n0;
  const std::size_t sa = keep == 0 ? s1 : s0;
  const std::size_t nb = keep == 2 ? n1 : n2;
  const std::size_t sb = keep == 2 ? s1 : s2;

  parallel_indices(nk, mode, [&](std::size_t a) {
    for (std::size_t ap = 0; ap < nk; ++ap) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < na; ++i) {
        const std::size_t base = a * sk + i * sa;
        const std::size_t base_p = ap * sk + i * sa;
        for (std::size_t j = 0; j < nb; ++j)
          acc += amp[base + j * sb] * std::conj(amp[base_p + j * sb]);
      }
      rho[a * nk + ap] = acc * weight;
    }
  });
}

double purity(const cplx* rho, std::size_t n, double dv, Mode mode) {
  const double sum = reduce_chunks<double>(
      n * n, mode, [&](std::size_t begin, std::size_t end) {
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += std::norm(rho[i]);
        return acc;
      });
  return sum * dv * dv;
}

void fft_lines(cplx* data, const std::vector<std::size_t>& dims,
               std::size_t axis, int sign, Mode mode) {
  if (axis >= dims.size()) throw std::invalid_argument("fft axis out of range");
  const std::size_t n = dims[axis];
  std::size_t stride = 1;
  for (std::size_t d = axis + 1; d < dims.size(); ++d) stride *= dims[d];
  const std::size_t total = total_size(dims);
  const std::size_t n_lines = total / n;
  fftw_plan plan = plan_cache().get(n, sign);

  parallel_indices(n_lines, mode, [&](std::size_t line) {
    static thread_local std::vector<cplx> buf;
    buf.resize(n);
    const std::size_t inner = line % stride;
    const std::size_t outer = line / stride;
    const std::size_t base = outer * n * stride + inner;
    for (std::size_t t = 0; t < n; ++t) buf[t] = data[base + t * stride];
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(buf.data()));
    for (std::size_t t = 0; t < n; ++t) data[base + t * stride] = buf[t];
  });
}

std::vector<cplx> momentum_diag(const cplx* rho, std::size_t n, Mode mode) {
  std::vector<cplx> work(rho, rho + n * n);
  const std::vector<std::size_t> dims{n, n};
  fft_lines(work.data(), dims, 0, FFTW_FORWARD, mode);
  fft_lines(work.data(), dims, 1, FFTW_BACKWARD, mode);
  std::vector<cplx> diag(n);
  for (std::size_t j = 0; j < n; ++j) diag[j] = work[j * n + j];
  return diag;
}

double axis_weighted_abs2(std::span<const cplx> data,
                          const std::vector<std::size_t>& dims,
                          std::size_t axis, std::span<const double> weights,
                          Mode mode) {
  std::size_t stride = 1;
  for (std::size_t d = axis + 1; d < dims.size(); ++d) stride *= dims[d];
  const std::size_t n = dims[axis];
  return reduce_chunks<double>(
      data.size(), mode, [&](std::size_t begin, std::size_t end) {
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i)
          acc += weights[(i / stride) % n] * std::norm(data[i]);
        return acc;
      });
}

cplx axis_weighted_dot(std::span<const cplx> a, std::span<const cplx> b,
                       const std::vector<std::size_t>& dims, std::size_t axis,
                       std::span<const double> weights, Mode mode) {
  if (a.size() != b.size())
    throw std::invalid_argument("axis_weighted_dot length mismatch");
  std::size_t stride = 1;
  for (std::size_t d = axis + 1; d < dims.size(); ++d) stride *= dims[d];
  const std::size_t n = dims[axis];
  return reduce_chunks<cplx>(
      a.size(), mode, [&](std::size_t begin, std::size_t end) {
        cplx acc = 0.0;
        for (std::size_t i = begin; i < end; ++i)
          acc += std::conj(a[i]) * weights[(i / stride) % n] * b[i];
        return acc;
      });
}

}  // namespace qrf::grid::kernels
