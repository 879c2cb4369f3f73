// Times the serial reference kernels against the OpenMP variants on the
// workloads the scenarios actually run: sampling a two-term superposition,
// partial traces, purity, line FFTs, and the momentum diagonal.

#include "qrf/gauss.hpp"
#include "qrf/grid.hpp"
#include "qrf/kernels.hpp"

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace qrf;
using kernels_mode = qrf::grid::kernels::Mode;

namespace {

template <typename F>
double time_ms(F&& body, int repeats) {
  body();  // warm up plans and caches
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < repeats; ++r) body();
  const auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(end - start).count() /
         repeats;
}

void report(const std::string& name, double serial_ms, double parallel_ms) {
  std::printf("%-22s serial %9.3f ms   openmp %9.3f ms   speedup %5.2fx\n",
              name.c_str(), serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 512;
  if (argc > 1) n = std::stoul(argv[1]);
  int repeats = 3;
  if (argc > 2) repeats = std::stoi(argv[2]);

#ifdef _OPENMP
  std::printf("openmp threads: %d, grid %zu^2, %d repeats\n",
              omp_get_max_threads(), n, repeats);
#else
  std::printf("built without openmp; both columns run serially\n");
#endif

  const auto psi = gauss::decay_state(4.0, 1.0, Rational(1), Rational(1),
                                      0.1, 0.1);
  const auto transformed =
      gauss::apply_point_map(psi, canon::map_cm_r(Rational(1), Rational(1)));
  const auto grids = grid::suggest_grids(transformed, n, 8.0, 8.0);

  report("sample",
         time_ms([&] { grid::sample(transformed, grids,
                                    kernels_mode::Serial); }, repeats),
         time_ms([&] { grid::sample(transformed, grids,
                                    kernels_mode::Parallel); }, repeats));

  const auto state = grid::sample(transformed, grids);
  report("partial_trace",
         time_ms([&] { grid::partial_trace(state, 1, kernels_mode::Serial); },
                 repeats),
         time_ms(
             [&] { grid::partial_trace(state, 1, kernels_mode::Parallel); },
             repeats));

  const auto rho = grid::partial_trace(state, 1);
  report("purity",
         time_ms([&] { rho.purity(kernels_mode::Serial); }, repeats),
         time_ms([&] { rho.purity(kernels_mode::Parallel); }, repeats));

  auto buf_serial = state.amp();
  auto buf_parallel = state.amp();
  report("fft_lines",
         time_ms(
             [&] {
               grid::kernels::fft_lines(buf_serial.data(), state.dims(), 0,
                                        -1, kernels_mode::Serial);
             },
             repeats),
         time_ms(
             [&] {
               grid::kernels::fft_lines(buf_parallel.data(), state.dims(), 0,
                                        -1, kernels_mode::Parallel);
             },
             repeats));

  report("momentum_diag",
         time_ms(
             [&] {
               grid::kernels::momentum_diag(rho.mat().data(), rho.n(),
                                            kernels_mode::Serial);
             },
             repeats),
         time_ms(
             [&] {
               grid::kernels::momentum_diag(rho.mat().data(), rho.n(),
                                            kernels_mode::Parallel);
             },
             repeats));

  report("shift_expect",
         time_ms(
             [&] { grid::density_shift_expect(rho, 8.0, kernels_mode::Serial); },
             repeats),
         time_ms(
             [&] {
               grid::density_shift_expect(rho, 8.0, kernels_mode::Parallel);
             },
             repeats));

  return 0;
}
