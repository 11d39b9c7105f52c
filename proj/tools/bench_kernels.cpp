// Timing comparison of the OpenMP kernels against their serial twins on the
// shapes the quantizer actually uses (dim=2 flattened grids). Wall times only;
// correctness is covered by the kernel tests.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

#include "magweyl/kernels.hpp"

using namespace magweyl::kernels;
using Clock = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  auto t0 = Clock::now();
  for (int r = 0; r < reps; ++r) fn();
  auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

CMat random_cmat(long rows, long cols, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  CMat M(rows, cols);
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) M(i, j) = Cplx(U(rng), U(rng));
  return M;
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-22s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 48;
  int dim = 2;
  long P = 1;
  for (int a = 0; a < dim; ++a) P *= n;
  int reps = P > 4096 ? 3 : 10;
  std::printf("grid %dx%d (P = %ld), %d reps per row\n", dim, n, P, reps);

  CMat V = random_cmat(P, P, 1);
  CMat T = random_cmat(n, n, 2);
  RMat phase = random_cmat(P, P, 3).real();
  CMat G = random_cmat(P, P, 4);
  CMat K(P, P);

  {
    CMat W = V;
    double s = time_ms([&] { axis_apply_rows_serial(W, T, 0, dim, n); }, reps);
    double p = time_ms([&] { axis_apply_rows(W, T, 0, dim, n); }, reps);
    row("axis_apply_rows", s, p);
  }
  {
    CMat W = V;
    double s = time_ms([&] { axis_apply_cols_serial(W, T, 1, dim, n); }, reps);
    double p = time_ms([&] { axis_apply_cols(W, T, 1, dim, n); }, reps);
    row("axis_apply_cols", s, p);
  }
  {
    double s = time_ms([&] { scatter_diagonals_serial(G, K, dim, n); }, reps);
    double p = time_ms([&] { scatter_diagonals(G, K, dim, n); }, reps);
    row("scatter_diagonals", s, p);
  }
  {
    double s = time_ms([&] { gather_diagonals_serial(K, G, dim, n); }, reps);
    double p = time_ms([&] { gather_diagonals(K, G, dim, n); }, reps);
    row("gather_diagonals", s, p);
  }
  {
    CMat W = V;
    double s = time_ms([&] { hadamard_cis_serial(W, phase, 1.0); }, reps);
    double p = time_ms([&] { hadamard_cis(W, phase, 1.0); }, reps);
    row("hadamard_cis", s, p);
  }
  {
    RMat out(P, P);
    auto fn = [&](long i, long j) { return double(i - j) * 1e-6; };
    double s = time_ms([&] { fill_pair_table_serial(out, fn); }, reps);
    double p = time_ms([&] { fill_pair_table(out, fn); }, reps);
    row("fill_pair_table", s, p);
  }
  return 0;
}
