// Times the OpenMP kernels against their serial references and checks that
// both produce bitwise-identical results.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "mobo/kernels.hpp"
#include "mobo/rng.hpp"
#include "mobo/simcfr.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
double timed(F&& f) {
  const auto t0 = Clock::now();
  f();
  return seconds_since(t0);
}

void report(const char* name, double serial_s, double parallel_s, bool match) {
  std::printf("%-24s serial %8.4f s   openmp %8.4f s   speedup %5.2fx   %s\n",
              name, serial_s, parallel_s, serial_s / parallel_s,
              match ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main() {
  mobo::Rng rng(42);

  {
    const std::size_t n = 1500, d = 3;
    std::vector<double> pts(n * d);
    for (auto& v : pts) v = rng.uniform01();
    std::vector<double> a, b;
    const double ts = timed([&] { a = mobo::kernels::gram_matrix_serial(pts, n, d, 0.4); });
    const double tp = timed([&] { b = mobo::kernels::gram_matrix(pts, n, d, 0.4); });
    report("gram_matrix", ts, tp, a == b);
  }

  {
    const std::size_t n = 600, d = 3, m = 200000;
    std::vector<double> centers(n * d), w(n), q(m * d);
    for (auto& v : centers) v = rng.uniform01();
    for (auto& v : w) v = rng.uniform(-1.0, 1.0);
    for (auto& v : q) v = rng.uniform01();
    std::vector<double> a, b;
    const double ts = timed([&] {
      a = mobo::kernels::rbf_eval_batch_serial(centers, n, d, w, 0.4, q, m);
    });
    const double tp = timed([&] {
      b = mobo::kernels::rbf_eval_batch(centers, n, d, w, 0.4, q, m);
    });
    report("rbf_eval_batch", ts, tp, a == b);
  }

  {
    const std::size_t n = 20000;
    std::vector<double> objs(n * 2);
    for (auto& v : objs) v = rng.uniform(-100.0, 100.0);
    std::vector<std::uint8_t> a, b;
    const double ts =
        timed([&] { a = mobo::kernels::nondominated_flags_serial(objs, n, 2); });
    const double tp =
        timed([&] { b = mobo::kernels::nondominated_flags(objs, n, 2); });
    report("nondominated_flags", ts, tp, a == b);
  }

  {
    const mobo::ReactionModel model;
    const double lower[3] = {40.0, 60.0, 0.9};
    const double upper[3] = {150.0, 300.0, 2.0};
    auto product = [&](std::span<const double> x) {
      return mobo::ground_truth(model, x[0], x[1], x[2]).first;
    };
    mobo::kernels::GridMax a{}, b{};
    const double ts = timed([&] {
      a = mobo::kernels::grid_argmax_serial(product, lower, upper, 96);
    });
    const double tp =
        timed([&] { b = mobo::kernels::grid_argmax(product, lower, upper, 96); });
    report("grid_argmax", ts, tp,
           a.value == b.value && a.flat_index == b.flat_index);
    std::printf("%-24s max product area %.6f at flat index %zu\n", "",
                a.value, a.flat_index);
  }

  return 0;
}
