// Benchmark of the parallel sweep kernels against their serial references.
// Both paths compute identical samples; the table reports times and the
// largest cross-check difference (which must be zero).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "zint/evaluator.hpp"
#include "zint/plane2d.hpp"

using namespace zint;

namespace {

template <typename F>
double time_ms(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

double max_diff(const std::vector<TailSample>& a, const std::vector<TailSample>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i].value - b[i].value));
    return d;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif

    // 1-D sweep with a quadrature-backed antiderivative (the expensive case:
    // every tail sample runs panel quadrature through the cached cumulative).
    {
        Integrand g;
        g.f = [](double x) { return std::cos(1.3 * x) / (1.0 + 0.01 * x); };
        const auto N = numeric_antiderivative(g.f, 0.0);
        const RealFn F = [N](double x) { return N->value(x); };
        const auto zd = make_triple(M_PI / 1.3);
        std::vector<double> grid;
        for (int i = 0; i < 256; ++i) grid.push_back(50.0 + 1.1 * i);

        // warm the cache so both runs see the same state
        (void)tail_sweep_serial(F, zd, grid);

        std::vector<TailSample> s, p;
        const double ts = time_ms([&] { s = tail_sweep_serial(F, zd, grid); });
        const double tp = time_ms([&] { p = tail_sweep(F, zd, grid); });
        std::printf("1d tail sweep (256 b, cached quadrature): serial %8.2f ms  parallel %8.2f ms  speedup %.2fx  max diff %g\n",
                    ts, tp, ts / tp, max_diff(s, p));
    }

    // 1-D sweep with cold caches, forcing panel construction inside the sweep.
    {
        Integrand g;
        g.f = [](double x) { return std::sin(x) * std::exp(-0.001 * x); };
        const auto zd = make_pair(M_PI);
        std::vector<double> grid;
        for (int i = 0; i < 64; ++i) grid.push_back(100.0 + 13.7 * i);

        const double ts = time_ms([&] {
            const auto N = numeric_antiderivative(g.f, 0.0);
            (void)tail_sweep_serial([N](double x) { return N->value(x); }, zd, grid);
        });
        const double tp = time_ms([&] {
            const auto N = numeric_antiderivative(g.f, 0.0);
            (void)tail_sweep([N](double x) { return N->value(x); }, zd, grid);
        });
        std::printf("1d tail sweep (64 b, cold quadrature cache):  serial %8.2f ms  parallel %8.2f ms  speedup %.2fx\n",
                    ts, tp, ts / tp);
    }

    // 2-D sweep: disk-smoothed oscillatory field on an offset circle family
    // (the generic polar quadrature path).
    {
        const Field2D f = sin_r2_field();
        const Kernel2D k = disk_kernel(2.0);
        const CurveFamily fam = offset_circle_family({1.0, 0.0});
        Policy2D policy;
        policy.b_lo = 20.0;
        policy.b_hi = 30.0;
        policy.b_count = 8;
        const auto grid = policy.grid();
        const QuadConfig2D quad;

        std::vector<TailSample> s, p;
        const double ts = time_ms([&] { s = tail2d_sweep_serial(f, k, fam, grid, quad); });
        const double tp = time_ms([&] { p = tail2d_sweep(f, k, fam, grid, quad); });
        std::printf("2d tail sweep (8 b, offset circle):          serial %8.2f ms  parallel %8.2f ms  speedup %.2fx  max diff %g\n",
                    ts, tp, ts / tp, max_diff(s, p));
    }

    return 0;
}
