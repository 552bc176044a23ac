// Serial vs OpenMP timings for the contact range kernel and the sweep runner.
//
//   bench_kernels [stations] [maps] [repeats]

#include "dmcis/contact_kernel.hpp"
#include "dmcis/generator.hpp"
#include "dmcis/rng.hpp"
#include "dmcis/scenario.hpp"
#include "dmcis/sweep.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

using namespace dmcis;

namespace {

template <class F>
double seconds(F&& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel)
{
    std::printf("%-14s serial %9.4f s  parallel %9.4f s  speedup %5.2fx\n", name, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0);
}

} // namespace

int main(int argc, char** argv)
{
    const std::size_t ns = argc > 1 ? std::stoul(argv[1]) : 2000;
    const std::size_t nm = argc > 2 ? std::stoul(argv[2]) : 2000;
    const int repeats = argc > 3 ? std::stoi(argv[3]) : 20;
    std::printf("openmp %s, %d threads\n", openmp_enabled() ? "on" : "off", max_threads());

    Rng rng(1);
    std::vector<Position> sp(ns), mp(nm);
    std::vector<double> sr(ns), mr(nm);
    for (auto& p : sp)
        p = {rng.uniform() * 10000, rng.uniform() * 10000};
    for (auto& p : mp)
        p = {rng.uniform() * 10000, rng.uniform() * 10000};
    for (auto& r : sr)
        r = 150 + rng.uniform() * 100;
    for (auto& r : mr)
        r = 150 + rng.uniform() * 100;
    const RangeInput in{sp, sr, mp, mr};

    std::size_t sink = 0;
    const double ks = seconds([&] {
        for (int i = 0; i < repeats; ++i)
            sink += in_range_serial(in)[static_cast<std::size_t>(i) % (ns * nm)];
    });
    const double kp = seconds([&] {
        for (int i = 0; i < repeats; ++i)
            sink += in_range_parallel(in)[static_cast<std::size_t>(i) % (ns * nm)];
    });
    std::printf("range kernel %zu x %zu, %d repeats\n", ns, nm, repeats);
    report("in_range", ks, kp);

    SweepSpec spec;
    spec.path = "seed";
    spec.values = parse_sweep_values("1..8");
    spec.seeds = 2;
    const auto base = generate_scenario(3);
    SweepResult a, b;
    const double ss = seconds([&] { a = run_sweep(base, spec, KernelMode::serial); });
    const double sp_ = seconds([&] { b = run_sweep(base, spec, KernelMode::parallel); });
    std::printf("sweep %zu cells\n", a.cells.size());
    report("run_sweep", ss, sp_);
    if (sweep_csv(spec, a) != sweep_csv(spec, b)) {
        std::fprintf(stderr, "serial and parallel sweeps differ\n");
        return 1;
    }
    return sink == static_cast<std::size_t>(-1) ? 2 : 0;
}
