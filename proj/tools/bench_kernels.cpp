// Times the serial reference implementations against the OpenMP kernels.

#include <chrono>
#include <cstdio>
#include <random>

#include "crested/insect.hpp"
#include "crested/kernels.hpp"
#include "crested/poset.hpp"

using namespace crested;
using kernels::ExecPolicy;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_of(F&& f) {
    const auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-28s %10.4f s %10.4f s %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::printf("%-28s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");
    std::printf("threads: %d\n", kernels::max_threads());

    {
        Matrix a(64, 64), b(64, 64);
        for (long i = 0; i < 64; ++i)
            for (long j = 0; j < 64; ++j) {
                a(i, j) = unif(rng);
                b(i, j) = unif(rng);
            }
        Matrix out_s, out_p;
        const double ts = time_of([&] { out_s = kernels::kron(a, b, ExecPolicy::Serial); });
        const double tp = time_of([&] { out_p = kernels::kron(a, b, ExecPolicy::Parallel); });
        if (out_s != out_p) std::printf("kron mismatch!\n");
        row("kron 64x64 (x) 64x64", ts, tp);
    }

    {
        const int m = 512;
        Matrix a(m, m), b(m, m);
        for (long i = 0; i < m; ++i)
            for (long j = 0; j < m; ++j) {
                a(i, j) = unif(rng);
                b(i, j) = unif(rng);
            }
        Matrix out_s, out_p;
        const double ts = time_of([&] { out_s = kernels::matmul(a, b, ExecPolicy::Serial); });
        const double tp = time_of([&] { out_p = kernels::matmul(a, b, ExecPolicy::Parallel); });
        if (out_s != out_p) std::printf("matmul mismatch!\n");
        row("matmul 512x512", ts, tp);
    }

    {
        const int m = 1024;
        Matrix p(m, m);
        for (long i = 0; i < m; ++i) {
            double s = 0.0;
            for (long j = 0; j < m; ++j) s += (p(i, j) = unif(rng));
            p.row(i) /= s;
        }
        Vector pi = Vector::Constant(m, 1.0 / m);
        double vs = 0, vp = 0;
        const double ts = time_of(
            [&] { vs = kernels::max_detailed_balance_violation(p, pi, ExecPolicy::Serial); });
        const double tp = time_of(
            [&] { vp = kernels::max_detailed_balance_violation(p, pi, ExecPolicy::Parallel); });
        if (vs != vp) std::printf("violation mismatch!\n");
        row("detailed balance 1024^2", ts, tp);
    }

    {
        const Poset poset = Poset::from_covers(3, {{1, 0}, {2, 0}});
        const TreeGraph tree = build_tree(poset, {4, 4, 4});
        std::vector<long long> hs, hp;
        const double ts = time_of([&] {
            hs = kernels::walk_histogram(tree.adjacency, tree.leaf_count(), 0, 1000000, 9,
                                         ExecPolicy::Serial);
        });
        const double tp = time_of([&] {
            hp = kernels::walk_histogram(tree.adjacency, tree.leaf_count(), 0, 1000000, 9,
                                         ExecPolicy::Parallel);
        });
        if (hs != hp) std::printf("histogram mismatch!\n");
        row("1e6 stopped walks", ts, tp);
    }
    return 0;
}
