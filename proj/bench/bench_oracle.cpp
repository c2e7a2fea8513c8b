// Compares the serial reference kernels of the exhaustive oracle against
// the OpenMP-parallel defaults, verifying agreement while timing both.
#include <chrono>
#include <cstdio>
#include <random>

#include <CLI11.hpp>

#include "mts/oracle.hpp"
#include "../tests/support/random_bn.hpp"

using namespace mts;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oracle kernel benchmark: serial reference vs OpenMP"};
    int instances = 20;
    int n = 10;
    int k = 2;
    unsigned seed = 12345;
    app.add_option("--instances", instances, "networks per kernel");
    app.add_option("-n,--dim", n, "network dimension (<= 12)");
    app.add_option("-k", k, "reprogramming bound (<= 3)");
    app.add_option("--seed", seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    std::mt19937 rng(seed);
    std::vector<BooleanNetwork> nets;
    std::vector<PartialAssignment> markers;
    for (int i = 0; i < instances; ++i) {
        nets.push_back(testing::random_bn(rng, n));
        markers.push_back(testing::random_marker(rng, n));
    }

    double mts_serial = 0, mts_parallel = 0;
    size_t mismatches = 0;
    for (int i = 0; i < instances; ++i) {
        auto t0 = Clock::now();
        auto a = oracle::brute_mts_serial(nets[i]);
        mts_serial += ms_since(t0);
        t0 = Clock::now();
        auto b = oracle::brute_mts(nets[i]);
        mts_parallel += ms_since(t0);
        if (a != b)
            ++mismatches;
    }

    double rep_serial = 0, rep_parallel = 0;
    int rep_n = std::min(n, 8);  // candidate space grows fast
    for (int i = 0; i < instances; ++i) {
        BooleanNetwork f = testing::random_bn(rng, rep_n);
        PartialAssignment m = testing::random_marker(rng, rep_n);
        auto t0 = Clock::now();
        auto a = oracle::brute_reprogramming_serial(f, m, k);
        rep_serial += ms_since(t0);
        t0 = Clock::now();
        auto b = oracle::brute_reprogramming(f, m, k);
        rep_parallel += ms_since(t0);
        if (a != b)
            ++mismatches;
    }

    std::printf("kernel            n  instances   serial_ms  parallel_ms  speedup\n");
    std::printf("mts-enumeration  %2d  %9d  %10.1f  %11.1f  %6.2fx\n", n,
                instances, mts_serial, mts_parallel,
                mts_parallel > 0 ? mts_serial / mts_parallel : 0.0);
    std::printf("reprogramming    %2d  %9d  %10.1f  %11.1f  %6.2fx\n", rep_n,
                instances, rep_serial, rep_parallel,
                rep_parallel > 0 ? rep_serial / rep_parallel : 0.0);
    if (mismatches) {
        std::fprintf(stderr, "kernel disagreement on %zu instances\n",
                     mismatches);
        return 1;
    }
    return 0;
}
