// Compares the parallel sensitivity batch against the serial reference on a
// large synthetic network and reports the speedup.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include "tsopt/case_io.hpp"
#include "tsopt/sensitivity.hpp"

using namespace tsopt;

namespace {
double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}
}  // namespace

int main(int argc, char** argv) {
    int n_buses = 300, repeats = 5;
    if (argc > 1) n_buses = std::atoi(argv[1]);
    if (argc > 2) repeats = std::atoi(argv[2]);
    const int n_lines = n_buses * 3 / 2;

    CaseFile c = generate_case(7, n_buses, n_lines, 1, 0.5);
    Network net = c.to_network();
    Topology topo = net.initial_topology();
    std::vector<int> monitored, candidates;
    for (int l = 0; l < net.n_lines(); ++l) {
        monitored.push_back(l);
        candidates.push_back(l);
    }

    std::printf("network: %d buses, %d lines; %d monitored x %d candidates, %d repeats\n",
                net.n_buses(), net.n_lines(), static_cast<int>(monitored.size()),
                static_cast<int>(candidates.size()), repeats);

    // warm up once so page faults and allocator noise stay out of the timing
    SensitivitySet ref = sensitivity_set_serial(net, topo, monitored, candidates);

    double serial_best = 1e30, parallel_best = 1e30;
    for (int r = 0; r < repeats; ++r) {
        double t0 = now_s();
        SensitivitySet s = sensitivity_set_serial(net, topo, monitored, candidates);
        serial_best = std::min(serial_best, now_s() - t0);
        t0 = now_s();
        SensitivitySet p = sensitivity_set(net, topo, monitored, candidates);
        parallel_best = std::min(parallel_best, now_s() - t0);

        // the two kernels must agree bit for bit
        for (int m = 0; m < p.lodf.rows(); ++m)
            for (int cc = 0; cc < p.lodf.cols(); ++cc) {
                const double a = p.lodf(m, cc), b = s.lodf(m, cc);
                if (a != b && !(std::isnan(a) && std::isnan(b))) {
                    std::printf("MISMATCH at (%d, %d): %.17g vs %.17g\n", m, cc, a, b);
                    return 1;
                }
            }
    }
    std::printf("serial   best: %8.3f ms\n", serial_best * 1e3);
    std::printf("parallel best: %8.3f ms\n", parallel_best * 1e3);
    std::printf("speedup: %.2fx\n", serial_best / parallel_best);
    return 0;
}
