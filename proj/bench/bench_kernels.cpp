// Serial vs parallel timing for the four hot kernels, with a bitwise
// comparison of the results.  The parallel paths are only allowed to change
// wall time, never a single bit of output, so max|delta| must print 0.

#include <chrono>
#include <cstdio>
#include <vector>

#include "asep/bethe.hpp"
#include "asep/exec.hpp"
#include "asep/generic.hpp"
#include "asep/integrability.hpp"
#include "asep/model.hpp"
#include "asep/steady.hpp"
#include "asep/types.hpp"

using namespace asep;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class F>
double timed(F&& f) {
    const double t0 = now_ms();
    f();
    return now_ms() - t0;
}

void report(const char* name, double serial_ms, double parallel_ms,
            double max_delta) {
    std::printf("%-28s  serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   max|delta| %g\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms,
                max_delta);
}

double diff(const std::vector<BetheRootSet>& a,
            const std::vector<BetheRootSet>& b) {
    if (a.size() != b.size()) return 1.0;
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].roots.size() != b[i].roots.size()) return 1.0;
        for (std::size_t j = 0; j < a[i].roots.size(); ++j) {
            worst = std::max(worst, std::abs(a[i].roots[j] - b[i].roots[j]));
        }
    }
    return worst;
}

}  // namespace

int main() {
    std::printf("workers available: %d\n\n", worker_count());

    {
        const BoundaryRates r{0.23, 0.32, 0.47, 0.6, 0.1, 9};
        MatrixXcd serial, parallel;
        const double ts =
            timed([&] { serial = transfer_matrix(complexd(1.7, 0.3), r, Exec::serial); });
        const double tp =
            timed([&] { parallel = transfer_matrix(complexd(1.7, 0.3), r, Exec::parallel); });
        report("transfer matrix (n=9)", ts, tp,
               (serial - parallel).cwiseAbs().maxCoeff());
    }
    {
        const BoundaryRates r{0.23, 0.32, 0.47, 0.6, 0.1, 6};
        std::vector<BetheRootSet> serial, parallel;
        const double ts =
            timed([&] { serial = solve_baes(TQKind::I, r, 256, 1, Exec::serial); });
        const double tp =
            timed([&] { parallel = solve_baes(TQKind::I, r, 256, 1, Exec::parallel); });
        report("bethe solver (n=6, 256 starts)", ts, tp, diff(serial, parallel));
    }
    {
        BoundaryRates r{0.23, 0.32, 0.17, 0.0, 0.5, 12};
        r.delta = solve_delta_for_class(r, 6);
        VectorXd serial, parallel;
        const double ts =
            timed([&] { serial = steady_state_formula(r, 6, Exec::serial); });
        const double tp =
            timed([&] { parallel = steady_state_formula(r, 6, Exec::parallel); });
        report("steady state (n=12, m=6)", ts, tp,
               (serial - parallel).cwiseAbs().maxCoeff());
    }
    {
        const BoundaryRates r{1.30, 0.46, 2.11, 1.0, 0.5, 8};
        std::vector<double> grid;
        for (int i = 0; i < 64; ++i) grid.push_back(-3.0 + 6.0 * i / 63.0);
        std::vector<CurrentScanRow> serial, parallel;
        const double ts = timed(
            [&] { serial = scan_current(r, ScanVariable::theta, grid, Exec::serial); });
        const double tp = timed(
            [&] { parallel = scan_current(r, ScanVariable::theta, grid, Exec::parallel); });
        double worst = 0;
        for (std::size_t i = 0; i < serial.size(); ++i) {
            worst = std::max(worst,
                             std::abs(serial[i].current - parallel[i].current));
        }
        report("current scan (n=8, 64 pts)", ts, tp, worst);
    }
    return 0;
}
