#include "sparsimg/chirp.hpp"

#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace sparsimg {

std::string ChirpRow::csv_header() {
    return "name,method,m,p,k,residual_norm,iterations,seconds,band,in_band";
}

std::string ChirpRow::csv_row() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6e,%d,%.3f", residual_norm, iterations, seconds);
    return name + "," + method + "," + std::to_string(m) + "," + std::to_string(p) + "," + std::to_string(k) + ","
           + buf + "," + (band.empty() ? "NA" : band) + "," + (in_band ? "1" : "0");
}

namespace {

template <typename Run>
ChirpRow timed(std::string name, std::string method, int m, int p, Run run) {
    const auto start = std::chrono::steady_clock::now();
    const Decomposition1D d = run();
    ChirpRow row;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.name = std::move(name);
    row.method = std::move(method);
    row.m = m;
    row.p = p;
    row.k = static_cast<int>(d.size());
    row.residual_norm = d.residual_norm;
    row.iterations = d.iterations;
    return row;
}

void apply_band(ChirpRow& row, int lo, int hi) {
    row.band = "[" + std::to_string(lo) + ";" + std::to_string(hi) + "]";
    row.in_band = row.k >= lo && row.k <= hi;
}

}  // namespace

std::vector<ChirpRow> run_chirp_experiment(int n, double rho_scale, const StepObserver& mp_observer) {
    if (!(rho_scale > 0.0)) {
        throw std::invalid_argument("run_chirp_experiment: rho scale must be positive");
    }
    const Vector f = chirp_signal(n);
    const double rho = rho_scale * 1e-3 * f.norm();
    const double eps = 1e-9 * f.norm();
    const Dictionary1D dc = build_rdc(n, n);
    const Dictionary1D rdc = build_rdc(n, 2 * n);

    std::vector<ChirpRow> rows;
    rows.push_back(timed("dc-omp", "omp", n, 0, [&] { return omp(f, dc, rho, n); }));
    rows.push_back(timed("rdc-omp", "omp", 2 * n, 0, [&] { return omp(f, rdc, rho, n); }));
    rows.push_back(timed("rdc-mp", "mp", 2 * n, 0, [&] { return mp(f, rdc, rho, 10 * n, mp_observer); }));
    for (int p : {3, 10}) {
        SpmpOptions opt;
        opt.rho = rho;
        opt.eps = eps;
        opt.p = p;
        opt.cap = 10 * n;
        rows.push_back(timed("rdc-spmp" + std::to_string(p), "spmp", 2 * n, p, [&] { return spmp(f, rdc, opt); }));
    }

    if (n == 2000 && rho_scale == 1.0) {
        apply_band(rows[0], 678, 688);
        apply_band(rows[1], 272, 300);
        apply_band(rows[2], 1556, 1720);
        apply_band(rows[3], rows[1].k - 5, rows[1].k + 5);
        apply_band(rows[4], 285, 315);
    }
    return rows;
}

}  // namespace sparsimg
