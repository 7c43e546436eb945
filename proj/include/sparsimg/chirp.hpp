#pragma once

#include "sparsimg/pursuit1d.hpp"

#include <string>
#include <vector>

namespace sparsimg {

struct ChirpRow {
    std::string name;       // dc-omp, rdc-omp, rdc-mp, rdc-spmp3, rdc-spmp10
    std::string method;
    int m = 0;              // dictionary size
    int p = 0;
    int k = 0;              // distinct atoms
    double residual_norm = 0.0;
    int iterations = 0;
    double seconds = 0.0;
    bool in_band = true;
    std::string band;       // empty when no band applies

    static std::string csv_header();
    std::string csv_row() const;
};

// Chirp f(t) = cos(2 pi t^2) of length n approximated to rho = rho_scale *
// 1e-3 * |f| with OMP over the DC basis, then OMP, MP, SPMP p=3 and SPMP
// p=10 over RDC(n, 2n). Bands are checked only for n = 2000, rho_scale = 1.
// mp_observer sees every step of the MP run.
std::vector<ChirpRow> run_chirp_experiment(int n = 2000, double rho_scale = 1.0,
                                           const StepObserver& mp_observer = {});

}  // namespace sparsimg
