// Exit codes: 0 success, 1 usage or I/O error, 2 a block did not reach its
// tolerance, 3 a chirp result fell outside its reference band.

#include "commands.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    using namespace sparsimg::cli;
    CLI::App app{"Sparse approximation of grayscale images over redundant separable dictionaries"};
    app.require_subcommand(1);

    RunConfig run;
    auto* approx = app.add_subcommand("approximate", "Encode a PGM image and write decomposition, reconstruction and report");
    approx->add_option("input", run.input, "Input PGM")->required()->check(CLI::ExistingFile);
    approx->add_option("-o,--output", run.output, "Decomposition file")->required();
    approx->add_option("--recon", run.recon, "Reconstructed PGM (default: output with .pgm extension)");
    approx->add_option("--report", run.report, "Report CSV (default: stdout)");
    approx->add_option("--dict", run.dict, "mixed, rdc, rdw, rr:<seed> or dct")->capture_default_str();
    approx->add_option("--method", run.method, "mp2d, omp2d or spmp2d (default: omp2d for block <= 24, else spmp2d)");
    approx->add_option("--block", run.block, "Block side")->capture_default_str()->check(CLI::PositiveNumber);
    approx->add_option("--psnr", run.target_db, "Target PSNR in dB")->capture_default_str();
    approx->add_option("-p", run.p, "SPMP2D selections per projection round")->capture_default_str();
    approx->add_option("--eps", run.eps, "SPMP2D projection tolerance relative to the block norm")->capture_default_str();
    approx->add_option("--threads", run.threads, "Worker threads (0: all cores)")->capture_default_str();

    std::string rec_in, rec_out;
    auto* rec = app.add_subcommand("reconstruct", "Rebuild an image from a decomposition file");
    rec->add_option("input", rec_in, "Decomposition file")->required()->check(CLI::ExistingFile);
    rec->add_option("-o,--output", rec_out, "Output PGM")->required();

    std::string met_ref, met_approx, met_dec;
    auto* met = app.add_subcommand("metrics", "PSNR, MSSIM and optionally SR of an approximation");
    met->add_option("reference", met_ref, "Reference PGM")->required()->check(CLI::ExistingFile);
    met->add_option("approx", met_approx, "Approximation PGM")->required()->check(CLI::ExistingFile);
    met->add_option("--decomp", met_dec, "Decomposition file for SR and atom count")->check(CLI::ExistingFile);

    BenchConfig bench;
    auto* b = app.add_subcommand("bench", "SR, PSNR, MSSIM and time over images, methods, dictionaries and block sizes");
    b->add_option("images", bench.images, "Input PGMs");
    b->add_option("--synthetic", bench.synthetic, "Number of synthetic star-fields")->check(CLI::NonNegativeNumber);
    b->add_option("--size", bench.size, "Synthetic image side")->capture_default_str()->check(CLI::PositiveNumber);
    b->add_option("--stars", bench.stars, "Stars per synthetic image (default: one per 200 pixels)");
    b->add_option("--seed", bench.seed, "First synthetic seed")->capture_default_str();
    b->add_option("--blocks", bench.blocks, "Block sides")->delimiter(',')->capture_default_str();
    b->add_option("--methods", bench.methods, "mp2d, omp2d, spmp2d, dct")->delimiter(',')->capture_default_str();
    b->add_option("--dicts", bench.dicts, "Dictionary specs")->delimiter(',')->capture_default_str();
    b->add_option("--repeats", bench.repeats, "Timed runs per cell")->capture_default_str();
    b->add_option("--psnr", bench.target_db, "Target PSNR in dB")->capture_default_str();
    b->add_option("-p", bench.p, "SPMP2D selections per projection round")->capture_default_str();
    b->add_option("--eps", bench.eps, "SPMP2D projection tolerance relative to the block norm")->capture_default_str();
    b->add_option("--threads", bench.threads, "Worker threads (0: all cores)")->capture_default_str();
    b->add_option("--csv", bench.csv, "Output CSV (default: stdout)");

    ChirpConfig chirp;
    auto* ch = app.add_subcommand("chirp", "Chirp experiment: OMP, MP and SPMP atom counts");
    ch->add_option("-n", chirp.n, "Signal length")->capture_default_str()->check(CLI::Range(2, 1 << 20));
    ch->add_option("--rho-scale", chirp.rho_scale, "Multiplier on the tolerance 1e-3 |f|")->capture_default_str();
    ch->add_option("--csv", chirp.csv, "Write the K table as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kIoError;
    }

    if (*approx) return cmd_approximate(run);
    if (*rec) return cmd_reconstruct(rec_in, rec_out);
    if (*met) return cmd_metrics(met_ref, met_approx, met_dec);
    if (*b) return cmd_bench(bench);
    return cmd_chirp(chirp);
}
