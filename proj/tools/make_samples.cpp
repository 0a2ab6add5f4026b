// Writes the model-generated sample inputs under data/samples.

#include "kerrsq/core_model.hpp"
#include "kerrsq/csv.hpp"
#include "kerrsq/squeezing_spectrum.hpp"
#include "kerrsq/synthetic.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace {

void save(const std::filesystem::path& path, const kerrsq::CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    kerrsq::write_csv(out, table);
    std::cout << path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate sample input files from the forward models"};
    std::string out_dir = "data/samples";
    std::uint64_t seed = 1;
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--seed", seed, "noise seed");
    CLI11_PARSE(app, argc, argv);

    namespace fs = std::filesystem;
    using namespace kerrsq;
    fs::create_directories(out_dir);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const double kappa = 515e6;
    const double gamma = 192e6;
    const double big_gamma = kappa + gamma;
    const double omega = omega_from_wavelength(1550e-9);

    // cold-cavity dip, 0.5 % noise
    TransmissionTrace cold = linear_transmission_trace(kappa, gamma, 0.0,
                                                       linspace(-5.0 * big_gamma, 5.0 * big_gamma, 401));
    add_multiplicative_noise(cold, 0.005, rng);
    save(fs::path(out_dir) / "transmission_cold.csv", transmission_to_csv(cold));

    // down-sweeps at three powers, 1 % noise
    ResonatorParams hot = make_resonator(kappa, gamma, 1.4, 127.0, std::nullopt, omega);
    for (double p_mw : {2.0, 5.0, 8.0}) {
        PumpConfig pump;
        pump.p_in = p_mw * 1e-3;
        pump.omega_p = omega;
        pump.delta_p_grid = linspace(10.0 * big_gamma, -70.0 * big_gamma, 801);
        pump.direction = SweepDirection::Decreasing;
        TransmissionTrace tr = sweep_transmission_trace(hot, pump);
        add_multiplicative_noise(tr, 0.01, rng);
        save(fs::path(out_dir) / ("transmission_" + std::to_string(static_cast<int>(p_mw)) + "mw.csv"),
             transmission_to_csv(tr));
    }

    // resonance list with 5e6 rad/s jitter
    ResonanceList res = quadratic_resonances(omega, 0.68e12, 7.76e6, -50, 50);
    for (auto& e : res.entries) e.omega += 5e6 * normal(rng);
    save(fs::path(out_dir) / "resonances.csv", resonances_to_csv(res));

    // zero-span pair at the operating point, 0.05 dB detector jitter
    const double p_in = 7.59e-3;
    const double p_th = 7.89e-3;
    const double eta = linear_from_db(-5.357);
    const ZeroSpanMetadata meta{100e6, 300e3, 300.0};
    auto [trace, reference] =
        homodyne_traces(p_in / p_th, 4.0 * eta * kappa / big_gamma, -60.0, 4001, 2.0, 4.0 * constants::pi, meta);
    for (auto& v : trace.power_dbm) v += 0.05 * normal(rng);
    for (auto& v : reference.power_dbm) v += 0.05 * normal(rng);
    save(fs::path(out_dir) / "zero_span_trace.csv", zero_span_to_csv(trace));
    save(fs::path(out_dir) / "zero_span_reference.csv", zero_span_to_csv(reference));

    std::ofstream budget(fs::path(out_dir) / "loss_budget.json", std::ios::binary);
    budget << "[\n"
              "  {\"label\": \"waveguide to fiber coupling\", \"loss_db\": -3.9},\n"
              "  {\"label\": \"90/10 beam splitter\", \"loss_db\": -0.457},\n"
              "  {\"label\": \"beam splitter to detector\", \"loss_db\": -1.0}\n"
              "]\n";
    std::cout << (fs::path(out_dir) / "loss_budget.json").string() << '\n';
    return 0;
}
