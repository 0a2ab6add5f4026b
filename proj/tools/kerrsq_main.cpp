#include "kerrsq/commands.hpp"
#include "kerrsq/config.hpp"
#include "kerrsq/error.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Kerr microresonator squeezing model and characterization tools"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::string out_path;
    int threads = 1;
    std::uint64_t seed = 0;
    std::string format;
    app.add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "output file (stdout when omitted)");
    app.add_option("--threads", threads, "worker threads for grid evaluation")->check(CLI::Range(1, 1024));
    app.add_option("--seed", seed, "seed recorded in reports");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    const std::map<std::string, std::string> about{
        {"sweep", "branch-continued steady states over the detuning grid"},
        {"spectrum", "quadrature variance over the configured grids"},
        {"locking", "injection-locking point per power"},
        {"threshold", "loss rate, Q and parametric threshold"},
        {"report", "summary at each configured power"},
        {"fit-transmission", "resonance rates and frequency-shift coefficient"},
        {"fit-dispersion", "D1, D2 and integrated dispersion"},
        {"reduce-trace", "squeezing levels from a zero-span trace"},
        {"losses", "detection efficiency from the loss budget"},
    };
    for (const auto& name : kerrsq::command_names()) {
        const auto it = about.find(name);
        app.add_subcommand(name, it == about.end() ? std::string() : it->second);
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        const kerrsq::RunConfig cfg = kerrsq::load_config(config_path);
        kerrsq::CommandOptions opt;
        opt.threads = threads;
        opt.seed = seed;
        if (format == "csv") opt.format = kerrsq::OutputFormat::Csv;
        if (format == "json") opt.format = kerrsq::OutputFormat::Json;

        const kerrsq::CommandOutput result = kerrsq::run_command(command, cfg, opt);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
        if (out_path.empty()) {
            std::cout << result.body;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            out << result.body;
            if (!out) throw kerrsq::Error(kerrsq::ErrorCode::IoError, "cannot write '" + out_path + "'");
        }
    } catch (const kerrsq::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
