#pragma once

// Run configuration: one JSON document with unit-suffixed keys. Paths inside
// the document are resolved relative to the document's directory.

#include "kerrsq/characterization.hpp"
#include "kerrsq/core_model.hpp"
#include "kerrsq/detection_chain.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kerrsq {

enum class SpectrumMode {
    Detuning,    // swept branch, delta_p x omega x phi
    Locked,      // locking point, power x omega x phi
    Efficiency,  // locked closed forms, eta x power
};

struct RunConfig {
    std::string source;  // config path as given
    std::string text;    // raw bytes, for the input digest
    std::map<std::string, int> lines;  // JSON pointer -> 1-based line

    std::optional<ResonatorParams> resonator;

    // pump
    std::optional<double> omega_p;  // defaults to the cold resonance
    std::vector<double> powers;
    std::vector<SweepDirection> directions{SweepDirection::Decreasing};

    // detection
    std::optional<double> eta;
    std::optional<LossBudget> budget;

    // grids
    std::optional<std::vector<double>> delta_p_grid;
    std::optional<std::vector<double>> omega_grid;
    std::optional<std::vector<double>> phi_grid;

    // spectrum
    SpectrumMode spectrum_mode = SpectrumMode::Detuning;
    std::vector<double> etas;

    // threshold observation
    std::optional<double> p_th_observed;
    std::optional<double> threshold_lambda;

    // fit-transmission
    std::optional<std::string> transmission_csv;
    CouplingRegime regime = CouplingRegime::Over;
    ResonanceFitOptions resonance_options;
    std::vector<std::string> shift_csvs;
    ShiftFitOptions shift_options;

    // fit-dispersion
    std::optional<std::string> resonance_csv;

    // reduce-trace
    std::optional<std::string> trace_csv;
    std::optional<std::string> reference_csv;
    TraceReductionOptions trace_options;

    std::vector<std::string> input_files;  // every referenced file, in document order

    /// "source:line: /pointer" for the closest recorded ancestor of `pointer`.
    [[nodiscard]] std::string where(const std::string& pointer) const;
    /// Throws ConfigError located at `pointer`.
    [[noreturn]] void fail(const std::string& pointer, const std::string& message) const;

    [[nodiscard]] const ResonatorParams& require_resonator() const;
    [[nodiscard]] double pump_omega() const;
    [[nodiscard]] const std::vector<double>& require_grid(const std::optional<std::vector<double>>& g,
                                                          const std::string& pointer) const;
    /// Explicit eta when given, else the budget's, else 1.
    [[nodiscard]] double efficiency() const;
};

/// Parses and validates a config. Syntax errors report line and column;
/// semantic errors report the JSON pointer and the line it sits on.
[[nodiscard]] RunConfig parse_config(const std::string& text, const std::string& source,
                                     const std::string& base_dir);
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Loss budget JSON: [{"label": ..., "loss_db": ...}, ...].
[[nodiscard]] LossBudget parse_loss_budget(const std::string& text, const std::string& source);

/// Line of every JSON pointer in a document (keys and array elements).
[[nodiscard]] std::map<std::string, int> json_pointer_lines(const std::string& text);

}  // namespace kerrsq
