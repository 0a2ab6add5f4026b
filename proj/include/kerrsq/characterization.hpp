#pragma once

// Inverse problems: resonator rates from transmission sweeps, the total
// frequency-shift coefficient from power-dependent sweeps, the Kerr gain from
// the comb threshold, dispersion from resonance lists, and squeezing levels
// from zero-span homodyne traces.

#include "kerrsq/core_model.hpp"

#include <string>
#include <vector>

namespace kerrsq {

enum class FrequencyAxis {
    Detuning,       // samples are delta_p = omega_p - omega_r
    AbsoluteOmega,  // samples are omega_p
};

struct TransmissionTrace {
    FrequencyAxis axis = FrequencyAxis::Detuning;
    std::vector<double> frequency;     // rad/s, strictly monotone
    std::vector<double> transmission;  // [0, 1]
    double p_in = 0.0;
    SweepDirection direction = SweepDirection::Decreasing;

    void validate() const;
};

enum class CouplingRegime { Over, Under };

struct ResonanceFitOptions {
    double no_dip_threshold = 0.95;    // NoDip when min(T) exceeds this
    double poor_fit_threshold = 0.1;   // PoorFit when ||r|| / ||1 - T|| exceeds this
};

struct ResonanceFit {
    double omega_r = 0.0;  // resonance centre, in the trace's frequency frame
    double kappa = 0.0;
    double gamma = 0.0;
    double omega_r_err = 0.0;
    double kappa_err = 0.0;
    double gamma_err = 0.0;
    double residual_norm = 0.0;
    double relative_residual = 0.0;
    int evaluations = 0;
};

/// Low-power Lorentzian dip fit of T = ((kappa-gamma)^2/4 + D^2) / ((Gamma/2)^2 + D^2).
/// The data fix Gamma and |kappa - gamma|; the coupling regime picks which rate
/// is the larger one.
[[nodiscard]] ResonanceFit fit_linear_resonance(const TransmissionTrace& trace,
                                                CouplingRegime regime,
                                                const ResonanceFitOptions& options = {});

struct ShiftFitSetup {
    double kappa = 0.0;
    double gamma = 0.0;
    double omega_r = 0.0;  // needed for AbsoluteOmega traces and photon energy
    double omega_p = 0.0;  // photon energy reference; omega_r when 0
};

struct ShiftFitOptions {
    double g_sum_max = 1e4;  // rad/s, upper end of the searched coefficient
    int scan_points = 400;
};

struct ShiftFit {
    double g_sum = 0.0;
    double g_sum_err = 0.0;
    double residual_norm = 0.0;
    double relative_residual = 0.0;
};

/// Fits g_opt + g_th to sweeps at two or more powers by matching the
/// branch-continued steady-state model to every trace at once. Only the sum is
/// identifiable from classical traces.
///
/// Throws Degenerate when even g_sum_max would move the locking point of the
/// strongest trace by less than one sample spacing.
[[nodiscard]] ShiftFit fit_shift_coefficient(const std::vector<TransmissionTrace>& traces,
                                             const ShiftFitSetup& setup,
                                             const ShiftFitOptions& options = {});

/// g_opt = Gamma^3 hbar omega_p / (8 kappa P_th).
[[nodiscard]] double g_opt_from_threshold(double p_th, double kappa, double gamma,
                                          double lambda_p);

struct ResonanceEntry {
    int mu = 0;
    double omega = 0.0;
};

struct ResonanceList {
    std::vector<ResonanceEntry> entries;
};

enum class DispersionRegime { Anomalous, Normal, Zero };

[[nodiscard]] const char* to_string(DispersionRegime r) noexcept;

struct DispersionFit {
    double omega_0 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double omega_0_err = 0.0;
    double d1_err = 0.0;
    double d2_err = 0.0;
    std::vector<int> mu;
    std::vector<double> dint;      // omega_mu - omega_0 - d1 mu
    std::vector<double> residual;  // omega_mu - model
    double residual_norm = 0.0;
    DispersionRegime regime = DispersionRegime::Zero;
};

/// Ordinary least squares of omega_mu on {1, mu, mu^2/2}.
[[nodiscard]] DispersionFit fit_dispersion(const ResonanceList& resonances);

struct ZeroSpanMetadata {
    double center_hz = 0.0;
    double rbw_hz = 0.0;
    double vbw_hz = 0.0;
};

struct ZeroSpanTrace {
    std::vector<double> t;          // s
    std::vector<double> power_dbm;
    ZeroSpanMetadata metadata;
};

struct TraceReductionOptions {
    double low_percentile = 1.0;
    double high_percentile = 99.0;
    bool detrend_reference = false;  // subtract a linear fit of the reference instead of its mean
};

struct TraceReduction {
    double v_s_db = 0.0;
    double v_as_db = 0.0;
    double reference_level_dbm = 0.0;
    double reference_slope_db_s = 0.0;
};

/// Squeezing and anti-squeezing in dB relative to the coherent (shot-noise)
/// reference, read from robust extrema of the phase-swept trace.
[[nodiscard]] TraceReduction reduce_homodyne_trace(const ZeroSpanTrace& trace,
                                                   const ZeroSpanTrace& reference,
                                                   const TraceReductionOptions& options = {});

/// Linear-interpolated percentile (pct in [0, 100]) of unsorted data.
[[nodiscard]] double percentile(std::vector<double> values, double pct);

}  // namespace kerrsq
