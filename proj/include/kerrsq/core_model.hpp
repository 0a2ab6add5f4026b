#pragma once

// Physical quantities and scalar formulas shared by every module.
//
// Unit convention: every rate, gain and detuning is an angular frequency in
// rad/s. Powers are in W, lengths in m. Nothing in the library converts
// between Hz and rad/s implicitly.

#include <optional>
#include <vector>

namespace kerrsq {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double c = 2.99792458e8;        // m/s
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

[[nodiscard]] double omega_from_wavelength(double lambda_m);
[[nodiscard]] double wavelength_from_omega(double omega_rad_s);

struct ResonatorGeometry {
    double radius_m = 0.0;
    double n_eff = 0.0;
};

struct ResonatorParams {
    double kappa = 0.0;    // coupling rate
    double gamma = 0.0;    // intrinsic loss rate
    double g_opt = 0.0;    // Kerr frequency shift per photon
    double g_th = 0.0;     // thermal frequency shift per photon
    double omega_r = 0.0;  // cold resonance
    std::optional<ResonatorGeometry> geometry;

    /// Throws InvalidParameter unless kappa > 0, gamma, g_opt, g_th >= 0 and
    /// omega_r > 0 (all finite).
    void validate() const;
};

/// Builds a validated parameter set. At least one of lambda_r / omega_r must be
/// given; when both are, they must agree to 1e-12 relative.
[[nodiscard]] ResonatorParams make_resonator(double kappa, double gamma, double g_opt, double g_th,
                                             std::optional<double> lambda_r,
                                             std::optional<double> omega_r,
                                             std::optional<ResonatorGeometry> geometry = std::nullopt);

enum class SweepDirection { Decreasing, Increasing };

[[nodiscard]] const char* to_string(SweepDirection d) noexcept;

struct PumpConfig {
    double p_in = 0.0;     // W
    double omega_p = 0.0;  // photon energy reference for beta_in
    std::vector<double> delta_p_grid;  // omega_p - omega_r sweep points
    SweepDirection direction = SweepDirection::Decreasing;

    void validate() const;
};

struct DriveState {
    double sigma_tilde = 0.0;  // P_in / P_th
    double x = 0.0;            // distance to the critical point
    double n_fluct_out = 0.0;  // (4 eta kappa / Gamma) (P_in / P_th)
    double r = 0.0;            // asinh(n_fluct_out)
};

[[nodiscard]] double total_loss(const ResonatorParams& params);

/// Loaded quality factor omega_r / Gamma.
[[nodiscard]] double quality_factor(const ResonatorParams& params);

/// Input photon flux |beta_in|^2 = P_in / (hbar omega_p), photons per second.
[[nodiscard]] double input_photon_flux(double p_in, double omega_p);

enum class ZeroGainPolicy {
    Infinite,  // g_opt == 0 returns +inf (no threshold)
    Throw,     // g_opt == 0 throws ZeroGain
};

/// P_th = Gamma^3 hbar omega_p / (8 g_opt kappa).
[[nodiscard]] double threshold_power(const ResonatorParams& params, double omega_p,
                                     ZeroGainPolicy policy = ZeroGainPolicy::Infinite);

/// Dimensionless drive at the injection-locking point. With an infinite
/// threshold (g_opt == 0) every field is zero. The fluctuation flux uses the
/// locked form linear in P_in / P_th; see fluctuation_flux() in
/// squeezing_spectrum.hpp for the general expression.
[[nodiscard]] DriveState drive_state(const ResonatorParams& params, double p_in, double omega_p,
                                     double eta = 1.0,
                                     ZeroGainPolicy policy = ZeroGainPolicy::Infinite);

/// x = s / sqrt(1 + s^2) with s = P_in / P_th. Always below one for finite s.
[[nodiscard]] double critical_distance(double sigma_tilde);

/// Power decibels. Throws NonPositive for v <= 0.
[[nodiscard]] double db_from_linear(double v);
[[nodiscard]] double linear_from_db(double db);

}  // namespace kerrsq
