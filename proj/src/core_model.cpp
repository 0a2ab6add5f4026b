#include "kerrsq/core_model.hpp"

#include "kerrsq/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace kerrsq {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

double omega_from_wavelength(double lambda_m) {
    if (!(lambda_m > 0.0) || !std::isfinite(lambda_m)) {
        throw Error(ErrorCode::InvalidParameter, "wavelength must be positive");
    }
    return 2.0 * constants::pi * constants::c / lambda_m;
}

double wavelength_from_omega(double omega_rad_s) {
    if (!(omega_rad_s > 0.0) || !std::isfinite(omega_rad_s)) {
        throw Error(ErrorCode::InvalidParameter, "angular frequency must be positive");
    }
    return 2.0 * constants::pi * constants::c / omega_rad_s;
}

void ResonatorParams::validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw Error(ErrorCode::InvalidParameter, "kappa must be > 0");
    }
    if (!finite_nonneg(gamma)) throw Error(ErrorCode::InvalidParameter, "gamma must be >= 0");
    if (!finite_nonneg(g_opt)) throw Error(ErrorCode::InvalidParameter, "g_opt must be >= 0");
    if (!finite_nonneg(g_th)) throw Error(ErrorCode::InvalidParameter, "g_th must be >= 0");
    if (!(omega_r > 0.0) || !std::isfinite(omega_r)) {
        throw Error(ErrorCode::InvalidParameter, "omega_r must be > 0");
    }
    if (geometry) {
        if (!(geometry->radius_m > 0.0) || !(geometry->n_eff > 0.0)) {
            throw Error(ErrorCode::InvalidParameter, "ring radius and n_eff must be > 0");
        }
    }
}

ResonatorParams make_resonator(double kappa, double gamma, double g_opt, double g_th,
                               std::optional<double> lambda_r, std::optional<double> omega_r,
                               std::optional<ResonatorGeometry> geometry) {
    ResonatorParams p;
    p.kappa = kappa;
    p.gamma = gamma;
    p.g_opt = g_opt;
    p.g_th = g_th;
    p.geometry = geometry;
    if (omega_r && lambda_r) {
        const double from_lambda = omega_from_wavelength(*lambda_r);
        if (std::abs(from_lambda - *omega_r) > 1e-12 * std::abs(*omega_r)) {
            std::ostringstream os;
            os.precision(17);
            os << "omega_r " << *omega_r << " inconsistent with lambda_r " << *lambda_r
               << " (expected " << from_lambda << ")";
            throw Error(ErrorCode::InvalidParameter, os.str());
        }
        p.omega_r = *omega_r;
    } else if (omega_r) {
        p.omega_r = *omega_r;
    } else if (lambda_r) {
        p.omega_r = omega_from_wavelength(*lambda_r);
    } else {
        throw Error(ErrorCode::InvalidParameter, "resonance needs lambda_r or omega_r");
    }
    p.validate();
    return p;
}

const char* to_string(SweepDirection d) noexcept {
    return d == SweepDirection::Decreasing ? "down" : "up";
}

void PumpConfig::validate() const {
    if (!finite_nonneg(p_in)) throw Error(ErrorCode::InvalidParameter, "p_in must be >= 0");
    if (!(omega_p > 0.0) || !std::isfinite(omega_p)) {
        throw Error(ErrorCode::InvalidParameter, "omega_p must be > 0");
    }
    for (std::size_t i = 1; i < delta_p_grid.size(); ++i) {
        const double d0 = delta_p_grid[1] - delta_p_grid[0];
        const double di = delta_p_grid[i] - delta_p_grid[i - 1];
        if (!(d0 * di > 0.0)) {
            throw Error(ErrorCode::InvalidParameter, "detuning grid must be strictly monotone");
        }
    }
}

double total_loss(const ResonatorParams& params) { return params.kappa + params.gamma; }

double quality_factor(const ResonatorParams& params) {
    return params.omega_r / total_loss(params);
}

double input_photon_flux(double p_in, double omega_p) {
    return p_in / (constants::hbar * omega_p);
}

double threshold_power(const ResonatorParams& params, double omega_p, ZeroGainPolicy policy) {
    if (params.g_opt == 0.0) {
        if (policy == ZeroGainPolicy::Throw) {
            throw Error(ErrorCode::ZeroGain, "g_opt = 0: no four-wave-mixing threshold");
        }
        return std::numeric_limits<double>::infinity();
    }
    const double big_gamma = total_loss(params);
    return big_gamma * big_gamma * big_gamma * constants::hbar * omega_p /
           (8.0 * params.g_opt * params.kappa);
}

double critical_distance(double sigma_tilde) {
    // s / sqrt(1 + s^2) written to stay finite for huge s
    if (sigma_tilde > 1e150) return 1.0 - 0.5 / (sigma_tilde * sigma_tilde);
    return sigma_tilde / std::sqrt(1.0 + sigma_tilde * sigma_tilde);
}

DriveState drive_state(const ResonatorParams& params, double p_in, double omega_p, double eta,
                       ZeroGainPolicy policy) {
    if (!finite_nonneg(p_in)) throw Error(ErrorCode::InvalidParameter, "p_in must be >= 0");
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw Error(ErrorCode::InvalidEfficiency, "eta must lie in [0, 1]");
    }
    const double p_th = threshold_power(params, omega_p, policy);
    DriveState s;
    if (std::isinf(p_th)) return s;
    s.sigma_tilde = p_in / p_th;
    s.x = critical_distance(s.sigma_tilde);
    s.n_fluct_out = 4.0 * eta * params.kappa / total_loss(params) * s.sigma_tilde;
    s.r = std::asinh(s.n_fluct_out);
    return s;
}

double db_from_linear(double v) {
    if (!(v > 0.0)) throw Error(ErrorCode::NonPositive, "dB conversion needs a positive ratio");
    return 10.0 * std::log10(v);
}

double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace kerrsq
