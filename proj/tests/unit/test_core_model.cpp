#include "kerrsq/core_model.hpp"
#include "kerrsq/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace kerrsq;

namespace {

ResonatorParams measured() { return make_resonator(515e6, 192e6, 1.4, 127.0, 1550e-9, std::nullopt); }

ResonatorParams design() { return make_resonator(500e6, 50e6, 1.5, 100.0, 1550e-9, std::nullopt); }

}  // namespace

TEST(CoreModel, WavelengthRoundTrip) {
    const double w = omega_from_wavelength(1550e-9);
    EXPECT_NEAR(w, 2.0 * constants::pi * constants::c / 1550e-9, 1e-3);
    EXPECT_NEAR(wavelength_from_omega(w), 1550e-9, 1e-22);
    EXPECT_THROW((void)omega_from_wavelength(0.0), Error);
}

TEST(CoreModel, MakeResonatorChecksConsistency) {
    const double w = omega_from_wavelength(1550e-9);
    EXPECT_NO_THROW((void)make_resonator(1e8, 1e7, 1, 0, 1550e-9, w));
    EXPECT_THROW((void)make_resonator(1e8, 1e7, 1, 0, 1550e-9, w * (1 + 1e-9)), Error);
    EXPECT_THROW((void)make_resonator(1e8, 1e7, 1, 0, std::nullopt, std::nullopt), Error);
    EXPECT_THROW((void)make_resonator(0.0, 1e7, 1, 0, 1550e-9, std::nullopt), Error);
    EXPECT_THROW((void)make_resonator(1e8, -1.0, 1, 0, 1550e-9, std::nullopt), Error);
    EXPECT_THROW((void)make_resonator(1e8, 1e7, -1, 0, 1550e-9, std::nullopt), Error);
}

TEST(CoreModel, TotalLossAndQuality) {
    EXPECT_DOUBLE_EQ(total_loss(measured()), 707e6);
    EXPECT_NEAR(quality_factor(measured()), 1.719e6, 1e3);
    EXPECT_NEAR(quality_factor(design()), 2.21e6, 2e3);
}

TEST(CoreModel, ThresholdPower) {
    const auto p = measured();
    const double w = omega_from_wavelength(1550e-9);
    const double expected = std::pow(707e6, 3) * constants::hbar * w / (8.0 * 1.4 * 515e6);
    EXPECT_NEAR(threshold_power(p, w) / expected, 1.0, 1e-14);
    EXPECT_NEAR(threshold_power(p, w), 7.852e-3, 1e-6);
    EXPECT_NEAR(threshold_power(design(), w), 3.554e-3, 1e-6);
}

TEST(CoreModel, ThresholdScalesAsInverseGain) {
    auto p = measured();
    const double w = p.omega_r;
    const double base = threshold_power(p, w);
    p.g_opt *= 2.0;
    EXPECT_NEAR(threshold_power(p, w), base / 2.0, 1e-15);
}

TEST(CoreModel, ZeroGainPolicy) {
    auto p = measured();
    p.g_opt = 0.0;
    EXPECT_TRUE(std::isinf(threshold_power(p, p.omega_r)));
    try {
        (void)threshold_power(p, p.omega_r, ZeroGainPolicy::Throw);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroGain);
    }
    const DriveState d = drive_state(p, 1e-3, p.omega_r);
    EXPECT_EQ(d.sigma_tilde, 0.0);
    EXPECT_EQ(d.x, 0.0);
    EXPECT_EQ(d.r, 0.0);
}

TEST(CoreModel, DriveStateAtOperatingPoint) {
    const auto p = measured();
    const DriveState d = drive_state(p, 7.59e-3, p.omega_r, 1.0);
    EXPECT_NEAR(d.sigma_tilde, 7.59 / 7.852, 2e-3);
    EXPECT_NEAR(d.x, 0.6951, 2e-4);
    EXPECT_NEAR(d.n_fluct_out, 2.8165, 1e-3);
    EXPECT_NEAR(d.r, 1.75, 0.01);
    EXPECT_NEAR(d.r, std::asinh(d.n_fluct_out), 1e-15);
}

TEST(CoreModel, DriveStateRejectsBadEfficiency) {
    const auto p = measured();
    try {
        (void)drive_state(p, 1e-3, p.omega_r, 1.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidEfficiency);
    }
}

TEST(CoreModel, CriticalDistance) {
    EXPECT_EQ(critical_distance(0.0), 0.0);
    EXPECT_NEAR(critical_distance(1.0), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_LT(critical_distance(1e6), 1.0);
    for (double s = 0.01; s < 100.0; s *= 1.3) {
        EXPECT_LT(critical_distance(s), critical_distance(s * 1.3));
    }
}

TEST(CoreModel, Decibels) {
    EXPECT_NEAR(db_from_linear(0.5), -3.0103, 1e-4);
    EXPECT_NEAR(linear_from_db(db_from_linear(0.123)), 0.123, 1e-15);
    EXPECT_THROW((void)db_from_linear(0.0), Error);
    EXPECT_THROW((void)db_from_linear(-1.0), Error);
}

TEST(CoreModel, InputPhotonFlux) {
    const double w = omega_from_wavelength(1550e-9);
    EXPECT_NEAR(input_photon_flux(1e-3, w) * constants::hbar * w, 1e-3, 1e-18);
}

TEST(CoreModel, PumpValidation) {
    PumpConfig pump;
    pump.p_in = 1e-3;
    pump.omega_p = 1e15;
    pump.delta_p_grid = {0.0, 1.0, 1.0};
    EXPECT_THROW(pump.validate(), Error);
    pump.delta_p_grid = {3.0, 2.0, 1.0};
    EXPECT_NO_THROW(pump.validate());
    pump.p_in = -1.0;
    EXPECT_THROW(pump.validate(), Error);
}
