#include "kerrsq/characterization.hpp"
#include "kerrsq/error.hpp"
#include "kerrsq/squeezing_spectrum.hpp"
#include "kerrsq/synthetic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace kerrsq;

namespace {

constexpr double kKappa = 515e6;
constexpr double kGamma = 192e6;
constexpr double kBigGamma = kKappa + kGamma;

TransmissionTrace cold_trace(double center = 0.0) {
    return linear_transmission_trace(kKappa, kGamma, center, linspace(-5 * kBigGamma, 5 * kBigGamma, 401));
}

std::vector<TransmissionTrace> hot_traces(double g_opt, double g_th) {
    const ResonatorParams p = make_resonator(kKappa, kGamma, g_opt, g_th, 1550e-9, std::nullopt);
    std::vector<TransmissionTrace> out;
    for (double p_in : {2e-3, 5e-3, 8e-3}) {
        PumpConfig pc;
        pc.p_in = p_in;
        pc.omega_p = p.omega_r;
        pc.delta_p_grid = linspace(10 * kBigGamma, -70 * kBigGamma, 601);
        out.push_back(sweep_transmission_trace(p, pc));
    }
    return out;
}

ShiftFitSetup setup() {
    const double w = omega_from_wavelength(1550e-9);
    return {kKappa, kGamma, w, w};
}

}  // namespace

TEST(ResonanceFit, ExactRecovery) {
    const auto fit = fit_linear_resonance(cold_trace(3e7), CouplingRegime::Over);
    EXPECT_NEAR(fit.kappa / kKappa, 1.0, 1e-6);
    EXPECT_NEAR(fit.gamma / kGamma, 1.0, 1e-6);
    EXPECT_NEAR(fit.omega_r, 3e7, 1e-6 * kBigGamma);
    EXPECT_LT(fit.relative_residual, 1e-8);
}

TEST(ResonanceFit, AbsoluteAxis) {
    auto tr = cold_trace();
    const double w0 = omega_from_wavelength(1550e-9);
    for (double& f : tr.frequency) f += w0;
    tr.axis = FrequencyAxis::AbsoluteOmega;
    const auto fit = fit_linear_resonance(tr, CouplingRegime::Over);
    EXPECT_NEAR(fit.omega_r / w0, 1.0, 1e-12);
    EXPECT_NEAR(fit.kappa / kKappa, 1.0, 1e-6);
}

TEST(ResonanceFit, RegimeSwapSymmetry) {
    const auto swapped = linear_transmission_trace(kGamma, kKappa, 0.0, linspace(-5 * kBigGamma, 5 * kBigGamma, 401));
    const auto a = fit_linear_resonance(cold_trace(), CouplingRegime::Over);
    const auto b = fit_linear_resonance(swapped, CouplingRegime::Under);
    EXPECT_NEAR(a.kappa, b.gamma, 1e-6 * kKappa);
    EXPECT_NEAR(a.gamma, b.kappa, 1e-6 * kGamma);
    const auto c = fit_linear_resonance(cold_trace(), CouplingRegime::Under);
    EXPECT_NEAR(c.kappa, a.gamma, 1e-6 * kGamma);
}

TEST(ResonanceFit, NoisyRecovery) {
    std::vector<double> dk;
    std::vector<double> dg;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        std::mt19937_64 rng(seed);
        auto tr = cold_trace();
        add_multiplicative_noise(tr, 0.01, rng);
        const auto fit = fit_linear_resonance(tr, CouplingRegime::Over);
        dk.push_back(std::abs(fit.kappa / kKappa - 1.0));
        dg.push_back(std::abs(fit.gamma / kGamma - 1.0));
        EXPECT_GT(fit.kappa_err, 0.0);
    }
    std::sort(dk.begin(), dk.end());
    std::sort(dg.begin(), dg.end());
    EXPECT_LT(dk[15], 0.01);
    EXPECT_LT(dg[15], 0.01);
}

TEST(ResonanceFit, Errors) {
    auto flat = cold_trace();
    std::fill(flat.transmission.begin(), flat.transmission.end(), 0.99);
    try {
        (void)fit_linear_resonance(flat, CouplingRegime::Over);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoDip);
    }
    auto bad = cold_trace();
    for (std::size_t i = 0; i < bad.transmission.size(); i += 2) bad.transmission[i] = 0.0;
    try {
        (void)fit_linear_resonance(bad, CouplingRegime::Over);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PoorFit);
    }
    auto nonmono = cold_trace();
    nonmono.frequency[5] = nonmono.frequency[4];
    EXPECT_THROW((void)fit_linear_resonance(nonmono, CouplingRegime::Over), Error);
}

TEST(ShiftFit, ExactRecovery) {
    const auto fit = fit_shift_coefficient(hot_traces(1.4, 127.0), setup());
    EXPECT_NEAR(fit.g_sum / 128.4, 1.0, 1e-6);
}

TEST(ShiftFit, ZeroShift) {
    const auto fit = fit_shift_coefficient(hot_traces(0.0, 0.0), setup());
    EXPECT_LT(fit.g_sum, 0.01);
}

TEST(ShiftFit, NoisyRecovery) {
    const auto clean = hot_traces(1.4, 127.0);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        std::mt19937_64 rng(seed);
        auto traces = clean;
        for (auto& t : traces) add_multiplicative_noise(t, 0.01, rng);
        const auto fit = fit_shift_coefficient(traces, setup());
        EXPECT_NEAR(fit.g_sum / 128.4, 1.0, 0.05);
        EXPECT_GT(fit.g_sum_err, 0.0);
    }
}

TEST(ShiftFit, SplitWithThreshold) {
    const auto fit = fit_shift_coefficient(hot_traces(1.4, 127.0), setup());
    const double g_opt = g_opt_from_threshold(7.89e-3, kKappa, kGamma, 1550e-9);
    EXPECT_NEAR(g_opt, 1.39, 0.005);
    EXPECT_NEAR(fit.g_sum - g_opt, 127.0, 0.1);
}

TEST(ShiftFit, Errors) {
    auto traces = hot_traces(1.4, 127.0);
    traces.resize(1);
    EXPECT_THROW((void)fit_shift_coefficient(traces, setup()), Error);

    // microwatt drive cannot move the dip by one sample
    const ResonatorParams p = make_resonator(kKappa, kGamma, 1.4, 127.0, 1550e-9, std::nullopt);
    std::vector<TransmissionTrace> weak;
    for (double p_in : {1e-12, 2e-12}) {
        PumpConfig pc;
        pc.p_in = p_in;
        pc.omega_p = p.omega_r;
        pc.delta_p_grid = linspace(5 * kBigGamma, -5 * kBigGamma, 101);
        weak.push_back(sweep_transmission_trace(p, pc));
    }
    try {
        (void)fit_shift_coefficient(weak, setup());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Degenerate);
    }
}

TEST(Threshold, InverseOfThresholdPower) {
    const ResonatorParams p = make_resonator(kKappa, kGamma, 1.4, 0.0, 1550e-9, std::nullopt);
    const double p_th = threshold_power(p, p.omega_r);
    EXPECT_NEAR(g_opt_from_threshold(p_th, kKappa, kGamma, 1550e-9), 1.4, 1.4e-12);
    EXPECT_NEAR(g_opt_from_threshold(2 * p_th, kKappa, kGamma, 1550e-9), 0.7, 1e-12);
    EXPECT_THROW((void)g_opt_from_threshold(0.0, kKappa, kGamma, 1550e-9), Error);
}

TEST(Dispersion, ExactQuadratic) {
    const double w0 = omega_from_wavelength(1550e-9);
    const auto fit = fit_dispersion(quadratic_resonances(w0, 0.68e12, 7.76e6, -40, 40));
    EXPECT_NEAR(fit.omega_0 / w0, 1.0, 1e-15);
    EXPECT_NEAR(fit.d1 / 0.68e12, 1.0, 1e-10);
    EXPECT_NEAR(fit.d2 / 7.76e6, 1.0, 1e-10);
    EXPECT_EQ(fit.regime, DispersionRegime::Anomalous);
    for (std::size_t i = 0; i < fit.mu.size(); ++i) {
        const double mu = fit.mu[i];
        EXPECT_NEAR(fit.dint[i], 0.5 * 7.76e6 * mu * mu, 1e-10 * 0.68e12 * 40);
    }
}

TEST(Dispersion, PureFsrAndNormal) {
    const auto flat = fit_dispersion(quadratic_resonances(1e15, 1e12, 0.0, -10, 10));
    for (double d : flat.dint) EXPECT_LE(std::abs(d), 1e-10 * 1e12);
    const auto normal = fit_dispersion(quadratic_resonances(1e15, 1e12, -5e6, -10, 10));
    EXPECT_EQ(normal.regime, DispersionRegime::Normal);
    EXPECT_STREQ(to_string(normal.regime), "normal");
}

TEST(Dispersion, ReindexingKeepsCurvature) {
    auto list = quadratic_resonances(1e15, 1e12, 7e6, -20, 20);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0.0, 1e6);
    for (auto& e : list.entries) e.omega += n(rng);
    const auto a = fit_dispersion(list);
    for (auto& e : list.entries) e.mu += 17;
    const auto b = fit_dispersion(list);
    EXPECT_NEAR(b.d2, a.d2, 1e-6 * std::abs(a.d2));
    for (std::size_t i = 0; i < a.residual.size(); ++i) EXPECT_NEAR(a.residual[i], b.residual[i], 1.0);
}

TEST(Dispersion, Errors) {
    try {
        (void)fit_dispersion(quadratic_resonances(1e15, 1e12, 0.0, 0, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
    }
    ResonanceList dup = quadratic_resonances(1e15, 1e12, 0.0, 0, 4);
    dup.entries.push_back(dup.entries.front());
    EXPECT_THROW((void)fit_dispersion(dup), Error);
}

TEST(TraceReduction, ConstantTrace) {
    ZeroSpanTrace t{{0.0, 1.0, 2.0}, {-60.0, -60.0, -60.0}, {100e6, 300e3, 300.0}};
    const auto r = reduce_homodyne_trace(t, t);
    EXPECT_EQ(r.v_s_db, 0.0);
    EXPECT_EQ(r.v_as_db, 0.0);
}

TEST(TraceReduction, OscillatingTrace) {
    ZeroSpanTrace ref{linspace(0, 1, 2001), std::vector<double>(2001, -60.0), {100e6, 300e3, 300.0}};
    ZeroSpanTrace tr = ref;
    const double lo = -61.219;
    const double hi = -53.11;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        const double x = 0.5 + 0.5 * std::cos(2 * constants::pi * 3 * tr.t[i]);
        tr.power_dbm[i] = lo + (hi - lo) * x;
    }
    const auto r = reduce_homodyne_trace(tr, ref);
    EXPECT_NEAR(r.v_s_db, -1.219, 0.05);
    EXPECT_NEAR(r.v_as_db, 6.89, 0.05);
}

TEST(TraceReduction, OffsetInvariance) {
    auto [tr, ref] = homodyne_traces(0.9, 1.5, -60.0, 1001, 1.0, 2 * constants::pi, {1e8, 3e5, 300});
    const auto a = reduce_homodyne_trace(tr, ref);
    for (auto& v : tr.power_dbm) v += 7.5;
    for (auto& v : ref.power_dbm) v += 7.5;
    const auto b = reduce_homodyne_trace(tr, ref);
    EXPECT_NEAR(a.v_s_db, b.v_s_db, 1e-12);
    EXPECT_NEAR(a.v_as_db, b.v_as_db, 1e-12);
}

TEST(TraceReduction, DetrendRemovesDrift) {
    auto [tr, ref] = homodyne_traces(0.9, 1.5, -60.0, 1001, 1.0, 2 * constants::pi, {1e8, 3e5, 300});
    const auto flat = reduce_homodyne_trace(tr, ref);
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        tr.power_dbm[i] += 0.4 * tr.t[i];
        ref.power_dbm[i] += 0.4 * ref.t[i];
    }
    TraceReductionOptions opt;
    opt.detrend_reference = true;
    const auto r = reduce_homodyne_trace(tr, ref, opt);
    EXPECT_NEAR(r.reference_slope_db_s, 0.4, 1e-9);
    EXPECT_NEAR(r.v_s_db, flat.v_s_db, 0.01);
    EXPECT_NEAR(r.v_as_db, flat.v_as_db, 0.01);
}

TEST(TraceReduction, Errors) {
    ZeroSpanTrace a{{0.0, 1.0}, {-60.0, -60.0}, {100e6, 300e3, 300.0}};
    ZeroSpanTrace b = a;
    b.metadata.rbw_hz = 100e3;
    try {
        (void)reduce_homodyne_trace(a, b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MetadataMismatch);
    }
    ZeroSpanTrace empty{{}, {}, a.metadata};
    try {
        (void)reduce_homodyne_trace(empty, a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyTrace);
    }
}

TEST(Percentile, Interpolates) {
    EXPECT_EQ(percentile({3.0, 1.0, 2.0}, 50.0), 2.0);
    EXPECT_EQ(percentile({1.0, 2.0}, 25.0), 1.25);
    EXPECT_EQ(percentile({5.0}, 99.0), 5.0);
    EXPECT_THROW((void)percentile({}, 50.0), Error);
}
