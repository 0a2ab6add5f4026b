#include "kerrsq/commands.hpp"
#include "kerrsq/config.hpp"
#include "kerrsq/csv.hpp"
#include "kerrsq/error.hpp"
#include "kerrsq/synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace kerrsq;

namespace {

const char* kBase = R"({
  "resonator": {
    "kappa_rad_s": 500e6,
    "gamma_rad_s": 50e6,
    "g_opt_rad_s": G_OPT,
    "g_th_rad_s": 100,
    "lambda_m": 1550e-9
  },
  "pump": {"powers_w": [0, 2e-3], "directions": ["down", "up"]},
  "detection": {"eta": 0.8},
  "grids": {
    "delta_p_rad_s": {"start": 2e9, "stop": -2e10, "points": 121},
    "omega_rad_s": [0, 1e8],
    "phi_rad": {"start": -1.5, "stop": 1.5, "points": 7}
  }
})";

std::string with_gain(const std::string& g) {
    std::string s = kBase;
    s.replace(s.find("G_OPT"), 5, g);
    return s;
}

RunConfig config(const std::string& g = "1.5") { return parse_config(with_gain(g), "mem.json", "."); }

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidParameter;
}

}  // namespace

TEST(FormatDouble, RoundTrips) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> e(-300.0, 300.0);
    for (int k = 0; k < 2000; ++k) {
        const double v = std::pow(10.0, e(rng)) * (k % 2 ? -1.0 : 1.0);
        EXPECT_EQ(parse_double(format_double(v), "v"), v);
    }
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Csv, MissingColumnNamed) {
    try {
        (void)transmission_from_csv(parse_csv("delta_p_rad_s,t\n1,0.5\n2,0.6\n", "x.csv"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SchemaError);
        EXPECT_NE(e.message().find("transmission"), std::string::npos);
    }
}

TEST(Csv, MalformedRows) {
    EXPECT_EQ(code_of([] { (void)parse_csv("a,b\n1,2\n3\n", "x.csv"); }), ErrorCode::SchemaError);
    EXPECT_EQ(code_of([] { (void)parse_csv("a,b\n1,zz\n", "x.csv").numeric_column("b"); }),
              ErrorCode::SchemaError);
}

TEST(Csv, TransmissionRoundTrip) {
    auto tr = linear_transmission_trace(5e8, 2e8, 1e7, linspace(-3e9, 3e9, 51));
    tr.p_in = 2e-3;
    tr.direction = SweepDirection::Increasing;
    std::ostringstream os;
    write_csv(os, transmission_to_csv(tr));
    const auto back = transmission_from_csv(parse_csv(os.str(), "rt"));
    EXPECT_EQ(back.frequency, tr.frequency);
    EXPECT_EQ(back.transmission, tr.transmission);
    EXPECT_EQ(back.p_in, tr.p_in);
    EXPECT_EQ(back.direction, tr.direction);
}

TEST(Csv, ZeroSpanAndResonanceRoundTrip) {
    auto [tr, ref] = homodyne_traces(0.9, 1.2, -60, 101, 1.0, 6.0, {1e8, 3e5, 300});
    std::ostringstream os;
    write_csv(os, zero_span_to_csv(tr));
    const auto back = zero_span_from_csv(parse_csv(os.str(), "rt"));
    EXPECT_EQ(back.t, tr.t);
    EXPECT_EQ(back.power_dbm, tr.power_dbm);
    EXPECT_EQ(back.metadata.rbw_hz, 3e5);

    const auto list = quadratic_resonances(1.2e15, 6.8e11, 7e6, -5, 5);
    std::ostringstream os2;
    write_csv(os2, resonances_to_csv(list));
    const auto back2 = resonances_from_csv(parse_csv(os2.str(), "rt"));
    ASSERT_EQ(back2.entries.size(), list.entries.size());
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        EXPECT_EQ(back2.entries[i].mu, list.entries[i].mu);
        EXPECT_EQ(back2.entries[i].omega, list.entries[i].omega);
    }
}

TEST(Config, ReportsLineOfBadValue) {
    std::string text = with_gain("1.5");
    text.replace(text.find("50e6"), 4, "-5e6");
    try {
        (void)parse_config(text, "bad.json", ".");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigError);
        EXPECT_NE(e.message().find("bad.json:4:"), std::string::npos) << e.message();
        EXPECT_NE(e.message().find("/resonator/gamma_rad_s"), std::string::npos) << e.message();
    }
}

TEST(Config, RejectsUnknownKeyAndSyntax) {
    std::string text = with_gain("1.5");
    text.replace(text.find("\"eta\""), 5, "\"etta\"");
    EXPECT_EQ(code_of([&] { (void)parse_config(text, "c.json", "."); }), ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { (void)parse_config("{\n \"pump\": {,}\n}", "c.json", "."); }), ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { (void)parse_config("{\"fit_dispersion\": {\"csv\": \"nope.csv\"}}", "c.json", "."); }),
              ErrorCode::ConfigError);
}

TEST(Config, PointerLines) {
    const auto lines = json_pointer_lines(with_gain("1.5"));
    EXPECT_EQ(lines.at("/resonator"), 2);
    EXPECT_EQ(lines.at("/resonator/kappa_rad_s"), 3);
    EXPECT_EQ(lines.at("/grids/omega_rad_s/1"), 13);
}

TEST(LossBudgetFile, Parses) {
    const auto b = parse_loss_budget(R"([{"label": "a", "loss_db": -1.5}, {"label": "b", "loss_db": -0.5}])", "b.json");
    EXPECT_EQ(b.entries.size(), 2u);
    EXPECT_DOUBLE_EQ(b.total_db(), -2.0);
    EXPECT_THROW((void)parse_loss_budget(R"([{"label": "a"}])", "b.json"), Error);
}

TEST(Sha256, KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Commands, DeterministicAcrossThreads) {
    const RunConfig cfg = config();
    for (const std::string cmd : {"sweep", "spectrum", "locking", "threshold", "report"}) {
        const auto a = run_command(cmd, cfg, {1, 0, std::nullopt});
        const auto b = run_command(cmd, cfg, {4, 0, std::nullopt});
        EXPECT_EQ(a.body, b.body) << cmd;
        EXPECT_EQ(a.warnings, b.warnings) << cmd;
    }
}

TEST(Commands, ZeroPowerSweepIsEmptyCavity) {
    const auto out = run_command("sweep", config(), {1, 0, std::nullopt});
    const auto table = parse_csv(out.body, "sweep");
    const auto p = table.numeric_column("p_in_w");
    const auto n = table.numeric_column("n_photons");
    const auto d = table.numeric_column("delta_p_rad_s");
    const auto dcl = table.numeric_column("delta_cl_rad_s");
    std::size_t zero_rows = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] != 0.0) continue;
        ++zero_rows;
        EXPECT_EQ(n[i], 0.0);
        EXPECT_EQ(dcl[i], d[i]);
    }
    EXPECT_EQ(zero_rows, 2u * 121u);
}

TEST(Commands, NoGainMeansNoSqueezing) {
    const auto out = run_command("spectrum", config("0"), {1, 0, std::nullopt});
    const auto v = parse_csv(out.body, "spectrum").numeric_column("v_db");
    ASSERT_FALSE(v.empty());
    for (double x : v) EXPECT_NEAR(x, 0.0, 1e-12);
}

TEST(Commands, FormatSwitch) {
    const RunConfig cfg = config();
    const auto json = run_command("locking", cfg, {1, 0, OutputFormat::Json});
    EXPECT_EQ(json.body.front(), '[');
    EXPECT_EQ(code_of([&] { (void)run_command("threshold", cfg, {1, 0, OutputFormat::Csv}); }),
              ErrorCode::ConfigError);
    EXPECT_EQ(code_of([&] { (void)run_command("fit-dispersion", cfg, {1, 0, std::nullopt}); }),
              ErrorCode::ConfigError);
}

TEST(ParallelFor, RethrowsLowestIndex) {
    try {
        parallel_for(64, 4, [](std::size_t i) {
            if (i == 9 || i == 40) throw Error(ErrorCode::InvalidParameter, std::to_string(i));
        });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.message(), "9");
    }
}
