#include "kerrsq/commands.hpp"

#include "kerrsq/characterization.hpp"
#include "kerrsq/csv.hpp"
#include "kerrsq/detection_chain.hpp"
#include "kerrsq/error.hpp"
#include "kerrsq/squeezing_spectrum.hpp"
#include "kerrsq/steady_state.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <variant>

namespace kerrsq {

using ojson = nlohmann::ordered_json;

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::IoError, "SHA-256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    std::vector<std::exception_ptr> errors(n);
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(workers, n); ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    // lowest index wins so failures do not depend on scheduling
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

namespace {

using Cell = std::variant<std::monostate, double, std::string, bool>;
using Row = std::vector<Cell>;

struct Table {
    std::vector<std::string> columns;
    std::vector<Row> rows;
};

class Warnings {
public:
    void add(const std::string& w) {
        std::lock_guard<std::mutex> lock(m_);
        items_.push_back(w);
    }
    // sorted so worker scheduling cannot reorder them
    std::vector<std::string> take() {
        std::sort(items_.begin(), items_.end());
        return std::move(items_);
    }

private:
    std::mutex m_;
    std::vector<std::string> items_;
};

std::string render_table(const Table& t, OutputFormat format) {
    std::ostringstream os;
    if (format == OutputFormat::Csv) {
        CsvTable csv;
        csv.header = t.columns;
        for (const auto& row : t.rows) {
            std::vector<std::string> fields;
            for (const auto& c : row) {
                if (const auto* d = std::get_if<double>(&c)) {
                    fields.push_back(format_double(*d));
                } else if (const auto* s = std::get_if<std::string>(&c)) {
                    fields.push_back(*s);
                } else if (const auto* b = std::get_if<bool>(&c)) {
                    fields.push_back(*b ? "true" : "false");
                } else {
                    fields.emplace_back();
                }
            }
            csv.rows.push_back(std::move(fields));
        }
        write_csv(os, csv);
        return os.str();
    }
    ojson arr = ojson::array();
    for (const auto& row : t.rows) {
        ojson obj = ojson::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& c = row[i];
            if (const auto* d = std::get_if<double>(&c)) {
                obj[t.columns[i]] = *d;
            } else if (const auto* s = std::get_if<std::string>(&c)) {
                obj[t.columns[i]] = *s;
            } else if (const auto* b = std::get_if<bool>(&c)) {
                obj[t.columns[i]] = *b;
            } else {
                obj[t.columns[i]] = nullptr;
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

std::string input_digest(const RunConfig& cfg) {
    std::string all = cfg.text;
    for (const auto& f : cfg.input_files) all += read_text_file(f);
    return sha256_hex(all);
}

ojson run_header(const std::string& name, const RunConfig& cfg, const CommandOptions& opt) {
    ojson h;
    h["command"] = name;
    h["input_sha256"] = input_digest(cfg);
    h["seed"] = opt.seed;
    return h;
}

// Non-finite values become null.
ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

const std::vector<double>& require_powers(const RunConfig& cfg) {
    if (cfg.powers.empty()) cfg.fail("/pump", "p_in_w or powers_w is required by this command");
    return cfg.powers;
}

void linearization_warning(Warnings& w, double p_in, double x) {
    if (x > kLinearizationLimit) {
        w.add("p_in_w=" + format_double(p_in) + ": distance to critical point x=" + format_double(x) +
              " exceeds " + format_double(kLinearizationLimit) + "; linearized fluctuations unreliable");
    }
}

std::vector<PumpConfig> sweep_blocks(const RunConfig& cfg) {
    const auto& grid = cfg.require_grid(cfg.delta_p_grid, "/grids/delta_p_rad_s");
    std::vector<PumpConfig> blocks;
    for (double p : require_powers(cfg)) {
        for (auto d : cfg.directions) {
            PumpConfig pc;
            pc.p_in = p;
            pc.omega_p = cfg.pump_omega();
            pc.delta_p_grid = grid;
            pc.direction = d;
            blocks.push_back(pc);
        }
    }
    return blocks;
}

Table cmd_sweep(const RunConfig& cfg, const CommandOptions& opt) {
    const ResonatorParams& params = cfg.require_resonator();
    const bool geometry = params.geometry.has_value();
    Table t;
    t.columns = {"p_in_w", "delta_p_rad_s", "n_photons", "energy_j", "delta_cl_rad_s",
                 "transmission", "stable", "direction"};
    if (geometry) t.columns.emplace_back("circulating_power_w");
    const auto blocks = sweep_blocks(cfg);
    std::vector<std::vector<Row>> out(blocks.size());
    parallel_for(blocks.size(), opt.threads, [&](std::size_t b) {
        const SweepTrace sw = sweep(params, blocks[b]);
        for (const auto& pt : sw.points) {
            Row r{blocks[b].p_in,
                  pt.delta_p,
                  pt.branch.n,
                  stored_energy(pt.branch.n, blocks[b].omega_p),
                  pt.branch.delta_cl,
                  pt.transmission,
                  pt.branch.stable,
                  std::string(to_string(sw.direction))};
            if (geometry) r.emplace_back(*circulating_power(params, pt.branch.n, blocks[b].omega_p));
            out[b].push_back(std::move(r));
        }
    });
    for (auto& b : out) {
        for (auto& r : b) t.rows.push_back(std::move(r));
    }
    return t;
}

Table spectrum_detuning(const RunConfig& cfg, const CommandOptions& opt, Warnings& warn) {
    const ResonatorParams& params = cfg.require_resonator();
    const auto& omegas = cfg.require_grid(cfg.omega_grid, "/grids/omega_rad_s");
    const auto& phis = cfg.require_grid(cfg.phi_grid, "/grids/phi_rad");
    const double eta = cfg.efficiency();
    const double big_gamma = total_loss(params);
    const double p_th = threshold_power(params, cfg.pump_omega());
    const double c = 4.0 * eta * params.kappa / big_gamma;
    const auto blocks = sweep_blocks(cfg);

    struct Job {
        std::size_t block;
        SweepPoint point;
    };
    std::vector<Job> jobs;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const SweepTrace sw = sweep(params, blocks[b]);
        for (const auto& pt : sw.points) jobs.push_back({b, pt});
    }

    Table t;
    t.columns = {"p_in_w", "direction", "delta_p_rad_s", "delta_cl_rad_s", "omega_rad_s", "phi_rad",
                 "eta", "v_ratio", "v_db", "v_locked_ratio"};
    std::vector<std::vector<Row>> out(jobs.size());
    parallel_for(jobs.size(), opt.threads, [&](std::size_t j) {
        const auto& job = jobs[j];
        const PumpConfig& pc = blocks[job.block];
        const bool at_lock = std::abs(job.point.branch.delta_cl) <= 1e-9 * big_gamma;
        for (double w : omegas) {
            std::optional<QuadratureMoments> mom;
            try {
                mom = quadrature_moments(params, job.point.branch, w, eta);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::SingularMatrix) throw;
                warn.add("p_in_w=" + format_double(pc.p_in) + " delta_p_rad_s=" +
                         format_double(job.point.delta_p) + " omega_rad_s=" + format_double(w) +
                         ": " + e.message());
            }
            for (double phi : phis) {
                Row r{pc.p_in, std::string(to_string(pc.direction)), job.point.delta_p,
                      job.point.branch.delta_cl, w, phi, eta};
                if (mom) {
                    const double v = mom->at(phi);
                    r.emplace_back(v);
                    r.emplace_back(db_from_linear(v));
                } else {
                    r.emplace_back(std::monostate{});
                    r.emplace_back(std::monostate{});
                }
                if (at_lock) {
                    r.emplace_back(locked_raw_variance(pc.p_in / p_th, dimensionless_frequency(w, big_gamma),
                                                       c, phi));
                } else {
                    r.emplace_back(std::monostate{});
                }
                out[j].push_back(std::move(r));
            }
        }
    });
    for (auto& b : out) {
        for (auto& r : b) t.rows.push_back(std::move(r));
    }
    return t;
}

Table spectrum_locked(const RunConfig& cfg, const CommandOptions& opt, Warnings& warn) {
    const ResonatorParams& params = cfg.require_resonator();
    const auto& omegas = cfg.require_grid(cfg.omega_grid, "/grids/omega_rad_s");
    const auto& phis = cfg.require_grid(cfg.phi_grid, "/grids/phi_rad");
    const auto& powers = require_powers(cfg);
    const double eta = cfg.efficiency();
    const double omega_p = cfg.pump_omega();
    const double big_gamma = total_loss(params);
    const double p_th = threshold_power(params, omega_p);
    const double c = 4.0 * eta * params.kappa / big_gamma;

    Table t;
    t.columns = {"p_in_w", "delta_p_rad_s", "omega_rad_s", "phi_rad", "eta",
                 "v_ratio", "v_db", "v_locked_ratio"};
    std::vector<std::vector<Row>> out(powers.size());
    parallel_for(powers.size(), opt.threads, [&](std::size_t k) {
        const double p = powers[k];
        const LockingPoint lock = injection_locking_point(params, p, omega_p);
        const double s = p / p_th;
        linearization_warning(warn, p, critical_distance(s));
        for (double w : omegas) {
            const QuadratureMoments mom = quadrature_moments(params, lock.branch, w, eta);
            const double y = dimensionless_frequency(w, big_gamma);
            for (double phi : phis) {
                const double v = mom.at(phi);
                out[k].push_back(Row{p, lock.delta_p, w, phi, eta, v, db_from_linear(v),
                                     locked_raw_variance(s, y, c, phi)});
            }
        }
    });
    for (auto& b : out) {
        for (auto& r : b) t.rows.push_back(std::move(r));
    }
    return t;
}

Table spectrum_efficiency(const RunConfig& cfg, Warnings& warn) {
    const ResonatorParams& params = cfg.require_resonator();
    const auto& powers = require_powers(cfg);
    const std::vector<double> etas = cfg.etas.empty() ? std::vector<double>{cfg.efficiency()} : cfg.etas;
    const double p_th = threshold_power(params, cfg.pump_omega());
    Table t;
    t.columns = {"eta", "p_in_w", "phi_opt_rad", "v_s_ratio", "v_s_db", "v_as_ratio", "v_as_db"};
    for (double eta : etas) {
        for (double p : powers) {
            const SqueezingResult r = locked_variances(p, p_th, params.kappa, params.gamma, eta);
            if (eta == etas.front()) linearization_warning(warn, p, r.x);
            t.rows.push_back(Row{eta, p, r.phi_opt, r.v_s, db_from_linear(r.v_s), r.v_as,
                                 db_from_linear(r.v_as)});
        }
    }
    return t;
}

Table cmd_locking(const RunConfig& cfg, Warnings& warn) {
    const ResonatorParams& params = cfg.require_resonator();
    const double omega_p = cfg.pump_omega();
    const double p_th = threshold_power(params, omega_p);
    const bool geometry = params.geometry.has_value();
    Table t;
    t.columns = {"p_in_w", "delta_p_lock_rad_s", "n_photons", "energy_j", "delta_cl_rad_s",
                 "delta_f_rad_s", "sigma_tilde", "x"};
    if (geometry) t.columns.emplace_back("circulating_power_w");
    for (double p : require_powers(cfg)) {
        const LockingPoint lock = injection_locking_point(params, p, omega_p);
        const double s = p / p_th;
        const double x = critical_distance(s);
        linearization_warning(warn, p, x);
        Row r{p, lock.delta_p, lock.branch.n, stored_energy(lock.branch.n, omega_p),
              lock.branch.delta_cl, lock.branch.delta_f, s, x};
        if (geometry) r.emplace_back(*circulating_power(params, lock.branch.n, omega_p));
        t.rows.push_back(std::move(r));
    }
    return t;
}

double threshold_wavelength(const RunConfig& cfg) {
    if (cfg.threshold_lambda) return *cfg.threshold_lambda;
    return wavelength_from_omega(cfg.pump_omega());
}

ojson cmd_threshold(const RunConfig& cfg, Warnings& warn) {
    ojson o;
    if (cfg.resonator) {
        const ResonatorParams& params = *cfg.resonator;
        o["total_loss_rad_s"] = total_loss(params);
        o["quality_factor"] = quality_factor(params);
        const double p_th = threshold_power(params, cfg.pump_omega());
        if (!std::isfinite(p_th)) warn.add("g_opt_rad_s is 0: no comb threshold");
        o["p_th_w"] = num(p_th);
    }
    if (cfg.p_th_observed) {
        const ResonatorParams& params = cfg.require_resonator();
        const double lambda = threshold_wavelength(cfg);
        o["observed_p_th_w"] = *cfg.p_th_observed;
        o["lambda_m"] = lambda;
        o["g_opt_from_threshold_rad_s"] =
            g_opt_from_threshold(*cfg.p_th_observed, params.kappa, params.gamma, lambda);
    }
    if (o.empty()) cfg.fail("", "threshold needs a resonator section");
    return o;
}

ojson budget_json(const RunConfig& cfg) {
    ojson o;
    ojson entries = ojson::array();
    if (cfg.budget) {
        for (const auto& e : cfg.budget->entries) entries.push_back({{"label", e.label}, {"loss_db", e.loss_db}});
        o["entries"] = entries;
        o["total_db"] = cfg.budget->total_db();
        o["eta_from_budget"] = efficiency_from_budget(*cfg.budget);
    } else {
        o["entries"] = entries;
        o["total_db"] = 0.0;
        o["eta_from_budget"] = 1.0;
    }
    o["eta_override"] = cfg.eta ? ojson(*cfg.eta) : ojson(nullptr);
    o["eta"] = cfg.efficiency();
    return o;
}

ojson cmd_report(const RunConfig& cfg, Warnings& warn) {
    const ResonatorParams& params = cfg.require_resonator();
    const double omega_p = cfg.pump_omega();
    const double eta = cfg.efficiency();
    const double p_th = threshold_power(params, omega_p);
    ojson o;
    o["total_loss_rad_s"] = total_loss(params);
    o["quality_factor"] = quality_factor(params);
    o["p_th_w"] = num(p_th);
    o["detection"] = budget_json(cfg);
    ojson points = ojson::array();
    for (double p : require_powers(cfg)) {
        const DriveState d = drive_state(params, p, omega_p, eta);
        const SqueezingResult chip = locked_variances(p, p_th, params.kappa, params.gamma, 1.0);
        const SqueezingResult meas = locked_variances(p, p_th, params.kappa, params.gamma, eta);
        const LockingPoint lock = injection_locking_point(params, p, omega_p);
        linearization_warning(warn, p, d.x);
        ojson pt;
        pt["p_in_w"] = p;
        pt["sigma_tilde"] = d.sigma_tilde;
        pt["x"] = d.x;
        pt["n_fluct_out_locked"] = d.n_fluct_out;
        pt["r"] = d.r;
        pt["fluctuation_flux"] = fluctuation_flux(params, lock.branch, eta);
        pt["delta_p_lock_rad_s"] = lock.delta_p;
        pt["n_photons_lock"] = lock.branch.n;
        pt["phi_opt_rad"] = chip.phi_opt;
        pt["v_s_chip_ratio"] = chip.v_s;
        pt["v_s_chip_db"] = db_from_linear(chip.v_s);
        pt["v_as_chip_ratio"] = chip.v_as;
        pt["v_as_chip_db"] = db_from_linear(chip.v_as);
        pt["v_s_measured_ratio"] = meas.v_s;
        pt["v_s_measured_db"] = db_from_linear(meas.v_s);
        pt["v_as_measured_ratio"] = meas.v_as;
        pt["v_as_measured_db"] = db_from_linear(meas.v_as);
        pt["beyond_linearization"] = chip.beyond_linearization;
        points.push_back(std::move(pt));
    }
    o["operating_points"] = points;
    return o;
}

ojson value_err(double v, double err) { return {{"value", num(v)}, {"std_error", num(err)}}; }

ojson cmd_fit_transmission(const RunConfig& cfg) {
    if (!cfg.transmission_csv) cfg.fail("/fit_transmission", "section is required by this command");
    const TransmissionTrace trace = transmission_from_csv(read_csv_file(*cfg.transmission_csv));
    const ResonanceFit fit = fit_linear_resonance(trace, cfg.regime, cfg.resonance_options);
    ojson o;
    ojson lin;
    lin["regime"] = cfg.regime == CouplingRegime::Over ? "over" : "under";
    lin["axis"] = trace.axis == FrequencyAxis::Detuning ? "delta_p_rad_s" : "omega_p_rad_s";
    lin["omega_r_rad_s"] = value_err(fit.omega_r, fit.omega_r_err);
    lin["kappa_rad_s"] = value_err(fit.kappa, fit.kappa_err);
    lin["gamma_rad_s"] = value_err(fit.gamma, fit.gamma_err);
    lin["residual_norm"] = fit.residual_norm;
    lin["relative_residual"] = fit.relative_residual;
    o["linear"] = lin;

    if (!cfg.shift_csvs.empty()) {
        std::vector<TransmissionTrace> traces;
        for (const auto& f : cfg.shift_csvs) {
            try {
                traces.push_back(transmission_from_csv(read_csv_file(f)));
            } catch (const Error& e) {
                throw Error(e.code(), f + ": " + e.message());
            }
        }
        ShiftFitSetup setup;
        setup.kappa = fit.kappa;
        setup.gamma = fit.gamma;
        setup.omega_p = cfg.pump_omega();
        setup.omega_r = trace.axis == FrequencyAxis::AbsoluteOmega
                            ? fit.omega_r
                            : (cfg.resonator ? cfg.resonator->omega_r : setup.omega_p);
        const ShiftFit sf = fit_shift_coefficient(traces, setup, cfg.shift_options);
        ojson sh;
        sh["traces"] = traces.size();
        sh["g_sum_rad_s"] = value_err(sf.g_sum, sf.g_sum_err);
        sh["residual_norm"] = sf.residual_norm;
        sh["relative_residual"] = sf.relative_residual;
        if (cfg.p_th_observed) {
            const double g_opt = g_opt_from_threshold(*cfg.p_th_observed, fit.kappa, fit.gamma,
                                                      threshold_wavelength(cfg));
            sh["g_opt_from_threshold_rad_s"] = g_opt;
            sh["g_th_rad_s"] = value_err(sf.g_sum - g_opt, sf.g_sum_err);
        }
        o["shift"] = sh;
    }
    return o;
}

ojson cmd_fit_dispersion(const RunConfig& cfg) {
    if (!cfg.resonance_csv) cfg.fail("/fit_dispersion", "section is required by this command");
    const DispersionFit fit = fit_dispersion(resonances_from_csv(read_csv_file(*cfg.resonance_csv)));
    ojson o;
    o["omega_0_rad_s"] = value_err(fit.omega_0, fit.omega_0_err);
    o["d1_rad_s"] = value_err(fit.d1, fit.d1_err);
    o["d2_rad_s"] = value_err(fit.d2, fit.d2_err);
    o["regime"] = to_string(fit.regime);
    o["residual_norm"] = fit.residual_norm;
    ojson modes = ojson::array();
    for (std::size_t i = 0; i < fit.mu.size(); ++i) {
        modes.push_back({{"mu", fit.mu[i]}, {"dint_rad_s", fit.dint[i]}, {"residual_rad_s", fit.residual[i]}});
    }
    o["modes"] = modes;
    return o;
}

ojson cmd_reduce_trace(const RunConfig& cfg, Warnings& warn) {
    if (!cfg.trace_csv) cfg.fail("/reduce_trace", "section is required by this command");
    const ZeroSpanTrace trace = zero_span_from_csv(read_csv_file(*cfg.trace_csv));
    const ZeroSpanTrace ref = zero_span_from_csv(read_csv_file(*cfg.reference_csv));
    const TraceReduction red = reduce_homodyne_trace(trace, ref, cfg.trace_options);
    ojson o;
    o["v_s_db"] = red.v_s_db;
    o["v_as_db"] = red.v_as_db;
    o["reference_level_dbm"] = red.reference_level_dbm;
    o["reference_slope_db_s"] = red.reference_slope_db_s;
    o["low_percentile"] = cfg.trace_options.low_percentile;
    o["high_percentile"] = cfg.trace_options.high_percentile;
    if (cfg.eta || cfg.budget) {
        const double eta = cfg.efficiency();
        o["eta"] = eta;
        try {
            const double v_chip = infer_chip_variance(linear_from_db(red.v_s_db), eta);
            o["v_s_chip_ratio"] = v_chip;
            o["v_s_chip_db"] = db_from_linear(v_chip);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InfeasibleMeasurement) throw;
            warn.add(e.what());
            o["v_s_chip_ratio"] = nullptr;
            o["v_s_chip_db"] = nullptr;
        }
        o["v_as_chip_db"] = db_from_linear(infer_chip_variance(linear_from_db(red.v_as_db), eta));
    }
    return o;
}

ojson cmd_losses(const RunConfig& cfg) {
    if (!cfg.budget && !cfg.eta) cfg.fail("/detection", "loss_budget, loss_budget_file or eta is required");
    return budget_json(cfg);
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"sweep",     "spectrum",         "locking",
                                                "threshold", "report",           "fit-transmission",
                                                "fit-dispersion", "reduce-trace", "losses"};
    return names;
}

CommandOutput run_command(const std::string& name, const RunConfig& cfg,
                          const CommandOptions& options) {
    Warnings warn;
    CommandOutput out;
    const bool tabular = name == "sweep" || name == "spectrum" || name == "locking";
    const OutputFormat format = options.format.value_or(tabular ? OutputFormat::Csv : OutputFormat::Json);
    if (!tabular && format == OutputFormat::Csv) {
        throw Error(ErrorCode::ConfigError, "command '" + name + "' only writes JSON");
    }

    if (tabular) {
        Table t;
        if (name == "sweep") {
            t = cmd_sweep(cfg, options);
        } else if (name == "locking") {
            t = cmd_locking(cfg, warn);
        } else if (cfg.spectrum_mode == SpectrumMode::Detuning) {
            t = spectrum_detuning(cfg, options, warn);
        } else if (cfg.spectrum_mode == SpectrumMode::Locked) {
            t = spectrum_locked(cfg, options, warn);
        } else {
            t = spectrum_efficiency(cfg, warn);
        }
        out.body = render_table(t, format);
        out.warnings = warn.take();
        return out;
    }

    ojson doc = run_header(name, cfg, options);
    ojson result;
    if (name == "threshold") {
        result = cmd_threshold(cfg, warn);
    } else if (name == "report") {
        result = cmd_report(cfg, warn);
    } else if (name == "fit-transmission") {
        result = cmd_fit_transmission(cfg);
    } else if (name == "fit-dispersion") {
        result = cmd_fit_dispersion(cfg);
    } else if (name == "reduce-trace") {
        result = cmd_reduce_trace(cfg, warn);
    } else if (name == "losses") {
        result = cmd_losses(cfg);
    } else {
        throw Error(ErrorCode::ConfigError, "unknown command '" + name + "'");
    }
    out.warnings = warn.take();
    doc["result"] = result;
    doc["warnings"] = out.warnings;
    out.body = doc.dump(2) + "\n";
    return out;
}

}  // namespace kerrsq
