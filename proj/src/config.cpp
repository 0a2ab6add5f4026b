#include "kerrsq/config.hpp"

#include "kerrsq/csv.hpp"
#include "kerrsq/error.hpp"
#include "kerrsq/synthetic.hpp"

#include <json.hpp>

#include <filesystem>
#include <set>

namespace kerrsq {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string escape_token(const std::string& key) {
    std::string out;
    for (char ch : key) {
        if (ch == '~') {
            out += "~0";
        } else if (ch == '/') {
            out += "~1";
        } else {
            out += ch;
        }
    }
    return out;
}

}  // namespace

std::map<std::string, int> json_pointer_lines(const std::string& text) {
    struct Frame {
        bool object;
        std::string prefix;
        int index = 0;
        bool expecting_key = true;
        bool value_started = false;
        std::string value_ptr;
    };
    std::map<std::string, int> lines;
    std::vector<Frame> stack;
    int line = 1;
    std::string root_ptr;

    auto value_pointer = [&]() -> std::string {
        if (stack.empty()) return root_ptr;
        Frame& f = stack.back();
        if (f.object) return f.value_ptr;
        return f.prefix + "/" + std::to_string(f.index);
    };
    auto start_value = [&]() {
        if (stack.empty() || stack.back().object) return;
        Frame& f = stack.back();
        if (!f.value_started) {
            f.value_started = true;
            lines.emplace(value_pointer(), line);
        }
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (ch == '\n') {
            ++line;
            continue;
        }
        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == ':') continue;
        if (ch == '"') {
            std::string s;
            for (++i; i < text.size() && text[i] != '"'; ++i) {
                if (text[i] == '\\' && i + 1 < text.size()) ++i;
                s += text[i];
            }
            if (!stack.empty() && stack.back().object && stack.back().expecting_key) {
                Frame& f = stack.back();
                f.value_ptr = f.prefix + "/" + escape_token(s);
                f.expecting_key = false;
                lines.emplace(f.value_ptr, line);
            } else {
                start_value();
            }
            continue;
        }
        if (ch == '{' || ch == '[') {
            start_value();
            const std::string ptr = value_pointer();
            lines.emplace(ptr, line);
            stack.push_back(Frame{ch == '{', ptr, 0, true, false, {}});
            continue;
        }
        if (ch == '}' || ch == ']') {
            if (!stack.empty()) stack.pop_back();
            continue;
        }
        if (ch == ',') {
            if (!stack.empty()) {
                Frame& f = stack.back();
                if (f.object) {
                    f.expecting_key = true;
                } else {
                    ++f.index;
                    f.value_started = false;
                }
            }
            continue;
        }
        start_value();
    }
    return lines;
}

std::string RunConfig::where(const std::string& pointer) const {
    std::string p = pointer;
    for (;;) {
        auto it = lines.find(p);
        if (it != lines.end()) return source + ":" + std::to_string(it->second) + ": " + pointer;
        if (p.empty()) break;
        p = p.substr(0, p.rfind('/'));
    }
    return source + ": " + pointer;
}

void RunConfig::fail(const std::string& pointer, const std::string& message) const {
    throw Error(ErrorCode::ConfigError, where(pointer) + ": " + message);
}

const ResonatorParams& RunConfig::require_resonator() const {
    if (!resonator) fail("/resonator", "section is required by this command");
    return *resonator;
}

double RunConfig::pump_omega() const {
    if (omega_p) return *omega_p;
    return require_resonator().omega_r;
}

const std::vector<double>& RunConfig::require_grid(const std::optional<std::vector<double>>& g,
                                                   const std::string& pointer) const {
    if (!g) fail(pointer, "grid is required by this command");
    return *g;
}

double RunConfig::efficiency() const {
    if (eta) return *eta;
    if (budget) return efficiency_from_budget(*budget);
    return 1.0;
}

namespace {

class Reader {
public:
    Reader(RunConfig& cfg, std::string base_dir) : cfg_(cfg), base_(std::move(base_dir)) {}

    const json& at(const json& obj, const std::string& ptr) const {
        return obj.at(json::json_pointer(ptr));
    }

    void only_keys(const json& root, const std::string& ptr, std::set<std::string> allowed) const {
        const json& obj = ptr.empty() ? root : at(root, ptr);
        if (!obj.is_object()) cfg_.fail(ptr, "expected an object");
        for (const auto& [k, v] : obj.items()) {
            if (!allowed.count(k)) cfg_.fail(ptr + "/" + escape_token(k), "unknown key");
        }
    }

    static bool has(const json& root, const std::string& ptr) {
        return root.contains(json::json_pointer(ptr));
    }

    double number(const json& root, const std::string& ptr) const {
        const json& v = at(root, ptr);
        if (!v.is_number()) cfg_.fail(ptr, "expected a number");
        return v.get<double>();
    }

    std::optional<double> opt_number(const json& root, const std::string& ptr) const {
        if (!has(root, ptr)) return std::nullopt;
        return number(root, ptr);
    }

    std::string string(const json& root, const std::string& ptr) const {
        const json& v = at(root, ptr);
        if (!v.is_string()) cfg_.fail(ptr, "expected a string");
        return v.get<std::string>();
    }

    std::string path(const json& root, const std::string& ptr) const {
        const std::string raw = string(root, ptr);
        fs::path p(raw);
        if (p.is_relative() && !base_.empty()) p = fs::path(base_) / p;
        const std::string resolved = p.lexically_normal().string();
        if (!fs::is_regular_file(resolved)) cfg_.fail(ptr, "file '" + resolved + "' does not exist");
        cfg_.input_files.push_back(resolved);
        return resolved;
    }

    std::vector<double> grid(const json& root, const std::string& ptr) const {
        const json& v = at(root, ptr);
        std::vector<double> out;
        if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                out.push_back(number(root, ptr + "/" + std::to_string(i)));
            }
        } else if (v.is_object()) {
            only_keys(root, ptr, {"start", "stop", "points"});
            for (const char* k : {"start", "stop", "points"}) {
                if (!v.contains(k)) cfg_.fail(ptr, std::string("missing key '") + k + "'");
            }
            const json& pts = v.at("points");
            if (!pts.is_number_integer() || pts.get<long long>() < 1) {
                cfg_.fail(ptr + "/points", "expected a positive integer");
            }
            const double start = number(root, ptr + "/start");
            const double stop = number(root, ptr + "/stop");
            const auto n = pts.get<long long>();
            if (n > 10'000'000) cfg_.fail(ptr + "/points", "too many points");
            if (n > 1 && start == stop) cfg_.fail(ptr, "start equals stop");
            out = linspace(start, stop, static_cast<int>(n));
        } else {
            cfg_.fail(ptr, "expected an array or {start, stop, points}");
        }
        if (out.empty()) cfg_.fail(ptr, "grid is empty");
        for (std::size_t i = 2; i < out.size(); ++i) {
            if ((out[i] - out[i - 1]) * (out[1] - out[0]) <= 0.0) cfg_.fail(ptr, "grid is not monotone");
        }
        if (out.size() == 2 && out[0] == out[1]) cfg_.fail(ptr, "grid is not monotone");
        return out;
    }

    template <class F>
    auto located(const std::string& ptr, F&& f) const {
        try {
            return f();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ConfigError) throw;
            throw Error(ErrorCode::ConfigError,
                        cfg_.where(ptr) + ": " + std::string(to_string(e.code())) + ": " + e.message());
        }
    }

private:
    RunConfig& cfg_;
    std::string base_;
};

}  // namespace

LossBudget parse_loss_budget(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, source + ": " + e.what());
    }
    RunConfig loc;
    loc.source = source;
    loc.lines = json_pointer_lines(text);
    if (!doc.is_array()) loc.fail("", "loss budget must be an array of {label, loss_db}");
    LossBudget b;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string ptr = "/" + std::to_string(i);
        const json& e = doc[i];
        if (!e.is_object() || !e.contains("label") || !e.contains("loss_db") || !e["label"].is_string() ||
            !e["loss_db"].is_number()) {
            loc.fail(ptr, "entry must be {\"label\": string, \"loss_db\": number}");
        }
        b.entries.push_back({e["label"].get<std::string>(), e["loss_db"].get<double>()});
    }
    return b;
}

RunConfig parse_config(const std::string& text, const std::string& source,
                       const std::string& base_dir) {
    RunConfig cfg;
    cfg.source = source;
    cfg.text = text;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, source + ": " + e.what());
    }
    cfg.lines = json_pointer_lines(text);
    Reader r(cfg, base_dir);
    if (!doc.is_object()) cfg.fail("", "config must be a JSON object");
    r.only_keys(doc, "", {"resonator", "pump", "detection", "grids", "spectrum", "threshold",
                          "fit_transmission", "fit_dispersion", "reduce_trace"});

    if (Reader::has(doc, "/resonator")) {
        const std::string s = "/resonator";
        r.only_keys(doc, s, {"kappa_rad_s", "gamma_rad_s", "g_opt_rad_s", "g_th_rad_s", "lambda_m",
                             "omega_r_rad_s", "radius_m", "n_eff"});
        const double kappa = r.number(doc, s + "/kappa_rad_s");
        const double gamma = r.number(doc, s + "/gamma_rad_s");
        const double g_opt = r.opt_number(doc, s + "/g_opt_rad_s").value_or(0.0);
        const double g_th = r.opt_number(doc, s + "/g_th_rad_s").value_or(0.0);
        const auto lambda = r.opt_number(doc, s + "/lambda_m");
        const auto omega = r.opt_number(doc, s + "/omega_r_rad_s");
        if (!(kappa > 0.0)) cfg.fail(s + "/kappa_rad_s", "must be > 0");
        if (!(gamma >= 0.0)) cfg.fail(s + "/gamma_rad_s", "must be >= 0");
        if (!(g_opt >= 0.0)) cfg.fail(s + "/g_opt_rad_s", "must be >= 0");
        if (!(g_th >= 0.0)) cfg.fail(s + "/g_th_rad_s", "must be >= 0");
        if (lambda && !(*lambda > 0.0)) cfg.fail(s + "/lambda_m", "must be > 0");
        if (omega && !(*omega > 0.0)) cfg.fail(s + "/omega_r_rad_s", "must be > 0");
        std::optional<ResonatorGeometry> geom;
        const auto radius = r.opt_number(doc, s + "/radius_m");
        const auto n_eff = r.opt_number(doc, s + "/n_eff");
        if (radius.has_value() != n_eff.has_value()) cfg.fail(s, "radius_m and n_eff go together");
        if (radius) {
            if (!(*radius > 0.0) || !(*n_eff > 0.0)) cfg.fail(s + "/radius_m", "geometry must be positive");
            geom = ResonatorGeometry{*radius, *n_eff};
        }
        cfg.resonator = r.located(s, [&] { return make_resonator(kappa, gamma, g_opt, g_th, lambda, omega, geom); });
    }

    if (Reader::has(doc, "/pump")) {
        const std::string s = "/pump";
        r.only_keys(doc, s, {"lambda_m", "omega_p_rad_s", "p_in_w", "powers_w", "directions"});
        const auto lambda = r.opt_number(doc, s + "/lambda_m");
        const auto omega = r.opt_number(doc, s + "/omega_p_rad_s");
        if (lambda && omega) cfg.fail(s, "give lambda_m or omega_p_rad_s, not both");
        if (lambda) cfg.omega_p = r.located(s + "/lambda_m", [&] { return omega_from_wavelength(*lambda); });
        if (omega) {
            if (!(*omega > 0.0)) cfg.fail(s + "/omega_p_rad_s", "must be > 0");
            cfg.omega_p = *omega;
        }
        const bool single = Reader::has(doc, s + "/p_in_w");
        const bool list = Reader::has(doc, s + "/powers_w");
        if (single && list) cfg.fail(s, "give p_in_w or powers_w, not both");
        if (single) cfg.powers = {r.number(doc, s + "/p_in_w")};
        if (list) cfg.powers = r.grid(doc, s + "/powers_w");
        for (std::size_t i = 0; i < cfg.powers.size(); ++i) {
            if (!(cfg.powers[i] >= 0.0) || !std::isfinite(cfg.powers[i])) {
                cfg.fail(s + (single ? "/p_in_w" : "/powers_w/" + std::to_string(i)), "power must be >= 0");
            }
        }
        if (Reader::has(doc, s + "/directions")) {
            const json& d = doc.at(json::json_pointer(s + "/directions"));
            if (!d.is_array() || d.empty()) cfg.fail(s + "/directions", "expected a non-empty array");
            cfg.directions.clear();
            for (std::size_t i = 0; i < d.size(); ++i) {
                const std::string p = s + "/directions/" + std::to_string(i);
                const std::string v = r.string(doc, p);
                if (v == "down") {
                    cfg.directions.push_back(SweepDirection::Decreasing);
                } else if (v == "up") {
                    cfg.directions.push_back(SweepDirection::Increasing);
                } else {
                    cfg.fail(p, "direction must be \"up\" or \"down\"");
                }
            }
        }
    }

    if (Reader::has(doc, "/detection")) {
        const std::string s = "/detection";
        r.only_keys(doc, s, {"eta", "loss_budget", "loss_budget_file"});
        cfg.eta = r.opt_number(doc, s + "/eta");
        if (cfg.eta && !(*cfg.eta >= 0.0 && *cfg.eta <= 1.0)) cfg.fail(s + "/eta", "eta must lie in [0, 1]");
        const bool inline_budget = Reader::has(doc, s + "/loss_budget");
        const bool file_budget = Reader::has(doc, s + "/loss_budget_file");
        if (inline_budget && file_budget) cfg.fail(s, "give loss_budget or loss_budget_file, not both");
        if (inline_budget) {
            const std::string p = s + "/loss_budget";
            const json& arr = doc.at(json::json_pointer(p));
            if (!arr.is_array()) cfg.fail(p, "expected an array of {label, loss_db}");
            LossBudget b;
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string ep = p + "/" + std::to_string(i);
                r.only_keys(doc, ep, {"label", "loss_db"});
                b.entries.push_back({r.string(doc, ep + "/label"), r.number(doc, ep + "/loss_db")});
            }
            cfg.budget = b;
        }
        if (file_budget) {
            const std::string file = r.path(doc, s + "/loss_budget_file");
            cfg.budget = parse_loss_budget(read_text_file(file), file);
        }
        if (cfg.budget) {
            r.located(s + "/loss_budget", [&] { return efficiency_from_budget(*cfg.budget); });
        }
    }

    if (Reader::has(doc, "/grids")) {
        const std::string s = "/grids";
        r.only_keys(doc, s, {"delta_p_rad_s", "omega_rad_s", "phi_rad"});
        if (Reader::has(doc, s + "/delta_p_rad_s")) cfg.delta_p_grid = r.grid(doc, s + "/delta_p_rad_s");
        if (Reader::has(doc, s + "/omega_rad_s")) cfg.omega_grid = r.grid(doc, s + "/omega_rad_s");
        if (Reader::has(doc, s + "/phi_rad")) cfg.phi_grid = r.grid(doc, s + "/phi_rad");
    }

    if (Reader::has(doc, "/spectrum")) {
        const std::string s = "/spectrum";
        r.only_keys(doc, s, {"mode", "etas"});
        if (Reader::has(doc, s + "/mode")) {
            const std::string m = r.string(doc, s + "/mode");
            if (m == "detuning") {
                cfg.spectrum_mode = SpectrumMode::Detuning;
            } else if (m == "locked") {
                cfg.spectrum_mode = SpectrumMode::Locked;
            } else if (m == "efficiency") {
                cfg.spectrum_mode = SpectrumMode::Efficiency;
            } else {
                cfg.fail(s + "/mode", "mode must be \"detuning\", \"locked\" or \"efficiency\"");
            }
        }
        if (Reader::has(doc, s + "/etas")) {
            cfg.etas = r.grid(doc, s + "/etas");
            for (std::size_t i = 0; i < cfg.etas.size(); ++i) {
                if (!(cfg.etas[i] >= 0.0 && cfg.etas[i] <= 1.0)) {
                    cfg.fail(s + "/etas/" + std::to_string(i), "eta must lie in [0, 1]");
                }
            }
        }
    }

    if (Reader::has(doc, "/threshold")) {
        const std::string s = "/threshold";
        r.only_keys(doc, s, {"p_th_w", "lambda_m"});
        cfg.p_th_observed = r.number(doc, s + "/p_th_w");
        if (!(*cfg.p_th_observed > 0.0)) cfg.fail(s + "/p_th_w", "must be > 0");
        cfg.threshold_lambda = r.opt_number(doc, s + "/lambda_m");
        if (cfg.threshold_lambda && !(*cfg.threshold_lambda > 0.0)) cfg.fail(s + "/lambda_m", "must be > 0");
    }

    if (Reader::has(doc, "/fit_transmission")) {
        const std::string s = "/fit_transmission";
        r.only_keys(doc, s, {"csv", "regime", "shift_csvs", "no_dip_threshold", "poor_fit_threshold",
                             "g_sum_max_rad_s", "scan_points"});
        cfg.transmission_csv = r.path(doc, s + "/csv");
        if (Reader::has(doc, s + "/regime")) {
            const std::string v = r.string(doc, s + "/regime");
            if (v == "over") {
                cfg.regime = CouplingRegime::Over;
            } else if (v == "under") {
                cfg.regime = CouplingRegime::Under;
            } else {
                cfg.fail(s + "/regime", "regime must be \"over\" or \"under\"");
            }
        }
        if (Reader::has(doc, s + "/shift_csvs")) {
            const json& a = doc.at(json::json_pointer(s + "/shift_csvs"));
            if (!a.is_array()) cfg.fail(s + "/shift_csvs", "expected an array of paths");
            for (std::size_t i = 0; i < a.size(); ++i) {
                cfg.shift_csvs.push_back(r.path(doc, s + "/shift_csvs/" + std::to_string(i)));
            }
        }
        if (auto v = r.opt_number(doc, s + "/no_dip_threshold")) cfg.resonance_options.no_dip_threshold = *v;
        if (auto v = r.opt_number(doc, s + "/poor_fit_threshold")) cfg.resonance_options.poor_fit_threshold = *v;
        if (auto v = r.opt_number(doc, s + "/g_sum_max_rad_s")) {
            if (!(*v > 0.0)) cfg.fail(s + "/g_sum_max_rad_s", "must be > 0");
            cfg.shift_options.g_sum_max = *v;
        }
        if (Reader::has(doc, s + "/scan_points")) {
            const json& v = doc.at(json::json_pointer(s + "/scan_points"));
            if (!v.is_number_integer() || v.get<long long>() < 3 || v.get<long long>() > 100000) {
                cfg.fail(s + "/scan_points", "expected an integer in [3, 100000]");
            }
            cfg.shift_options.scan_points = static_cast<int>(v.get<long long>());
        }
    }

    if (Reader::has(doc, "/fit_dispersion")) {
        r.only_keys(doc, "/fit_dispersion", {"csv"});
        cfg.resonance_csv = r.path(doc, "/fit_dispersion/csv");
    }

    if (Reader::has(doc, "/reduce_trace")) {
        const std::string s = "/reduce_trace";
        r.only_keys(doc, s, {"trace_csv", "reference_csv", "low_percentile", "high_percentile",
                             "detrend_reference"});
        cfg.trace_csv = r.path(doc, s + "/trace_csv");
        cfg.reference_csv = r.path(doc, s + "/reference_csv");
        if (auto v = r.opt_number(doc, s + "/low_percentile")) cfg.trace_options.low_percentile = *v;
        if (auto v = r.opt_number(doc, s + "/high_percentile")) cfg.trace_options.high_percentile = *v;
        const auto& o = cfg.trace_options;
        if (!(o.low_percentile >= 0.0 && o.low_percentile < o.high_percentile && o.high_percentile <= 100.0)) {
            cfg.fail(s, "need 0 <= low_percentile < high_percentile <= 100");
        }
        if (Reader::has(doc, s + "/detrend_reference")) {
            const json& v = doc.at(json::json_pointer(s + "/detrend_reference"));
            if (!v.is_boolean()) cfg.fail(s + "/detrend_reference", "expected true or false");
            cfg.trace_options.detrend_reference = v.get<bool>();
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    const std::string text = read_text_file(path);
    return parse_config(text, path, fs::path(path).parent_path().string());
}

}  // namespace kerrsq
