#include "kerrsq/csv.hpp"

#include "kerrsq/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace kerrsq {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

double parse_double(const std::string& field, const std::string& what) {
    std::string_view s(field);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw Error(ErrorCode::SchemaError, what + ": '" + field + "' is not a number");
    }
    return v;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(trim(cur));
    return out;
}

}  // namespace

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t CsvTable::require_column(const std::string& name) const {
    if (auto c = column(name)) return *c;
    throw Error(ErrorCode::SchemaError, "missing column '" + name + "'");
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
    const std::size_t c = require_column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.push_back(parse_double(rows[r][c], "column '" + name + "' row " + std::to_string(r + 1)));
    }
    return out;
}

std::optional<std::string> CsvTable::meta(const std::string& key) const {
    for (const auto& [k, v] : metadata) {
        if (k == key) return v;
    }
    return std::nullopt;
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (!have_header && line[0] == '#') {
            const std::string body = trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq != std::string::npos) {
                t.metadata.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
            }
            continue;
        }
        auto fields = split(line);
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw Error(ErrorCode::SchemaError, source + ":" + std::to_string(line_no) + ": expected " +
                                                    std::to_string(t.header.size()) + " fields, got " +
                                                    std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
    }
    if (!have_header) throw Error(ErrorCode::SchemaError, source + ": missing header row");
    return t;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CsvTable read_csv_file(const std::string& path) { return parse_csv(read_text_file(path), path); }

void write_csv(std::ostream& os, const CsvTable& table) {
    for (const auto& [k, v] : table.metadata) os << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        os << (i ? "," : "") << table.header[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
}

TransmissionTrace transmission_from_csv(const CsvTable& t) {
    TransmissionTrace tr;
    const bool detuning = t.column("delta_p_rad_s").has_value();
    const bool absolute = t.column("omega_p_rad_s").has_value();
    if (detuning == absolute) {
        throw Error(ErrorCode::SchemaError,
                    "need exactly one of columns 'delta_p_rad_s' or 'omega_p_rad_s'");
    }
    tr.axis = detuning ? FrequencyAxis::Detuning : FrequencyAxis::AbsoluteOmega;
    tr.frequency = t.numeric_column(detuning ? "delta_p_rad_s" : "omega_p_rad_s");
    tr.transmission = t.numeric_column("transmission");
    if (auto p = t.meta("p_in_w")) tr.p_in = parse_double(*p, "metadata 'p_in_w'");
    if (auto d = t.meta("direction")) {
        if (*d == "down") {
            tr.direction = SweepDirection::Decreasing;
        } else if (*d == "up") {
            tr.direction = SweepDirection::Increasing;
        } else {
            throw Error(ErrorCode::SchemaError, "metadata 'direction' must be 'up' or 'down'");
        }
    }
    tr.validate();
    return tr;
}

CsvTable transmission_to_csv(const TransmissionTrace& trace) {
    CsvTable t;
    t.metadata = {{"p_in_w", format_double(trace.p_in)}, {"direction", to_string(trace.direction)}};
    t.header = {trace.axis == FrequencyAxis::Detuning ? "delta_p_rad_s" : "omega_p_rad_s",
                "transmission"};
    for (std::size_t i = 0; i < trace.frequency.size(); ++i) {
        t.rows.push_back({format_double(trace.frequency[i]), format_double(trace.transmission[i])});
    }
    return t;
}

ResonanceList resonances_from_csv(const CsvTable& t) {
    const std::size_t c_mu = t.require_column("mu");
    const auto omega = t.numeric_column("omega_rad_s");
    ResonanceList list;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string& f = t.rows[r][c_mu];
        int mu = 0;
        const auto res = std::from_chars(f.data(), f.data() + f.size(), mu);
        if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size()) {
            throw Error(ErrorCode::SchemaError,
                        "column 'mu' row " + std::to_string(r + 1) + ": '" + f + "' is not an integer");
        }
        list.entries.push_back({mu, omega[r]});
    }
    return list;
}

CsvTable resonances_to_csv(const ResonanceList& list) {
    CsvTable t;
    t.header = {"mu", "omega_rad_s"};
    for (const auto& e : list.entries) t.rows.push_back({std::to_string(e.mu), format_double(e.omega)});
    return t;
}

ZeroSpanTrace zero_span_from_csv(const CsvTable& t) {
    ZeroSpanTrace z;
    z.t = t.numeric_column("t_s");
    z.power_dbm = t.numeric_column("power_dbm");
    auto meta = [&](const char* key) {
        auto v = t.meta(key);
        if (!v) throw Error(ErrorCode::SchemaError, std::string("missing metadata line '") + key + "'");
        return parse_double(*v, std::string("metadata '") + key + "'");
    };
    z.metadata.center_hz = meta("center_hz");
    z.metadata.rbw_hz = meta("rbw_hz");
    z.metadata.vbw_hz = meta("vbw_hz");
    return z;
}

CsvTable zero_span_to_csv(const ZeroSpanTrace& trace) {
    CsvTable t;
    t.metadata = {{"center_hz", format_double(trace.metadata.center_hz)},
                  {"rbw_hz", format_double(trace.metadata.rbw_hz)},
                  {"vbw_hz", format_double(trace.metadata.vbw_hz)}};
    t.header = {"t_s", "power_dbm"};
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        t.rows.push_back({format_double(trace.t[i]), format_double(trace.power_dbm[i])});
    }
    return t;
}

}  // namespace kerrsq
