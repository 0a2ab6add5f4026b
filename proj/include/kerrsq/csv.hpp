#pragma once

// CSV dialect: comma separated, mandatory header row, '.' decimal point,
// optional "# key=value" metadata lines before the header.

#include "kerrsq/characterization.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kerrsq {

/// Shortest decimal that round-trips to the same double (at most 17 digits).
[[nodiscard]] std::string format_double(double v);

/// Parses a whole field as a double; throws SchemaError naming `what` otherwise.
[[nodiscard]] double parse_double(const std::string& field, const std::string& what);

struct CsvTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::optional<std::size_t> column(const std::string& name) const;
    [[nodiscard]] std::size_t require_column(const std::string& name) const;
    [[nodiscard]] std::vector<double> numeric_column(const std::string& name) const;
    [[nodiscard]] std::optional<std::string> meta(const std::string& key) const;
};

/// `source` labels error messages (usually the file path).
[[nodiscard]] CsvTable parse_csv(const std::string& text, const std::string& source);
[[nodiscard]] CsvTable read_csv_file(const std::string& path);
void write_csv(std::ostream& os, const CsvTable& table);

[[nodiscard]] std::string read_text_file(const std::string& path);

// Typed readers and writers for the input schemas.
[[nodiscard]] TransmissionTrace transmission_from_csv(const CsvTable& t);
[[nodiscard]] CsvTable transmission_to_csv(const TransmissionTrace& trace);
[[nodiscard]] ResonanceList resonances_from_csv(const CsvTable& t);
[[nodiscard]] CsvTable resonances_to_csv(const ResonanceList& list);
[[nodiscard]] ZeroSpanTrace zero_span_from_csv(const CsvTable& t);
[[nodiscard]] CsvTable zero_span_to_csv(const ZeroSpanTrace& trace);

}  // namespace kerrsq
