#pragma once

#include "kerrsq/config.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kerrsq {

enum class OutputFormat { Csv, Json };

struct CommandOptions {
    int threads = 1;
    std::uint64_t seed = 0;
    std::optional<OutputFormat> format;  // command default when empty
};

struct CommandOutput {
    std::string body;
    std::vector<std::string> warnings;
};

[[nodiscard]] const std::vector<std::string>& command_names();

/// Runs one subcommand. Throws Error on failure; warnings never throw.
[[nodiscard]] CommandOutput run_command(const std::string& name, const RunConfig& config,
                                        const CommandOptions& options);

/// Lowercase hex SHA-256.
[[nodiscard]] std::string sha256_hex(const std::string& bytes);

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace kerrsq
