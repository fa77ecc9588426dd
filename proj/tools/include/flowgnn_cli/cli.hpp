#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace flowgnn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

// Runs the `flowgnn` command line. `args` excludes the program name.
// Returns the process exit code; never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Replaces flags with the `--key value` pairs of the JSON object named by
// --config, so the file wins over the command line. Arrays become
// comma-separated values.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

// Writes via a temporary file and rename, so readers never see a partial file.
void write_json_atomic(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace flowgnn::cli
