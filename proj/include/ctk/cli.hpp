#pragma once

// Command-line front end: config loading, run manifests, plot files and the
// subcommand dispatcher.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace ctk::cli {

using nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the TOML subset used by config files: [tables], dotted keys,
/// strings, integers, floats, booleans and inline arrays.
json parse_toml(const std::string& text);
/// By extension: .toml, otherwise JSON.
json load_config(const std::string& path);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);
std::string read_file(const std::string& path);

struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  json params = json::object();
  std::vector<std::string> inputs;  // hashed when written
  std::string started;
};

/// {command, argv, params, version, timestamps, input_hashes}.
json manifest_json(const Manifest& m);
/// Current UTC time, ISO 8601.
std::string utc_now();

enum class PlotKind { PhaseDiagram, FbrScaling, NuVsBeta };

/// Rows of numbers; column meaning per kind:
///   PhaseDiagram: alpha-d, delta, beta, m_abs
///   FbrScaling:   log R, log F
///   NuVsBeta:     beta, nu
/// Writes prefix.dat and prefix.gp and returns their paths.
std::vector<std::string> emit_plot_data(PlotKind kind, const std::vector<std::vector<double>>& rows,
                                        const std::string& prefix, const json& manifest);

/// Runs a command line; exit 0 on success, 1 on refused parameters or other
/// domain errors, 2 on usage errors.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctk::cli
