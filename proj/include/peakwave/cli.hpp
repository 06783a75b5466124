#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace peakwave::cli {

enum class Command { profile, sweep, spectrum, peaked_spectrum, strip, evolve, verify };
enum class MethodChoice { fd, fourier, both };

const char* to_string(Command c);
const char* to_string(MethodChoice m);

struct RunConfig {
  Command command = Command::profile;
  double c = 1.03;
  std::vector<double> c_list{1.01, 1.03, 1.05, 1.07, 1.09};
  int n_half = 300;
  double tol = 1e-14;
  MethodChoice method = MethodChoice::both;
  double t_end = 15.0;
  double dt = 2e-3;
  double delta = 1e-2;
  int intervals = 1024;  // characteristic labels
  std::vector<std::complex<double>> lambdas;  // strip samples; empty means the built-in set
  std::filesystem::path out_dir = "out";
  int jobs = 0;  // 0: hardware concurrency
  bool svg = false;
  bool dump_matrix = false;
};

/// Validation failure naming the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field(field) {}
  std::string field;
};

enum ExitCode : int { kSuccess = 0, kValidation = 1, kAborted = 2, kRowFailures = 3 };

void validate(const RunConfig& cfg);

/// Fields that influence results; out_dir and jobs are excluded.
nlohmann::json to_json(const RunConfig& cfg);
/// Overlays the keys present in j. Unknown keys are a ConfigError.
void apply_json(RunConfig& cfg, const nlohmann::json& j);
std::string config_hash(const RunConfig& cfg);

std::vector<std::complex<double>> default_strip_samples();

/// Executes one validated command. Prints one summary line per file written.
int run(const RunConfig& cfg, std::ostream& log);

/// Argument parsing, config file and PEAKWAVE_OUT handling, then run().
int main(int argc, char** argv);

}  // namespace peakwave::cli
