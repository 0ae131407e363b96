#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hmh/spectral_identities.hpp"

namespace hmh {

// Field-level validation failure; what() lists every offending field.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::vector<std::string>& problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct Tolerances {
  double orthonormality = 1e-10;
  double laguerre = 1e-12;
  double parseval = 1e-8;
  double heat = 1e-8;
  double isometry = 1e-5;
  double direct_integral = 1e-4;
  double gutzmer = 1e-5;
  double poisson = 1e-4;
  double plancherel = 1e-6;
  double paley_wiener = 1e-4;
  double cross_term = 1e-6;
  double metaplectic = 1e-9;
  double unitarity = 1e-10;
  double block_closed_form = 1e-10;
  double golden_drift = 1e-9;
};

struct QuadratureSizes {
  int gram = 32;
  int parseval = 64;
  int heat = 40;
  int bergman_2n = 16;
  int bergman_G = 40;
  int direct_2n = 10;
  int direct_G = 40;
  int gutzmer_2n = 24;
  int poisson_2n = 16;
  int paley_wiener_2n = 16;
};

struct RunConfig {
  int n = 1;
  int d = 1;
  int M_trunc = 4;
  int mK_band = 3;
  std::array<double, 2> lambda_interval{0.5, 1.5};
  int lambda_nodes = 9;
  QuadratureSizes quad;
  double t = 0.5;
  double q = 1.0;
  double r = 0.3;
  std::vector<double> H{0.25};
  double s = 0.1;
  double im_bound = 0.6;
  int band_terms = 6;
  int random_functions = 10;
  int random_slices = 5;
  std::uint64_t seed = 42;
  Tolerances tol;
  // Empty: $HMH_DATA_DIR/golden_constants.json, else the build-time data dir
  std::string golden_path;

  // Throws ConfigError naming each invalid field.
  void validate() const;
  nlohmann::ordered_json to_json() const;
  // Unknown keys are rejected; missing keys keep their defaults.
  static RunConfig from_json(const nlohmann::json& j);
  std::string resolved_golden_path() const;
};

// Reads HMH_CONFIG if set, else defaults.
RunConfig load_default_config();
RunConfig load_config_file(const std::string& path);

enum class Suite { Orthonormality, Heat, Bergman, Gutzmer, Poisson, Plancherel, PaleyWiener, All };
Suite parse_suite(const std::string& name);
std::string to_string(Suite suite);

enum class TestFunctionKind { SingleCoeff, RandomBand, LemmaBlock };

// Coefficients come from SplitMix64(seed, stream); the function is scaled to unit norm.
BandLimitedFunction make_test_function(const RunConfig& config, TestFunctionKind kind,
                                       std::uint64_t stream = 0);
// One lambda slice with d = 0 and unit coefficient norm.
TwistedSlice make_test_slice(const RunConfig& config, double lambda, std::uint64_t stream);

// exp(-1 / (1 - x^2)) on the interval, x the affine image of |lambda|.
double profile_bump(double lambda, double a, double b);

struct CheckResult {
  VerificationReport report;
  double wall_ms = 0.0;
};

struct SuiteResult {
  std::string suite;
  RunConfig config;
  std::vector<CheckResult> checks;
  bool passed = false;

  // wall_ms is null unless include_timings.
  nlohmann::ordered_json to_json(bool include_timings = false) const;
};

SuiteResult run_suite(const RunConfig& config, Suite suite);

// Constants as the library currently uses them, keyed like the golden file.
std::map<std::string, double> library_constants();
std::map<std::string, double> load_golden(const std::string& path);
void write_golden(const std::string& path, const std::map<std::string, double>& constants);
std::vector<VerificationReport> golden_drift_reports(const RunConfig& config);

struct DumpOptions {
  std::string object = "special_hermite";
  int grid = 41;
  double extent = 4.0;
  double lambda = 1.0;
  int alpha = 0;
  int beta = 0;
  double t = 0.5;
};

// CSV of values on a square grid in the first (x, u) coordinate plane.
void dump_csv(const RunConfig& config, const DumpOptions& opts, std::ostream& out);

}  // namespace hmh
