#pragma once
// Command-line front end: run configuration, content-addressed run
// directories, CSV tables and the subcommands noise | operator | solve |
// converge | check.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "atorus/evolve.hpp"

namespace atorus {

using json = nlohmann::json;

// exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCheck = 4;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // torus
  int dim = 2;
  int K = 16;
  int grid_n = 0;  // 0: dealiasing default
  // noise
  std::uint64_t seed = 1;
  std::vector<double> eps{0.25, 0.125, 0.0625};
  std::string mollifier = "bump";
  bool zero_noise = false;
  std::string c2_mode = "absolute";
  // exponents
  double alpha = -1.1;
  double gamma = 0.8;
  double beta = 1.2;
  bool allow_out_of_range = false;
  // operator
  double margin = 1.0;
  int N = -1;  // auto
  double target = 0.5;
  std::string formulation = "consistent";
  int samples = 20;
  // evolution
  EvolutionConfig evolution;
  double data_s = 2.0;       // initial data regularity
  double data_amp = 1.0;     // L^inf size of the initial data
  std::uint64_t data_seed = 11;
  std::vector<double> times{0.1, 0.25, 0.5};
  std::string reference = "identity";  // converge: identity | finest
  std::string data_mode = "domain";    // converge: domain | energy
  // output
  std::string out_dir;  // empty: $ATORUS_OUT or ./runs
  bool binary_fields = true;
  int workers = 1;

  static RunConfig defaults(int dim);
  void validate() const;
  TorusSpec spec() const;
  json to_json() const;
  static RunConfig from_json(const json& j);  // missing keys keep dim defaults
  std::string hash(const std::string& command) const;
};

RunConfig load_config(const std::string& path);
std::vector<double> parse_list(const std::string& s);

// CSV with header row, '.' decimal separator, lossless doubles.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  void add(std::vector<std::string> row);
  std::size_t col(const std::string& name) const;
  double num(std::size_t row, const std::string& name) const;
};
std::string fmt(double x);  // shortest round-trip text; NaN -> blank
void write_csv(std::ostream& os, const CsvTable& t);
CsvTable read_csv(std::istream& is);
void save_csv(const std::filesystem::path& p, const CsvTable& t);
CsvTable load_csv(const std::filesystem::path& p);

std::string fnv1a_hex(const std::string& bytes);

// runs/<hash>/{manifest.json, config.json, fields/, tables/}
class RunDir {
 public:
  RunDir(const RunConfig& cfg, const std::string& command);
  const std::filesystem::path& root() const { return root_; }
  const std::string& hash() const { return hash_; }
  bool complete() const;  // finished manifest with the same hash
  std::filesystem::path field_path(const std::string& name) const;
  std::filesystem::path table_path(const std::string& name) const;
  void save_table(const std::string& name, const CsvTable& t);
  void save_field(const std::string& name, const Field& f);
  void warn(const std::string& w);
  json& results() { return results_; }
  void finish();  // writes manifest.json with the artifact index
  const json& manifest() const { return manifest_; }

 private:
  RunConfig cfg_;
  std::string command_, hash_;
  std::filesystem::path root_;
  std::vector<std::string> warnings_, artifacts_;
  json results_ = json::object();
  json manifest_;
  double t0_ = 0;
};

struct CommandOptions {
  bool force = false;        // ignore a cached run directory
  bool order_test = false;   // solve: dt sweep
  std::vector<std::string> suites;  // check: empty = all
  bool quiet = false;
};

struct CommandResult {
  std::filesystem::path dir;
  bool cached = false;
  json results;
};

CommandResult cmd_noise(const RunConfig& cfg, const CommandOptions& o);
CommandResult cmd_operator(const RunConfig& cfg, const CommandOptions& o);
CommandResult cmd_solve(const RunConfig& cfg, const CommandOptions& o);
CommandResult cmd_converge(const RunConfig& cfg, const CommandOptions& o);
// throws CheckFailed when a suite fails
CommandResult cmd_check(const RunConfig& cfg, const CommandOptions& o);

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
};
std::vector<std::string> check_suite_names();
SuiteResult run_check_suite(const std::string& name, const RunConfig& cfg);

// least-squares slope of log y against log x
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// maps exceptions to exit codes and prints the message
int exit_code_for(const std::exception& e);

}  // namespace atorus
