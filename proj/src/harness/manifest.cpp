#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "atorus/harness.hpp"

namespace atorus {

namespace fs = std::filesystem;

namespace {

double now_s() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

RunDir::RunDir(const RunConfig& cfg, const std::string& command)
    : cfg_(cfg), command_(command), hash_(cfg.hash(command)), t0_(now_s()) {
  fs::path base = cfg.out_dir;
  if (base.empty()) {
    const char* env = std::getenv("ATORUS_OUT");
    base = env && *env ? env : "runs";
  }
  root_ = base / hash_;
  fs::create_directories(root_ / "fields");
  fs::create_directories(root_ / "tables");
}

bool RunDir::complete() const {
  fs::path m = root_ / "manifest.json";
  if (!fs::exists(m)) return false;
  try {
    json j = json::parse(slurp(m));
    return j.value("config_hash", "") == hash_ && j.value("status", "") == "complete";
  } catch (const json::exception&) {
    return false;
  }
}

fs::path RunDir::field_path(const std::string& name) const { return root_ / "fields" / name; }
fs::path RunDir::table_path(const std::string& name) const { return root_ / "tables" / name; }

void RunDir::save_table(const std::string& name, const CsvTable& t) {
  save_csv(table_path(name), t);
  artifacts_.push_back("tables/" + name);
}

void RunDir::save_field(const std::string& name, const Field& f) {
  save_snapshot(field_path(name).string(), f, cfg_.binary_fields);
  artifacts_.push_back("fields/" + name);
}

void RunDir::warn(const std::string& w) { warnings_.push_back(w); }

void RunDir::finish() {
  json cfgj = cfg_.to_json();
  std::string cfg_text = cfgj.dump(2) + "\n";
  {
    std::ofstream os(root_ / "config.json", std::ios::binary);
    os << cfg_text;
  }
  json index = json::array();
  for (const std::string& a : artifacts_) {
    std::string bytes = slurp(root_ / a);
    index.push_back({{"path", a}, {"bytes", bytes.size()}, {"fnv1a", fnv1a_hex(bytes)}});
  }
  index.push_back({{"path", "config.json"}, {"bytes", cfg_text.size()}, {"fnv1a", fnv1a_hex(cfg_text)}});
  manifest_ = {{"command", command_},
               {"config_hash", hash_},
               {"config", cfgj},
               {"versions", {{"atorus", "1.0.0"}, {"compiler", __VERSION__}, {"cxx", long(__cplusplus)}}},
               {"wall_time_s", now_s() - t0_},
               {"warnings", warnings_},
               {"artifacts", index},
               {"results", results_},
               {"status", "complete"}};
  std::ofstream os(root_ / "manifest.json", std::ios::binary);
  os << manifest_.dump(2) << "\n";
}

}  // namespace atorus
