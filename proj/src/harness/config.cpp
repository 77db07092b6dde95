#include <cmath>
#include <fstream>
#include <sstream>

#include "atorus/harness.hpp"

namespace atorus {

namespace {

const char* eq_name(Equation e) {
  switch (e) {
    case Equation::nls: return "nls";
    case Equation::wave: return "wave";
    case Equation::linear_nls: return "linear-nls";
    case Equation::linear_wave: return "linear-wave";
  }
  return "nls";
}

Equation eq_of(const std::string& s) {
  if (s == "nls") return Equation::nls;
  if (s == "wave") return Equation::wave;
  if (s == "linear-nls") return Equation::linear_nls;
  if (s == "linear-wave") return Equation::linear_wave;
  throw ConfigError("unknown equation '" + s + "'");
}

const char* nl_name(Nonlinearity::Kind k) {
  switch (k) {
    case Nonlinearity::Kind::none: return "none";
    case Nonlinearity::Kind::cubic: return "cubic";
    case Nonlinearity::Kind::power: return "power";
    case Nonlinearity::Kind::bounded: return "bounded";
  }
  return "cubic";
}

Nonlinearity::Kind nl_of(const std::string& s) {
  if (s == "none") return Nonlinearity::Kind::none;
  if (s == "cubic") return Nonlinearity::Kind::cubic;
  if (s == "power") return Nonlinearity::Kind::power;
  if (s == "bounded") return Nonlinearity::Kind::bounded;
  throw ConfigError("unknown nonlinearity '" + s + "'");
}

template <class T>
void take(const json& j, const char* key, T& v) {
  if (j.contains(key)) v = j.at(key).get<T>();
}

bool inside(double x, double lo, double hi) { return x > lo && x < hi; }

}  // namespace

RunConfig RunConfig::defaults(int dim) {
  RunConfig c;
  c.dim = dim;
  if (dim == 3) {
    c.K = 8;
    c.alpha = 0.45;
    c.gamma = 1.2;
    c.beta = 1.2;
  }
  return c;
}

TorusSpec RunConfig::spec() const { return TorusSpec::make(dim, K, grid_n); }

void RunConfig::validate() const {
  if (dim != 2 && dim != 3) throw ConfigError("dim must be 2 or 3");
  spec().validate();
  if (eps.empty()) throw ConfigError("eps ladder is empty");
  for (double e : eps)
    if (!(e > 0)) throw ConfigError("eps values must be > 0");
  mollifier_by_id(mollifier);
  if (c2_mode != "absolute" && c2_mode != "signed") throw ConfigError("c2_mode must be absolute or signed");
  if (!allow_out_of_range) {
    bool ok = dim == 2 ? inside(alpha, -4.0 / 3.0, -1.0) && inside(gamma, 2.0 / 3.0, 1.0)
                       : inside(alpha, 0.0, 0.5) && inside(gamma, 1.0, 1.5);
    if (!ok)
      throw ConfigError(dim == 2 ? "exponents out of range: need alpha in (-4/3,-1), gamma in (2/3,1)"
                                 : "exponents out of range: need alpha in (0,1/2), gamma in (1,3/2)");
  }
  if (!(beta > 0)) throw ConfigError("beta must be > 0");
  if (!(margin > 0)) throw ConfigError("margin must be > 0");
  if (!(target > 0 && target < 1)) throw ConfigError("target must lie in (0,1)");
  if (formulation != "consistent" && formulation != "printed") throw ConfigError("formulation: consistent|printed");
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (reference != "identity" && reference != "finest") throw ConfigError("reference: identity|finest");
  if (data_mode != "domain" && data_mode != "energy") throw ConfigError("data_mode: domain|energy");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  try {
    evolution.validate(dim);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (double t : times)
    if (t < 0 || t > evolution.T + 1e-12) throw ConfigError("sample times must lie in [0, T]");
}

json RunConfig::to_json() const {
  const EvolutionConfig& e = evolution;
  return json{
      {"torus", {{"dim", dim}, {"K", K}, {"grid_n", grid_n}}},
      {"noise", {{"seed", seed}, {"eps", eps}, {"mollifier", mollifier}, {"zero_noise", zero_noise},
                 {"c2_mode", c2_mode}}},
      {"exponents", {{"alpha", alpha}, {"gamma", gamma}, {"beta", beta}, {"allow_out_of_range", allow_out_of_range}}},
      {"operator", {{"margin", margin}, {"N", N}, {"target", target}, {"formulation", formulation},
                    {"samples", samples}}},
      {"evolution",
       {{"equation", eq_name(e.equation)},
        {"nonlinearity", nl_name(e.nonlinearity.kind)},
        {"p", e.nonlinearity.p},
        {"cap", e.nonlinearity.cap},
        {"focusing", e.nonlinearity.focusing},
        {"dt", e.dt},
        {"T", e.T},
        {"scheme", e.scheme == Scheme::strang ? "strang" : "duhamel"},
        {"record_every", e.record_every},
        {"keep_snapshots", e.keep_snapshots},
        {"picard_tol", e.picard_tol},
        {"blowup_linf", e.blowup_linf},
        {"data_s", data_s},
        {"data_amp", data_amp},
        {"data_seed", data_seed},
        {"times", times},
        {"reference", reference},
        {"data_mode", data_mode}}},
      {"output", {{"dir", out_dir}, {"binary_fields", binary_fields}, {"workers", workers}}}};
}

RunConfig RunConfig::from_json(const json& root) {
  const json& j = root.contains("config") ? root.at("config") : root;  // a manifest works too
  int dim = 2;
  if (j.contains("torus")) take(j.at("torus"), "dim", dim);
  RunConfig c = defaults(dim);
  try {
    if (j.contains("torus")) {
      const json& t = j.at("torus");
      take(t, "K", c.K);
      take(t, "grid_n", c.grid_n);
    }
    if (j.contains("noise")) {
      const json& n = j.at("noise");
      take(n, "seed", c.seed);
      take(n, "eps", c.eps);
      take(n, "mollifier", c.mollifier);
      take(n, "zero_noise", c.zero_noise);
      take(n, "c2_mode", c.c2_mode);
    }
    if (j.contains("exponents")) {
      const json& x = j.at("exponents");
      take(x, "alpha", c.alpha);
      take(x, "gamma", c.gamma);
      take(x, "beta", c.beta);
      take(x, "allow_out_of_range", c.allow_out_of_range);
    }
    if (j.contains("operator")) {
      const json& o = j.at("operator");
      take(o, "margin", c.margin);
      take(o, "N", c.N);
      take(o, "target", c.target);
      take(o, "formulation", c.formulation);
      take(o, "samples", c.samples);
    }
    if (j.contains("evolution")) {
      const json& v = j.at("evolution");
      EvolutionConfig& e = c.evolution;
      if (v.contains("equation")) e.equation = eq_of(v.at("equation").get<std::string>());
      if (v.contains("nonlinearity")) e.nonlinearity.kind = nl_of(v.at("nonlinearity").get<std::string>());
      take(v, "p", e.nonlinearity.p);
      take(v, "cap", e.nonlinearity.cap);
      take(v, "focusing", e.nonlinearity.focusing);
      take(v, "dt", e.dt);
      take(v, "T", e.T);
      if (v.contains("scheme")) {
        std::string s = v.at("scheme").get<std::string>();
        if (s == "strang")
          e.scheme = Scheme::strang;
        else if (s == "duhamel" || s == "duhamel-fixedpoint")
          e.scheme = Scheme::duhamel;
        else
          throw ConfigError("unknown scheme '" + s + "'");
      }
      take(v, "record_every", e.record_every);
      take(v, "keep_snapshots", e.keep_snapshots);
      take(v, "picard_tol", e.picard_tol);
      take(v, "blowup_linf", e.blowup_linf);
      take(v, "data_s", c.data_s);
      take(v, "data_amp", c.data_amp);
      take(v, "data_seed", c.data_seed);
      take(v, "times", c.times);
      take(v, "reference", c.reference);
      take(v, "data_mode", c.data_mode);
    }
    if (j.contains("output")) {
      const json& o = j.at("output");
      take(o, "dir", c.out_dir);
      take(o, "binary_fields", c.binary_fields);
      take(o, "workers", c.workers);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

std::string RunConfig::hash(const std::string& command) const {
  json j = to_json();
  j["output"].erase("dir");
  j["output"].erase("workers");
  j["command"] = command;
  return fnv1a_hex(j.dump());
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return RunConfig::from_json(j);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + item + "'");
    }
    if (used != item.size()) throw ConfigError("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace atorus
