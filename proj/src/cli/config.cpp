#include "ddp/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "ddp/error.hpp"

namespace ddp::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kKeys = {
    "data",  "format",   "structure", "q",       "edges",      "sets",   "c0",     "c",         "K",
    "mu0",   "sigma0",   "x_min",     "x_max",   "iterations", "burn_in", "thin",  "mh_moves",  "mh_partner", "nu",
    "out",   "seed",     "dump_chain", "q_list", "c_list",     "mode",    "T",     "replicates", "n_per_t"};

template <typename T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::vector<int> int_or_list(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_number_integer()) return {v.get<int>()};
  if (v.is_array()) return get<std::vector<int>>(j, key);
  throw ConfigError(std::string("config key '") + key + "' must be an integer or a list of integers");
}

std::optional<double> number_or_auto(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_string() && v.get<std::string>() == "auto") return std::nullopt;
  if (v.is_null()) return std::nullopt;
  if (v.is_number()) return v.get<double>();
  throw ConfigError(std::string("config key '") + key + "' must be a number or \"auto\"");
}

}  // namespace

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");

  RunConfig cfg;
  if (j.contains("data")) cfg.data = get<std::string>(j, "data");
  if (j.contains("format")) cfg.format = get<std::string>(j, "format");
  if (j.contains("structure")) cfg.structure.kind = get<std::string>(j, "structure");
  if (j.contains("q")) cfg.structure.q = get<int>(j, "q");
  if (j.contains("edges")) cfg.structure.edges = get<std::vector<std::pair<int, int>>>(j, "edges");
  if (j.contains("sets")) cfg.structure.sets = get<std::vector<std::vector<int>>>(j, "sets");
  if (j.contains("c0")) cfg.c0 = get<double>(j, "c0");
  if (j.contains("c")) cfg.c = int_or_list(j, "c");
  if (j.contains("K")) cfg.K = get<int>(j, "K");
  if (j.contains("mu0")) cfg.mu0 = number_or_auto(j, "mu0");
  if (j.contains("sigma0")) cfg.sigma0 = number_or_auto(j, "sigma0");
  if (j.contains("x_min")) cfg.x_min = number_or_auto(j, "x_min");
  if (j.contains("x_max")) cfg.x_max = number_or_auto(j, "x_max");
  if (j.contains("iterations")) cfg.iterations = get<long>(j, "iterations");
  if (j.contains("burn_in")) cfg.burn_in = get<long>(j, "burn_in");
  if (j.contains("thin")) cfg.thin = get<long>(j, "thin");
  if (j.contains("mh_moves")) cfg.mh_moves = get<int>(j, "mh_moves");
  if (j.contains("mh_partner")) cfg.mh_partner = get<std::string>(j, "mh_partner");
  if (j.contains("nu")) cfg.nu = get<double>(j, "nu");
  if (j.contains("out")) cfg.out = get<std::string>(j, "out");
  if (j.contains("seed") && !j.at("seed").is_null()) cfg.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("dump_chain")) cfg.dump_chain = get<bool>(j, "dump_chain");
  if (j.contains("q_list")) cfg.q_list = get<std::vector<int>>(j, "q_list");
  if (j.contains("c_list")) cfg.c_list = get<std::vector<int>>(j, "c_list");
  if (j.contains("mode")) cfg.mode = get<std::string>(j, "mode");
  if (j.contains("T")) cfg.T = get<int>(j, "T");
  if (j.contains("replicates")) cfg.replicates = get<int>(j, "replicates");
  if (j.contains("n_per_t")) cfg.n_per_t = int_or_list(j, "n_per_t");
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  auto opt = [](const std::optional<double>& v) -> json { return v ? json(*v) : json("auto"); };
  json j = {
      {"data", cfg.data},
      {"format", cfg.format},
      {"structure", cfg.structure.kind},
      {"q", cfg.structure.q},
      {"edges", cfg.structure.edges},
      {"sets", cfg.structure.sets},
      {"c0", cfg.c0},
      {"c", cfg.c},
      {"K", cfg.K},
      {"mu0", opt(cfg.mu0)},
      {"sigma0", opt(cfg.sigma0)},
      {"x_min", opt(cfg.x_min)},
      {"x_max", opt(cfg.x_max)},
      {"iterations", cfg.iterations},
      {"burn_in", cfg.burn_in},
      {"thin", cfg.thin},
      {"mh_moves", cfg.mh_moves},
      {"mh_partner", cfg.mh_partner},
      {"nu", cfg.nu},
      {"out", cfg.out},
      {"seed", cfg.seed ? json(*cfg.seed) : json(nullptr)},
      {"dump_chain", cfg.dump_chain},
      {"q_list", cfg.q_list},
      {"c_list", cfg.c_list},
      {"mode", cfg.mode},
      {"T", cfg.T},
      {"replicates", cfg.replicates},
      {"n_per_t", cfg.n_per_t},
  };
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void validate(const RunConfig& cfg) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (cfg.format != "long" && cfg.format != "wide") fail("format must be 'long' or 'wide'");
  const auto& kind = cfg.structure.kind;
  if (kind != "ma" && kind != "spatial" && kind != "circular" && kind != "custom")
    fail("structure must be one of ma, spatial, circular, custom");
  if (cfg.structure.q < 0) fail("q must be nonnegative");
  if (!(cfg.c0 > 0)) fail("c0 must be positive");
  if (cfg.c.empty()) fail("c must not be empty");
  for (int c : cfg.c)
    if (c < 0) fail("c_t must be nonnegative");
  if (cfg.K < 2) fail("K must be at least 2");
  if (cfg.sigma0 && !(*cfg.sigma0 > 0)) fail("sigma0 must be positive");
  if (cfg.mu0.has_value() != cfg.sigma0.has_value()) fail("mu0 and sigma0 must be given together or both auto");
  if (cfg.x_min.has_value() != cfg.x_max.has_value()) fail("x_min and x_max must be given together");
  if (cfg.x_min && !(*cfg.x_min < *cfg.x_max)) fail("x_min must be below x_max");
  if (cfg.iterations < 1) fail("iterations must be positive");
  if (cfg.burn_in < 0 || cfg.burn_in >= cfg.iterations) fail("burn_in must be in [0, iterations)");
  if (cfg.thin < 1) fail("thin must be at least 1");
  if (cfg.mh_moves < 1) fail("mh_moves must be at least 1");
  if (cfg.mh_partner != "last" && cfg.mh_partner != "uniform") fail("mh_partner must be 'last' or 'uniform'");
  if (!(cfg.nu >= 0 && cfg.nu <= 1)) fail("nu must lie in [0, 1]");
  for (int q : cfg.q_list)
    if (q < 0) fail("q_list entries must be nonnegative");
  for (int c : cfg.c_list)
    if (c < 0) fail("c_list entries must be nonnegative");
  if (cfg.mode != "prior" && cfg.mode != "sequences") fail("mode must be 'prior' or 'sequences'");
  if (cfg.T < 0) fail("T must be nonnegative");
  if (cfg.replicates < 1) fail("replicates must be positive");
  if (cfg.n_per_t.empty()) fail("n_per_t must not be empty");
  for (int n : cfg.n_per_t)
    if (n < 0) fail("n_per_t entries must be nonnegative");
}

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("DDP_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("DDP_SEED is not an unsigned integer: '") + env + "'");
  }
  return 0;
}

NeighborStructure build_structure(const StructureSpec& spec, int T) {
  try {
    if (spec.kind == "ma") return moving_average(T, spec.q);
    if (spec.kind == "circular") return circular(T, spec.q);
    if (spec.kind == "spatial") {
      std::vector<std::pair<int, int>> edges;
      for (auto [a, b] : spec.edges) edges.emplace_back(a - 1, b - 1);
      return spatial(T, edges);
    }
    if (spec.kind == "custom") {
      if (static_cast<int>(spec.sets.size()) != T)
        throw ConfigError("custom structure lists " + std::to_string(spec.sets.size()) + " sets but T = " +
                          std::to_string(T));
      std::vector<NeighborStructure::IndexSet> sets;
      for (const auto& s : spec.sets) {
        NeighborStructure::IndexSet zero_based;
        for (int j : s) zero_based.push_back(j - 1);
        sets.push_back(std::move(zero_based));
      }
      return custom(std::move(sets));
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid neighbour structure: ") + e.what());
  }
  throw ConfigError("unknown structure kind '" + spec.kind + "'");
}

PrecisionParams build_params(const RunConfig& cfg, int T) {
  std::vector<int> c;
  if (cfg.c.size() == 1) {
    c.assign(T, cfg.c.front());
  } else if (static_cast<int>(cfg.c.size()) == T) {
    c = cfg.c;
  } else {
    throw ConfigError("c lists " + std::to_string(cfg.c.size()) + " values but there are " + std::to_string(T) +
                      " series");
  }
  try {
    return PrecisionParams(cfg.c0, std::move(c));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<int> sequence_lengths(const RunConfig& cfg, int T) {
  if (cfg.n_per_t.size() == 1) return std::vector<int>(T, cfg.n_per_t.front());
  if (static_cast<int>(cfg.n_per_t.size()) == T) return cfg.n_per_t;
  throw ConfigError("n_per_t lists " + std::to_string(cfg.n_per_t.size()) + " values but T = " + std::to_string(T));
}

}  // namespace ddp::cli
