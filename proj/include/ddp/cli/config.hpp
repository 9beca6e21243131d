#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ddp/dependence.hpp"

namespace ddp::cli {

enum class ExitCode : int {
  ok = 0,
  check_failed = 1,
  config = 2,
  data = 3,
  numeric = 4,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Neighbour structure as written in a config file; indices are 1-based.
struct StructureSpec {
  std::string kind = "ma";  // ma | spatial | circular | custom
  int q = 1;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> sets;

  bool operator==(const StructureSpec&) const = default;
};

/// Everything a run needs. Stored as a flat JSON object; unknown keys are errors.
struct RunConfig {
  std::string data;
  std::string format = "long";
  StructureSpec structure;
  double c0 = 0.1;
  std::vector<int> c{10};  // one entry means constant c_t
  int K = 50;
  std::optional<double> mu0;  // empty means derived from the data
  std::optional<double> sigma0;
  std::optional<double> x_min;  // empty means data minimum
  std::optional<double> x_max;
  long iterations = 100000;
  long burn_in = 5000;
  long thin = 25;
  int mh_moves = 1;
  std::string mh_partner = "last";  // last | uniform
  double nu = 0.5;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  bool dump_chain = false;

  // grid
  std::vector<int> q_list;
  std::vector<int> c_list;

  // simulate / check
  std::string mode = "prior";  // prior | sequences
  int T = 0;                   // series count when there is no dataset
  int replicates = 1000;
  std::vector<int> n_per_t{30};  // one entry means the same length for every t

  bool operator==(const RunConfig&) const = default;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::string& path);

/// Checks that hold for every subcommand.
void validate(const RunConfig& cfg);

/// Seed precedence: explicit value, then DDP_SEED, then 0.
std::uint64_t resolve_seed(const RunConfig& cfg);

NeighborStructure build_structure(const StructureSpec& spec, int T);
PrecisionParams build_params(const RunConfig& cfg, int T);
std::vector<int> sequence_lengths(const RunConfig& cfg, int T);

}  // namespace ddp::cli
