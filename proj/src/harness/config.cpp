#include "krrlab/harness/config.hpp"

#include "krrlab/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace krrlab::harness {

using nlohmann::json;

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (n_grid.empty()) fail("n_grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) fail("n_grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) fail("n_grid must be strictly increasing");
  }
  if (trials < 1) fail("trials must be >= 1");
  if (mode == Mode::synth && d < 1) fail("d must be >= 1 in synth mode");
  if (mode == Mode::real && d < 0) fail("d must be >= 0 in real mode");
  if (mode == Mode::real && input_path.empty()) fail("real mode needs input_path");
  if (mode == Mode::synth && test_points < 100) fail("test_points must be >= 100");
  if (mode == Mode::real && test_points < 1) fail("test_points must be >= 1");
  if (noise_draws < 2) fail("noise_draws must be >= 2");
  if (!(cbar >= 0.0 && cbar <= 1.0)) fail("cbar must lie in [0, 1]");
  if (!(theta >= 0.0 && theta <= 1.0)) fail("theta must lie in [0, 1]");
  if (!(sigma >= 0.0)) fail("sigma must be >= 0");
  if (gamma_override && !(*gamma_override >= 0.0)) fail("gamma_override must be >= 0");
  if (gamma_override && !use_linearized) fail("gamma_override needs use_linearized");
  if (!(r > 0.0 && r <= 1.0)) fail("r must lie in (0, 1]");
  if (!(moment_m > 0.0)) fail("moment_m must be > 0");
  if (!(epsilon > 0.0)) fail("epsilon must be > 0");
  if (workers < 1) fail("workers must be >= 1");
  if (top_k < 1) fail("top_k must be >= 1");
  try {
    make_kernel(kernel, degree);
    DecaySpec{decay, decay_a, 1}.validate();
  } catch (const DomainError& e) {
    fail(e.what());
  }
}

KernelSpec make_kernel(const std::string& name, int degree) {
  if (name == "linear") return KernelSpec::linear();
  if (name == "polynomial") return KernelSpec::polynomial(degree);
  if (name == "exponential_inner") return KernelSpec::exponential_inner();
  if (name == "gaussian") return KernelSpec::gaussian();
  throw ConfigError("unknown kernel '" + name + "'");
}

std::vector<int> parse_grid(const std::string& text) {
  std::vector<long> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("n_grid '" + text + "' is not start:stop:step");
    }
  }
  if (parts.size() != 3) throw ConfigError("n_grid '" + text + "' is not start:stop:step");
  const long start = parts[0], stop = parts[1], step = parts[2];
  if (step < 1 || start < 1 || stop < start) {
    throw ConfigError("n_grid '" + text + "' needs 1 <= start <= stop and step >= 1");
  }
  std::vector<int> grid;
  for (long n = start; n <= stop; n += step) grid.push_back(static_cast<int>(n));
  return grid;
}

std::string format_grid(const std::vector<int>& grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(grid[i]);
  }
  return out;
}

Mode mode_from_string(const std::string& name) {
  if (name == "synth") return Mode::synth;
  if (name == "real") return Mode::real;
  throw ConfigError("unknown mode '" + name + "'");
}

namespace {

std::vector<int> grid_from_json(const json& v) {
  if (v.is_string()) return parse_grid(v.get<std::string>());
  if (v.is_array()) return v.get<std::vector<int>>();
  throw ConfigError("n_grid must be a \"start:stop:step\" string or an integer array");
}

}  // namespace

void apply_json(ExperimentConfig& cfg, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    try {
      if (key == "mode") cfg.mode = mode_from_string(v.get<std::string>());
      else if (key == "kernel") cfg.kernel = v.get<std::string>();
      else if (key == "degree") cfg.degree = v.get<int>();
      else if (key == "use_linearized") cfg.use_linearized = v.get<bool>();
      else if (key == "gamma_override") {
        if (v.is_null()) cfg.gamma_override.reset();
        else cfg.gamma_override = v.get<double>();
      }
      else if (key == "decay") cfg.decay = decay_kind_from_string(v.get<std::string>());
      else if (key == "decay_a") cfg.decay_a = v.get<double>();
      else if (key == "d") cfg.d = v.get<int>();
      else if (key == "n_grid") cfg.n_grid = grid_from_json(v);
      else if (key == "cbar") cfg.cbar = v.get<double>();
      else if (key == "theta") cfg.theta = v.get<double>();
      else if (key == "sigma") cfg.sigma = v.get<double>();
      else if (key == "trials") cfg.trials = v.get<int>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "test_points") cfg.test_points = v.get<int>();
      else if (key == "noise_draws") cfg.noise_draws = v.get<int>();
      else if (key == "input_path") cfg.input_path = v.get<std::string>();
      else if (key == "output_path") cfg.output_path = v.get<std::string>();
      else if (key == "standardize") cfg.standardize = v.get<bool>();
      else if (key == "r") cfg.r = v.get<double>();
      else if (key == "moment_m") cfg.moment_m = v.get<double>();
      else if (key == "epsilon") cfg.epsilon = v.get<double>();
      else if (key == "workers") cfg.workers = v.get<int>();
      else if (key == "top_k") cfg.top_k = v.get<int>();
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    } catch (const DomainError& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_json(base, buffer.str());
  return base;
}

}  // namespace krrlab::harness
