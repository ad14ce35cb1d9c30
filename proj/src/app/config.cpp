#include "config.hpp"

#include "graphred/error.hpp"
#include "graphred/io.hpp"

#include <cmath>

namespace graphred::app {

namespace {

const char* const kSchemaText = R"({
  "comment": "string",
  "seed": "uint",
  "threads": "uint",
  "out": "string",
  "dataset_dir": "string",
  "split": "string",
  "methods": "strings",
  "sigmas": "numbers",
  "graph_from": "string",
  "diagnostics": "bool",
  "dataset": {
    "kind": "string",
    "n_nodes": "uint", "side": "number", "k": "uint", "n_band": "uint", "offset": "number",
    "sigmas": "numbers", "n_train": "uint", "n_test": "uint",
    "train_sources": "strings", "test_sources": "strings",
    "max_nodes": "uint", "fps_start": "uint"
  },
  "solver": {
    "space": "string", "layers": "uint", "pnp_iters": "uint",
    "paper_literal_x_update": "bool", "warm_start": "bool",
    "lr_solve": "string", "cg_tol": "number", "cg_max_iters": "uint"
  },
  "grid": {
    "alpha_range": "numbers", "rho_range": "numbers", "points": "uint",
    "alpha_values": "numbers", "rho_values": "numbers"
  },
  "params": { "tuned": "string", "learned_dir": "string" },
  "train": {
    "methods": "strings", "epochs": "uint", "learning_rate": "number",
    "gradient": "string", "n2n_sigma_range": "numbers", "fd_step": "number",
    "resume_from": "string", "init": "string", "n2n_init_draws": "uint",
    "init_params": { "alpha_red": "number", "alpha_denoiser": "number", "rho": "number" }
  },
  "check": {
    "methods": "strings", "alpha_denoiser": "number", "rho": "number", "c": "number",
    "random_probes": "uint", "homogeneity_tol": "number", "passivity_tol": "number"
  },
  "spectrum": {
    "split": "string", "sample": "uint", "sigma": "number",
    "alpha_red": "number", "alpha_lr": "number",
    "lambda_grid_points": "uint", "lambda_grid_max": "number"
  },
  "eval": { "denoised_dir": "string", "split": "string" }
})";

bool type_matches(const Json& v, const std::string& type) {
  if (type == "string") return v.is_string();
  if (type == "bool") return v.is_boolean();
  if (type == "number") return v.is_number() && std::isfinite(v.get<double>());
  if (type == "uint") return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  if (type == "numbers") {
    if (!v.is_array()) return false;
    for (const auto& e : v)
      if (!e.is_number() || !std::isfinite(e.get<double>())) return false;
    return true;
  }
  if (type == "strings") {
    if (!v.is_array()) return false;
    for (const auto& e : v)
      if (!e.is_string()) return false;
    return true;
  }
  return false;
}

void validate(const Json& node, const Json& schema, const std::string& prefix) {
  require(node.is_object(), ErrorKind::config,
          (prefix.empty() ? std::string("config root") : "'" + prefix + "'") + " must be an object");
  for (const auto& [key, value] : node.items()) {
    const std::string full = prefix.empty() ? key : prefix + "." + key;
    require(schema.contains(key), ErrorKind::config, "unknown config key '" + full + "'");
    const auto& expect = schema.at(key);
    if (expect.is_object()) {
      validate(value, expect, full);
    } else {
      require(type_matches(value, expect.get<std::string>()), ErrorKind::config,
              "config key '" + full + "' must be of type " + expect.get<std::string>());
    }
  }
}

}  // namespace

const Json& config_schema() {
  static const Json schema = Json::parse(kSchemaText);
  return schema;
}

RunConfig RunConfig::load(const FlagOverrides& flags) {
  Json root = Json::object();
  if (flags.config_path) {
    std::string text;
    try {
      text = read_text_file(*flags.config_path);
    } catch (const Error& e) {
      fail(ErrorKind::config, std::string("cannot read config: ") + e.what());
    }
    try {
      root = Json::parse(text);
    } catch (const Json::parse_error& e) {
      fail(ErrorKind::config, *flags.config_path + ": " + e.what());
    }
  }
  return from_json(std::move(root), flags);
}

RunConfig RunConfig::from_json(Json root, const FlagOverrides& flags) {
  validate(root, config_schema(), "");
  RunConfig c;
  c.root_ = std::move(root);
  c.seed_ = flags.seed ? *flags.seed : static_cast<std::uint64_t>(c.integer("seed", 0));
  c.threads_ = flags.threads ? *flags.threads : static_cast<int>(c.integer("threads", 1));
  require(c.threads_ >= 1, ErrorKind::config, "threads must be >= 1");
  c.out_ = flags.out ? fs::path(*flags.out) : fs::path(c.string("out", "."));
  return c;
}

const Json* RunConfig::find(const std::string& path) const {
  const Json* node = &root_;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object() || !node->contains(key)) return nullptr;
    node = &node->at(key);
    if (dot == std::string::npos) return node;
    start = dot + 1;
  }
}

bool RunConfig::has(const std::string& path) const { return find(path) != nullptr; }

double RunConfig::number(const std::string& path, double fallback) const {
  const Json* v = find(path);
  return v ? v->get<double>() : fallback;
}

std::int64_t RunConfig::integer(const std::string& path, std::int64_t fallback) const {
  const Json* v = find(path);
  return v ? v->get<std::int64_t>() : fallback;
}

bool RunConfig::boolean(const std::string& path, bool fallback) const {
  const Json* v = find(path);
  return v ? v->get<bool>() : fallback;
}

std::string RunConfig::string(const std::string& path, const std::string& fallback) const {
  const Json* v = find(path);
  return v ? v->get<std::string>() : fallback;
}

std::vector<double> RunConfig::numbers(const std::string& path, std::vector<double> fallback) const {
  const Json* v = find(path);
  return v ? v->get<std::vector<double>>() : fallback;
}

std::vector<std::string> RunConfig::strings(const std::string& path,
                                            std::vector<std::string> fallback) const {
  const Json* v = find(path);
  return v ? v->get<std::vector<std::string>>() : fallback;
}

fs::path RunConfig::path(const std::string& key, const fs::path& fallback) const {
  const Json* v = find(key);
  return v ? fs::path(v->get<std::string>()) : fallback;
}

SolverSettings RunConfig::solver() const {
  SolverSettings s;
  s.layers = static_cast<int>(integer("solver.layers", s.layers));
  s.pnp_iters = static_cast<int>(integer("solver.pnp_iters", s.pnp_iters));
  s.paper_literal_x_update = boolean("solver.paper_literal_x_update", false);
  s.warm_start = boolean("solver.warm_start", false);
  const auto solve = string("solver.lr_solve", "direct");
  require(solve == "direct" || solve == "cg", ErrorKind::config,
          "solver.lr_solve must be 'direct' or 'cg'");
  s.lr_solve = solve == "cg" ? LrSolve::cg : LrSolve::direct;
  s.cg_tol = number("solver.cg_tol", s.cg_tol);
  s.cg_max_iters = static_cast<int>(integer("solver.cg_max_iters", s.cg_max_iters));
  require(s.layers >= 1, ErrorKind::config, "solver.layers must be >= 1");
  require(s.pnp_iters >= 1, ErrorKind::config, "solver.pnp_iters must be >= 1");
  require(s.cg_tol > 0.0, ErrorKind::config, "solver.cg_tol must be > 0");
  return s;
}

bool RunConfig::spectral_space() const {
  const auto space = string("solver.space", "spectral");
  require(space == "spectral" || space == "vertex", ErrorKind::config,
          "solver.space must be 'spectral' or 'vertex'");
  return space == "spectral";
}

GridSpec RunConfig::grid() const {
  GridSpec g;
  const auto a = numbers("grid.alpha_range", {g.alpha_lo, g.alpha_hi});
  const auto r = numbers("grid.rho_range", {g.rho_lo, g.rho_hi});
  require(a.size() == 2 && r.size() == 2, ErrorKind::config,
          "grid.alpha_range and grid.rho_range must be [lo, hi]");
  g.alpha_lo = a[0];
  g.alpha_hi = a[1];
  g.rho_lo = r[0];
  g.rho_hi = r[1];
  g.points = static_cast<int>(integer("grid.points", g.points));
  g.alpha_values = numbers("grid.alpha_values", {});
  g.rho_values = numbers("grid.rho_values", {});
  try {
    g.validate();
  } catch (const Error& e) {
    fail(ErrorKind::config, std::string("grid: ") + e.what());
  }
  return g;
}

SyntheticSpec RunConfig::synthetic_spec() const {
  SyntheticSpec s;
  s.n_nodes = integer("dataset.n_nodes", s.n_nodes);
  s.side = number("dataset.side", s.side);
  s.k = integer("dataset.k", s.k);
  s.n_band = integer("dataset.n_band", s.n_band);
  s.offset = number("dataset.offset", s.offset);
  s.sigmas = numbers("dataset.sigmas", s.sigmas);
  s.n_train = static_cast<int>(integer("dataset.n_train", s.n_train));
  s.n_test = static_cast<int>(integer("dataset.n_test", s.n_test));
  s.seed = seed_;
  require(s.n_nodes >= 2, ErrorKind::config, "dataset.n_nodes must be >= 2");
  require(s.side > 0.0, ErrorKind::config, "dataset.side must be > 0");
  require(s.k >= 1 && s.k < s.n_nodes, ErrorKind::config, "dataset.k must satisfy 1 <= k < n_nodes");
  require(s.n_band >= 1 && s.n_band <= s.n_nodes, ErrorKind::config,
          "dataset.n_band must satisfy 1 <= n_band <= n_nodes");
  for (double sg : s.sigmas) require(sg >= 0.0, ErrorKind::config, "dataset.sigmas must be >= 0");
  return s;
}

PointCloudSpec RunConfig::pointcloud_spec() const {
  PointCloudSpec s;
  s.train_sources = strings("dataset.train_sources", {});
  s.test_sources = strings("dataset.test_sources", {});
  s.max_nodes = integer("dataset.max_nodes", s.max_nodes);
  s.k = integer("dataset.k", s.k);
  s.fps_start = integer("dataset.fps_start", s.fps_start);
  s.sigmas = numbers("dataset.sigmas", s.sigmas);
  s.seed = seed_;
  require(!s.train_sources.empty() || !s.test_sources.empty(), ErrorKind::config,
          "point-cloud datasets need dataset.train_sources and/or dataset.test_sources");
  require(s.max_nodes >= 2, ErrorKind::config, "dataset.max_nodes must be >= 2");
  require(s.k >= 1, ErrorKind::config, "dataset.k must be >= 1");
  for (double sg : s.sigmas) require(sg >= 0.0, ErrorKind::config, "dataset.sigmas must be >= 0");
  return s;
}

std::vector<Method> RunConfig::methods(const std::string& key, std::vector<Method> fallback) const {
  if (!has(key)) return fallback;
  std::vector<Method> out;
  for (const auto& name : strings(key, {})) out.push_back(parse_method(name));
  require(!out.empty(), ErrorKind::config, "'" + key + "' must list at least one method");
  return out;
}

}  // namespace graphred::app
