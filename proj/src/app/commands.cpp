#include "commands.hpp"

#include "graphred/error.hpp"
#include "graphred/io.hpp"
#include "graphred/parallel.hpp"
#include "graphred/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <regex>
#include <set>

namespace graphred::app {

namespace {

// ---------------------------------------------------------------- helpers

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  require(!ec, ErrorKind::io, "cannot create directory " + p.string() + ": " + ec.message());
}

void write_json(const fs::path& p, const Json& j) {
  ensure_dir(p.parent_path().empty() ? fs::path(".") : p.parent_path());
  write_text_file(p.string(), j.dump(2) + "\n");
}

Json read_json(const fs::path& p) {
  try {
    return Json::parse(read_text_file(p.string()));
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::parse, p.string() + ": " + e.what());
  }
}

Dataset open_dataset(const RunConfig& cfg) {
  const auto dir = cfg.dataset_dir();
  require(fs::exists(dir / "manifest.json"), ErrorKind::io,
          "no dataset at " + dir.string() + " (run `generate` or set dataset_dir)");
  return load_dataset(dir.string());
}

bool same_sigma(double a, double b) { return sigma_label(a) == sigma_label(b); }

std::vector<double> selected_sigmas(const RunConfig& cfg, const Dataset& ds) {
  if (!cfg.has("sigmas")) return ds.sigmas;
  auto wanted = cfg.numbers("sigmas", {});
  require(!wanted.empty(), ErrorKind::config, "'sigmas' must not be empty");
  std::vector<double> out;
  for (double s : wanted) {
    auto it = std::find_if(ds.sigmas.begin(), ds.sigmas.end(),
                           [&](double d) { return same_sigma(d, s); });
    require(it != ds.sigmas.end(), ErrorKind::config,
            "sigma " + sigma_label(s) + " is not in the dataset");
    out.push_back(*it);
  }
  return out;
}

bool prefer_noisy_graph(const RunConfig& cfg) {
  const auto g = cfg.string("graph_from", "noisy");
  require(g == "noisy" || g == "clean", ErrorKind::config, "graph_from must be 'noisy' or 'clean'");
  return g == "noisy";
}

std::shared_ptr<const SignalSpace> make_space(const Graph& g, bool spectral) {
  auto lap = build_laplacian(g);
  return spectral ? SignalSpace::spectral(eigendecompose(lap)) : SignalSpace::vertex(std::move(lap));
}

// Per sample: the signal space for each sigma. Samples without noisy graphs
// share one space across sigmas.
using SpaceMap = std::map<double, std::shared_ptr<const SignalSpace>>;

std::vector<SpaceMap> build_spaces(const std::vector<DatasetSample>& samples,
                                   const std::vector<double>& sigmas, bool prefer_noisy,
                                   bool spectral, int threads) {
  std::vector<SpaceMap> out(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    std::shared_ptr<const SignalSpace> base;
    for (double s : sigmas) {
      const Graph& g = samples[i].graph_for(s, prefer_noisy);
      if (&g == &samples[i].graph) {
        if (!base) base = make_space(g, spectral);
        out[i][s] = base;
      } else {
        out[i][s] = make_space(g, spectral);
      }
    }
  });
  return out;
}

Matrix encode_cols(const SignalSpace& space, const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (Index c = 0; c < m.cols(); ++c) out.col(c) = space.encode(m.col(c));
  return out;
}

Matrix decode_cols(const SignalSpace& space, const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (Index c = 0; c < m.cols(); ++c) out.col(c) = space.decode(m.col(c));
  return out;
}

const Matrix& clean_of(const DatasetSample& s, const char* what) {
  require(s.clean.has_value(), ErrorKind::config,
          std::string(what) + " needs clean signals, missing for " + s.split + "/" + s.name);
  return *s.clean;
}

std::string learned_file_name(Method m, double sigma) {
  return "learned_" + to_string(m) + "_sigma" + sigma_label(sigma) + ".json";
}

std::string denoised_file_name(Method m, double sigma) {
  return "denoised_" + to_string(m) + "_sigma" + sigma_label(sigma) + ".csv";
}

// ---------------------------------------------------------------- tuned table

struct TunedEntry {
  Method method;
  double sigma;
  ScalarParams params;
  double train_rmse;
};

Json tuned_entry_json(const TunedEntry& e) {
  Json j;
  j["method"] = to_string(e.method);
  j["sigma"] = e.sigma;
  const bool pnp = denoiser_kind(e.method) == DenoiserKind::pnp;
  if (is_red(e.method)) j["alpha_red"] = e.params.alpha_red;
  j[pnp ? "alpha_pnp" : "alpha_lr"] = e.params.alpha_denoiser;
  if (pnp) j["rho"] = e.params.rho;
  j["train_rmse"] = e.train_rmse;
  return j;
}

std::vector<TunedEntry> read_tuned(const fs::path& path) {
  require(fs::exists(path), ErrorKind::config,
          "tuned parameters not found at " + path.string() + " (run `tune` or set params.tuned)");
  const Json j = read_json(path);
  std::vector<TunedEntry> out;
  try {
    for (const auto& e : j.at("entries")) {
      TunedEntry t{};
      t.method = parse_method(e.at("method").get<std::string>());
      t.sigma = e.at("sigma").get<double>();
      const bool pnp = denoiser_kind(t.method) == DenoiserKind::pnp;
      t.params.alpha_red = is_red(t.method) ? e.at("alpha_red").get<double>() : 0.0;
      t.params.alpha_denoiser = e.at(pnp ? "alpha_pnp" : "alpha_lr").get<double>();
      t.params.rho = pnp ? e.at("rho").get<double>() : 1.0;
      t.train_rmse = e.value("train_rmse", 0.0);
      out.push_back(t);
    }
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse, path.string() + ": " + e.what());
  }
  return out;
}

ScalarParams find_tuned(const std::vector<TunedEntry>& table, Method m, double sigma,
                        const fs::path& path) {
  for (const auto& e : table)
    if (e.method == m && same_sigma(e.sigma, sigma)) return e.params;
  fail(ErrorKind::config, "no tuned parameters for " + to_string(m) + " at sigma " +
                              sigma_label(sigma) + " in " + path.string());
}

// ---------------------------------------------------------------- metrics

// rmse[method][sigma] -> per-sample values, in sample order.
using RmseTable = std::map<Method, std::map<double, std::vector<double>>>;

Json metrics_json(const std::string& split, const std::vector<DatasetSample>& samples,
                  const RmseTable& table, const std::vector<double>& sigmas) {
  Json j;
  j["format"] = "graphred-metrics";
  j["version"] = 1;
  j["split"] = split;
  Json names = Json::array();
  for (const auto& s : samples) names.push_back(s.name);
  j["samples"] = std::move(names);
  Json results = Json::array();
  for (double sigma : sigmas) {
    for (Method m : all_methods()) {
      auto it = table.find(m);
      if (it == table.end()) continue;
      auto jt = it->second.find(sigma);
      if (jt == it->second.end()) continue;
      double sum = 0.0;
      for (double v : jt->second) sum += v;
      Json r;
      r["method"] = to_string(m);
      r["sigma"] = sigma;
      r["mean_rmse"] = sum / static_cast<double>(jt->second.size());
      r["sample_rmse"] = jt->second;
      results.push_back(std::move(r));
    }
  }
  j["results"] = std::move(results);
  return j;
}

Json solver_json(const SolverSettings& s, bool spectral) {
  return {{"space", spectral ? "spectral" : "vertex"},
          {"layers", s.layers},
          {"pnp_iters", s.pnp_iters},
          {"paper_literal_x_update", s.paper_literal_x_update},
          {"warm_start", s.warm_start},
          {"lr_solve", s.lr_solve == LrSolve::cg ? "cg" : "direct"}};
}

void print_table(std::ostream& log, const Json& metrics) {
  for (const auto& r : metrics.at("results")) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "  sigma %-6s %-14s mean RMSE %.4f\n",
                  sigma_label(r.at("sigma").get<double>()).c_str(),
                  r.at("method").get<std::string>().c_str(), r.at("mean_rmse").get<double>());
    log << buf;
  }
}

std::vector<TuneSample> tune_samples(const std::vector<DatasetSample>& samples,
                                     const std::vector<SpaceMap>& spaces, double sigma,
                                     const char* what) {
  std::vector<TuneSample> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& space = spaces[i].at(sigma);
    out.push_back({space, encode_cols(*space, samples[i].observed.at(sigma)),
                   encode_cols(*space, clean_of(samples[i], what))});
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- generate

void cmd_generate(const RunConfig& cfg, std::ostream& log) {
  const auto kind = cfg.string("dataset.kind", "synthetic");
  const auto root = cfg.dataset_dir();
  Json manifest;
  if (kind == "synthetic") {
    for (const char* key : {"dataset.train_sources", "dataset.test_sources", "dataset.max_nodes",
                            "dataset.fps_start"})
      require(!cfg.has(key), ErrorKind::config,
              std::string("'") + key + "' only applies to point-cloud datasets");
    manifest = write_synthetic_dataset(cfg.synthetic_spec(), root.string());
  } else if (kind == "pointcloud") {
    for (const char* key : {"dataset.n_nodes", "dataset.side", "dataset.n_band", "dataset.offset",
                            "dataset.n_train", "dataset.n_test"})
      require(!cfg.has(key), ErrorKind::config,
              std::string("'") + key + "' only applies to synthetic datasets");
    manifest = write_pointcloud_dataset(cfg.pointcloud_spec(), root.string());
  } else {
    fail(ErrorKind::config, "dataset.kind must be 'synthetic' or 'pointcloud'");
  }
  log << "generate: " << kind << " dataset with " << manifest["splits"]["train"].size()
      << " train / " << manifest["splits"]["test"].size() << " test samples x "
      << manifest["sigmas"].size() << " noise levels -> " << root.string() << "\n";
}

// ---------------------------------------------------------------- tune

void cmd_tune(const RunConfig& cfg, std::ostream& log) {
  const Dataset ds = open_dataset(cfg);
  const auto sigmas = selected_sigmas(cfg, ds);
  const auto requested = cfg.methods(
      "methods", {Method::lr, Method::pnp, Method::red_lr, Method::red_pnp});
  std::vector<Method> targets;
  for (Method m : requested) {
    if (m == Method::observed || m == Method::red_lr_unsup) continue;
    const Method t = flat_counterpart(m);
    if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
  }
  require(!targets.empty(), ErrorKind::config, "no tunable methods requested");
  require(!ds.train.empty(), ErrorKind::config, "tune needs a non-empty train split");

  const auto settings = cfg.solver();
  const auto grid = cfg.grid();
  const bool spectral = cfg.spectral_space();
  const auto spaces = build_spaces(ds.train, sigmas, prefer_noisy_graph(cfg), spectral, cfg.threads());

  Json entries = Json::array();
  for (double sigma : sigmas) {
    const auto samples = tune_samples(ds.train, spaces, sigma, "tune");
    for (Method m : targets) {
      const auto best = grid_search(m, samples, grid, settings, cfg.threads());
      entries.push_back(tuned_entry_json({m, sigma, best.params, best.score}));
      log << "tune: sigma " << sigma_label(sigma) << " " << to_string(m) << " -> "
          << entries.back().dump() << " (" << best.evaluated << " grid points)\n";
    }
  }

  Json out;
  out["format"] = "graphred-tuned";
  out["version"] = 1;
  out["grid"] = {{"alpha", grid.alphas()}, {"rho", grid.rhos()}};
  out["solver"] = solver_json(settings, spectral);
  out["graph_from"] = prefer_noisy_graph(cfg) ? "noisy" : "clean";
  out["entries"] = std::move(entries);
  write_json(cfg.tuned_path(), out);
  log << "tune: wrote " << cfg.tuned_path().string() << "\n";
}

// ---------------------------------------------------------------- denoise

void cmd_denoise(const RunConfig& cfg, std::ostream& log) {
  const Dataset ds = open_dataset(cfg);
  const auto sigmas = selected_sigmas(cfg, ds);
  const auto split_name = cfg.string("split", "test");
  const auto& samples = ds.split(split_name);
  require(!samples.empty(), ErrorKind::config, "split '" + split_name + "' is empty");

  std::vector<Method> methods{Method::observed};
  for (Method m : cfg.methods("methods", {Method::lr, Method::pnp, Method::red_lr, Method::red_pnp}))
    if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);

  // Resolve parameters up front so missing ones fail before any work.
  std::map<std::pair<Method, double>, MethodParams> params;
  std::vector<TunedEntry> tuned;
  bool tuned_loaded = false;
  for (Method m : methods) {
    if (m == Method::observed) continue;
    for (double sigma : sigmas) {
      MethodParams p;
      if (is_unrolled(m)) {
        const auto file = cfg.learned_dir() / learned_file_name(m, sigma);
        require(fs::exists(file), ErrorKind::config,
                "no learned parameters for " + to_string(m) + " at sigma " + sigma_label(sigma) +
                    " (expected " + file.string() + "; run `train`)");
        p.unrolled = read_learned_params(file.string()).params;
      } else {
        if (!tuned_loaded) {
          tuned = read_tuned(cfg.tuned_path());
          tuned_loaded = true;
        }
        p.flat = find_tuned(tuned, m, sigma, cfg.tuned_path());
      }
      params[{m, sigma}] = p;
    }
  }

  const auto settings = cfg.solver();
  const bool spectral = cfg.spectral_space();
  const bool diagnostics = cfg.boolean("diagnostics", false);
  const auto spaces = build_spaces(samples, sigmas, prefer_noisy_graph(cfg), spectral, cfg.threads());

  struct Output {
    std::map<std::pair<Method, double>, Matrix> denoised;
    std::map<std::pair<Method, double>, Json> reports;
  };
  std::vector<Output> outputs(samples.size());
  parallel_for(samples.size(), cfg.threads(), [&](std::size_t i) {
    for (double sigma : sigmas) {
      const auto& space = spaces[i].at(sigma);
      const Matrix y = encode_cols(*space, samples[i].observed.at(sigma));
      for (Method m : methods) {
        if (m == Method::observed) continue;
        const auto& p = params.at({m, sigma});
        Matrix x(y.rows(), y.cols());
        Json reports = Json::array();
        for (Index c = 0; c < y.cols(); ++c) {
          RedSolveReport rep;
          const bool want = diagnostics && is_red(m) && !is_unrolled(m);
          x.col(c) = run_method(m, space, Vector(y.col(c)), p, settings, want ? &rep : nullptr);
          if (want) {
            rep.x = space->decode(rep.x);
            reports.push_back(to_json(rep));
          }
        }
        outputs[i].denoised[{m, sigma}] = decode_cols(*space, x);
        if (!reports.empty()) outputs[i].reports[{m, sigma}] = std::move(reports);
      }
    }
  });

  const fs::path denoised_root = cfg.out() / "denoised" / split_name;
  const bool have_clean = std::all_of(samples.begin(), samples.end(),
                                      [](const DatasetSample& s) { return s.clean.has_value(); });
  RmseTable table;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const fs::path dir = denoised_root / samples[i].name;
    ensure_dir(dir);
    for (double sigma : sigmas) {
      if (have_clean)
        table[Method::observed][sigma].push_back(rmse(samples[i].observed.at(sigma), *samples[i].clean));
      for (Method m : methods) {
        if (m == Method::observed) continue;
        const Matrix& x = outputs[i].denoised.at({m, sigma});
        write_matrix_csv((dir / denoised_file_name(m, sigma)).string(), x);
        if (have_clean) table[m][sigma].push_back(rmse(x, *samples[i].clean));
        auto rit = outputs[i].reports.find({m, sigma});
        if (rit != outputs[i].reports.end()) {
          Json rep;
          rep["method"] = to_string(m);
          rep["sigma"] = sigma;
          rep["channels"] = rit->second;
          write_json(cfg.out() / "reports" / split_name / samples[i].name /
                         ("report_" + to_string(m) + "_sigma" + sigma_label(sigma) + ".json"),
                     rep);
        }
      }
    }
  }

  log << "denoise: " << samples.size() << " " << split_name << " samples -> "
      << denoised_root.string() << "\n";
  if (have_clean) {
    const Json metrics = metrics_json(split_name, samples, table, sigmas);
    write_json(cfg.out() / "metrics.json", metrics);
    print_table(log, metrics);
    log << "denoise: wrote " << (cfg.out() / "metrics.json").string() << "\n";
  } else {
    log << "denoise: no clean signals in split; metrics skipped\n";
  }
}

// ---------------------------------------------------------------- train

void cmd_train(const RunConfig& cfg, std::ostream& log) {
  const Dataset ds = open_dataset(cfg);
  const auto sigmas = selected_sigmas(cfg, ds);
  const auto methods = cfg.methods("train.methods", {Method::red_lr_dau});
  for (Method m : methods)
    require(is_unrolled(m), ErrorKind::config,
            "train.methods accepts red_lr_dau, red_pnp_dau, red_lr_unsup (got " + to_string(m) + ")");
  require(!ds.train.empty(), ErrorKind::config, "train needs a non-empty train split");

  const auto settings = cfg.solver();
  const bool spectral = cfg.spectral_space();
  const bool prefer_noisy = prefer_noisy_graph(cfg);

  TrainConfig base;
  base.epochs = static_cast<int>(cfg.integer("train.epochs", base.epochs));
  base.adam.learning_rate = cfg.number("train.learning_rate", base.adam.learning_rate);
  const auto range = cfg.numbers("train.n2n_sigma_range", {base.n2n_sigma_lo, base.n2n_sigma_hi});
  require(range.size() == 2, ErrorKind::config, "train.n2n_sigma_range must be [lo, hi]");
  base.n2n_sigma_lo = range[0];
  base.n2n_sigma_hi = range[1];
  base.seed = cfg.seed();
  const auto grad = cfg.string("train.gradient", "finite_difference");
  require(grad == "finite_difference" || grad == "analytic", ErrorKind::config,
          "train.gradient must be 'finite_difference' or 'analytic'");
  base.gradient = grad == "analytic" ? GradientMethod::analytic_linear : GradientMethod::finite_difference;
  base.fd_step = cfg.number("train.fd_step", base.fd_step);
  base.threads = cfg.threads();
  base.solver = settings.red_options();
  try {
    base.validate();
  } catch (const Error& e) {
    fail(ErrorKind::config, std::string("train: ") + e.what());
  }

  std::vector<TunedEntry> tuned;
  bool tuned_loaded = false;
  const auto spaces = build_spaces(ds.train, sigmas, prefer_noisy, spectral, cfg.threads());

  for (Method m : methods) {
    const bool unsup = m == Method::red_lr_unsup;
    const DenoiserKind kind = denoiser_kind(m);
    const Method flat = flat_counterpart(m);
    TrainConfig tc = base;
    tc.mode = unsup ? TrainMode::noise2noise : TrainMode::supervised;
    const auto init_mode = cfg.string("train.init", unsup ? "n2n_grid" : "tuned");
    require(init_mode == "tuned" || init_mode == "n2n_grid" || init_mode == "flat",
            ErrorKind::config, "train.init must be 'tuned', 'n2n_grid' or 'flat'");

    for (double sigma : sigmas) {
      std::vector<TrainSample> data;
      for (std::size_t i = 0; i < ds.train.size(); ++i) {
        const Matrix& obs = ds.train[i].observed.at(sigma);
        for (Index c = 0; c < obs.cols(); ++c) {
          TrainSample t{spaces[i].at(sigma), obs.col(c), std::nullopt};
          if (!unsup) t.clean = Vector(clean_of(ds.train[i], "supervised training").col(c));
          data.push_back(std::move(t));
        }
      }

      UnrolledParams init;
      std::optional<TrainResume> resume;
      Json init_info;
      if (cfg.has("train.resume_from")) {
        const auto file = cfg.path("train.resume_from", {}) / learned_file_name(m, sigma);
        require(fs::exists(file), ErrorKind::config, "cannot resume: " + file.string() + " not found");
        auto saved = read_learned_params(file.string());
        require(saved.params.kind == kind && saved.params.layers == settings.layers,
                ErrorKind::config, "cannot resume: " + file.string() + " has a different shape");
        require(saved.resume.has_value(), ErrorKind::config,
                "cannot resume: " + file.string() + " has no training state");
        init = saved.params;
        resume = saved.resume;
        init_info = {{"source", "resume"}, {"epochs_completed", resume->epochs_completed}};
      } else {
        ScalarParams sp;
        if (init_mode == "tuned") {
          require(!unsup, ErrorKind::config,
                  "red_lr_unsup cannot start from supervised tuned parameters; use init n2n_grid or flat");
          if (!tuned_loaded) {
            tuned = read_tuned(cfg.tuned_path());
            tuned_loaded = true;
          }
          sp = find_tuned(tuned, flat, sigma, cfg.tuned_path());
        } else if (init_mode == "flat") {
          require(cfg.has("train.init_params.alpha_red") && cfg.has("train.init_params.alpha_denoiser"),
                  ErrorKind::config, "train.init 'flat' needs train.init_params.alpha_red and alpha_denoiser");
          sp.alpha_red = cfg.number("train.init_params.alpha_red", 1.0);
          sp.alpha_denoiser = cfg.number("train.init_params.alpha_denoiser", 1.0);
          sp.rho = cfg.number("train.init_params.rho", 1.0);
        } else {
          // Grid search on Noise2Noise pairs: only observed signals are used.
          const int draws = static_cast<int>(cfg.integer("train.n2n_init_draws", 4));
          require(draws >= 1, ErrorKind::config, "train.n2n_init_draws must be >= 1");
          std::vector<TuneSample> pairs;
          for (std::size_t s = 0; s < data.size(); ++s) {
            const double peak = data[s].observed.cwiseAbs().maxCoeff();
            for (int d = 0; d < draws; ++d) {
              auto rng = Rng::stream(cfg.seed(), StreamPurpose::n2n_init,
                                     {static_cast<std::uint64_t>(d), s});
              auto pair = make_n2n_pair(data[s].observed, tc.n2n_sigma_lo * peak,
                                        tc.n2n_sigma_hi * peak, rng);
              const auto& space = data[s].space;
              pairs.push_back({space, space->encode(pair.input), space->encode(pair.target)});
            }
          }
          sp = grid_search(flat, pairs, cfg.grid(), settings, cfg.threads()).params;
        }
        init = UnrolledParams::flat(settings.layers, kind, sp.alpha_red, sp.alpha_denoiser,
                                    kind == DenoiserKind::pnp ? sp.rho : 1.0);
        init_info = {{"source", init_mode}, {"alpha_red", sp.alpha_red},
                     {"alpha_denoiser", sp.alpha_denoiser}};
        if (kind == DenoiserKind::pnp) init_info["rho"] = sp.rho;
      }

      const Denoiser den = settings.denoiser(kind, 1.0, 1.0);
      const TrainResult result = train(data, tc, init, den, resume);

      Json j = learned_params_json(result, to_string(m), sigma, unsup ? "noise2noise" : "supervised");
      j["init"] = init_info;
      j["solver"] = solver_json(settings, spectral);
      if (!unsup) {
        const auto samples = tune_samples(ds.train, spaces, sigma, "supervised training");
        const double before = mean_rmse(m, samples, MethodParams{std::nullopt, init}, settings);
        const double after = mean_rmse(m, samples, MethodParams{std::nullopt, result.params}, settings);
        j["init_train_rmse"] = before;
        j["train_rmse"] = after;
        log << "train: " << to_string(m) << " sigma " << sigma_label(sigma) << " train RMSE "
            << format_double(before) << " -> " << format_double(after) << "\n";
      } else {
        log << "train: " << to_string(m) << " sigma " << sigma_label(sigma) << " N2N loss "
            << format_double(result.loss_history.empty() ? result.final_loss : result.loss_history.front())
            << " -> " << format_double(result.final_loss) << "\n";
      }
      const auto dir = cfg.learned_dir();
      write_json(dir / learned_file_name(m, sigma), j);
      const int first_epoch = resume ? resume->epochs_completed : 0;
      write_text_file((dir / ("loss_" + to_string(m) + "_sigma" + sigma_label(sigma) + ".csv")).string(),
                      loss_history_csv(result.loss_history, first_epoch));
    }
  }
  log << "train: wrote " << cfg.learned_dir().string() << "\n";
}

// ---------------------------------------------------------------- check

void cmd_check(const RunConfig& cfg, std::ostream& log) {
  const Dataset ds = open_dataset(cfg);
  const auto methods = cfg.methods("check.methods", {Method::lr, Method::pnp});
  for (Method m : methods)
    require(m == Method::lr || m == Method::pnp, ErrorKind::config,
            "check.methods accepts the denoisers lr and pnp");
  const double c = cfg.number("check.c", 1.1);
  require(c > 0.0, ErrorKind::config, "check.c must be > 0");
  const double alpha = cfg.number("check.alpha_denoiser", 1.0);
  const double rho = cfg.number("check.rho", 0.5);
  const int n_random = static_cast<int>(cfg.integer("check.random_probes", 100));
  const double homog_tol = cfg.number("check.homogeneity_tol", 1e-6);
  const double pass_tol = cfg.number("check.passivity_tol", 1e-6);
  const auto settings = cfg.solver();
  const bool spectral = cfg.spectral_space();
  const bool prefer_noisy = prefer_noisy_graph(cfg);
  for (Method m : methods)
    settings.denoiser(denoiser_kind(m), alpha, rho).validate();

  struct Row {
    std::string split, sample, graph, probe;
    Method method;
    double homogeneity, passivity;
  };
  struct Job {
    int split_index;
    std::size_t sample;
  };
  std::vector<Job> jobs;
  for (int s = 0; s < 2; ++s)
    for (std::size_t i = 0; i < (s == 0 ? ds.train : ds.test).size(); ++i) jobs.push_back({s, i});

  std::vector<std::vector<Row>> rows(jobs.size());
  parallel_for(jobs.size(), cfg.threads(), [&](std::size_t j) {
    const auto& sample = (jobs[j].split_index == 0 ? ds.train : ds.test)[jobs[j].sample];
    const Index n = sample.graph.n_nodes();

    auto run_probes = [&](const std::shared_ptr<const SignalSpace>& space, const std::string& graph,
                          const std::vector<std::pair<std::string, Vector>>& probes) {
      for (Method m : methods) {
        const auto den = make_denoiser(space, settings.denoiser(denoiser_kind(m), alpha, rho));
        for (const auto& [name, x] : probes) {
          const Vector coords = space->encode(x);
          rows[j].push_back({sample.split, sample.name, graph, name, m,
                             check_homogeneity(den, coords, c), check_passivity(den, coords)});
        }
      }
    };

    const auto base = make_space(sample.graph, spectral);
    std::vector<std::pair<std::string, Vector>> probes;
    for (int r = 0; r < n_random; ++r) {
      auto rng = Rng::stream(cfg.seed(), StreamPurpose::check_probe,
                             {static_cast<std::uint64_t>(jobs[j].split_index), jobs[j].sample,
                              static_cast<std::uint64_t>(r)});
      Vector x(n);
      for (Index k = 0; k < n; ++k) x(k) = rng.normal();
      probes.emplace_back("random_" + std::to_string(r), std::move(x));
    }
    probes.emplace_back("all_ones", Vector::Ones(n));
    run_probes(base, "graph", probes);

    for (double sigma : ds.sigmas) {
      const Graph& g = sample.graph_for(sigma, prefer_noisy);
      const auto space = &g == &sample.graph ? base : make_space(g, spectral);
      std::vector<std::pair<std::string, Vector>> obs;
      const Matrix& y = sample.observed.at(sigma);
      for (Index ch = 0; ch < y.cols(); ++ch)
        obs.emplace_back("observed_sigma" + sigma_label(sigma) + "_ch" + std::to_string(ch), y.col(ch));
      run_probes(space, &g == &sample.graph ? "graph" : "graph_sigma" + sigma_label(sigma), obs);
    }
  });

  Json jrows = Json::array();
  std::string csv = "split,sample,graph,probe,method,homogeneity,passivity\n";
  std::map<Method, Json> summary;
  for (Method m : methods)
    summary[m] = {{"method", to_string(m)}, {"probes", 0}, {"max_homogeneity", 0.0},
                  {"max_passivity", 0.0}, {"max_passivity_random", 0.0},
                  {"all_ones_passivity_max", 0.0}};
  for (const auto& chunk : rows) {
    for (const auto& r : chunk) {
      jrows.push_back({{"split", r.split}, {"sample", r.sample}, {"graph", r.graph},
                       {"probe", r.probe}, {"method", to_string(r.method)},
                       {"homogeneity", r.homogeneity}, {"passivity", r.passivity}});
      csv += r.split + "," + r.sample + "," + r.graph + "," + r.probe + "," + to_string(r.method) +
             "," + format_double(r.homogeneity) + "," + format_double(r.passivity) + "\n";
      auto& s = summary[r.method];
      s["probes"] = s["probes"].get<int>() + 1;
      s["max_homogeneity"] = std::max(s["max_homogeneity"].get<double>(), r.homogeneity);
      s["max_passivity"] = std::max(s["max_passivity"].get<double>(), r.passivity);
      if (r.probe.rfind("random_", 0) == 0)
        s["max_passivity_random"] = std::max(s["max_passivity_random"].get<double>(), r.passivity);
      if (r.probe == "all_ones")
        s["all_ones_passivity_max"] = std::max(s["all_ones_passivity_max"].get<double>(), r.passivity);
    }
  }
  Json jsummary = Json::array();
  for (Method m : methods) {
    auto& s = summary[m];
    s["homogeneity_ok"] = s["max_homogeneity"].get<double>() <= homog_tol;
    s["passivity_ok"] = s["max_passivity"].get<double>() <= 1.0 + pass_tol;
    jsummary.push_back(s);
    log << "check: " << to_string(m) << " over " << s["probes"].get<int>() << " probes: max homogeneity "
        << format_double(s["max_homogeneity"].get<double>()) << ", max passivity "
        << format_double(s["max_passivity"].get<double>()) << "\n";
  }

  Json out;
  out["format"] = "graphred-check";
  out["version"] = 1;
  out["c"] = c;
  out["alpha_denoiser"] = alpha;
  out["rho"] = rho;
  out["homogeneity_tol"] = homog_tol;
  out["passivity_tol"] = pass_tol;
  out["solver"] = solver_json(settings, spectral);
  out["summary"] = std::move(jsummary);
  out["rows"] = std::move(jrows);
  write_json(cfg.out() / "check.json", out);
  write_text_file((cfg.out() / "check.csv").string(), csv);
  log << "check: wrote " << (cfg.out() / "check.json").string() << "\n";
}

// ---------------------------------------------------------------- spectrum

void cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
  const Dataset ds = open_dataset(cfg);
  const auto split_name = cfg.string("spectrum.split", "train");
  const auto& samples = ds.split(split_name);
  const auto idx = static_cast<std::size_t>(cfg.integer("spectrum.sample", 0));
  require(idx < samples.size(), ErrorKind::config,
          "spectrum.sample " + std::to_string(idx) + " out of range for split " + split_name);
  const auto& sample = samples[idx];

  std::optional<double> sigma;
  if (cfg.has("spectrum.sigma")) {
    const double want = cfg.number("spectrum.sigma", 0.0);
    for (double s : ds.sigmas)
      if (same_sigma(s, want)) sigma = s;
    require(sigma.has_value(), ErrorKind::config, "spectrum.sigma is not in the dataset");
  }

  double alpha_red, alpha_lr;
  std::string source;
  if (cfg.has("spectrum.alpha_red") || cfg.has("spectrum.alpha_lr")) {
    require(cfg.has("spectrum.alpha_red") && cfg.has("spectrum.alpha_lr"), ErrorKind::config,
            "set both spectrum.alpha_red and spectrum.alpha_lr");
    alpha_red = cfg.number("spectrum.alpha_red", 1.0);
    alpha_lr = cfg.number("spectrum.alpha_lr", 1.0);
    source = "config";
  } else {
    require(sigma.has_value(), ErrorKind::config,
            "spectrum needs spectrum.alpha_red and spectrum.alpha_lr, or spectrum.sigma to read "
            "tuned red_lr parameters");
    const auto p = find_tuned(read_tuned(cfg.tuned_path()), Method::red_lr, *sigma, cfg.tuned_path());
    alpha_red = p.alpha_red;
    alpha_lr = p.alpha_denoiser;
    source = "tuned";
  }
  require(alpha_red > 0.0 && alpha_lr > 0.0, ErrorKind::config, "spectrum alphas must be > 0");

  const bool noisy = sigma && prefer_noisy_graph(cfg) && sample.noisy_graphs.count(*sigma);
  const Graph& g = sigma ? sample.graph_for(*sigma, prefer_noisy_graph(cfg)) : sample.graph;
  const auto decomp = eigendecompose(build_laplacian(g));
  const auto table = compare_responses(decomp, alpha_red, alpha_lr);
  ensure_dir(cfg.out());
  write_response_csv((cfg.out() / "spectrum.csv").string(), table);

  Json meta;
  meta["split"] = split_name;
  meta["sample"] = sample.name;
  if (sigma) meta["sigma"] = *sigma;
  meta["graph"] = noisy ? "noisy" : "clean";
  meta["alpha_red"] = alpha_red;
  meta["alpha_lr"] = alpha_lr;
  meta["alpha_source"] = source;
  meta["n_eigenvalues"] = decomp.eigenvalues.size();
  meta["lambda_max"] = decomp.eigenvalues.maxCoeff();
  meta["h_red_max"] = table.h_red.maxCoeff();
  meta["h_lr_max"] = table.h_lr.maxCoeff();
  if (cfg.has("spectrum.lambda_grid_points")) {
    const auto points = cfg.integer("spectrum.lambda_grid_points", 0);
    require(points >= 2, ErrorKind::config, "spectrum.lambda_grid_points must be >= 2");
    const double lmax = cfg.number("spectrum.lambda_grid_max", decomp.eigenvalues.maxCoeff());
    require(lmax > 0.0, ErrorKind::config, "spectrum.lambda_grid_max must be > 0");
    write_response_csv((cfg.out() / "spectrum_grid.csv").string(),
                       compare_responses(lambda_grid(lmax, points), alpha_red, alpha_lr));
    meta["grid_file"] = "spectrum_grid.csv";
  }
  write_json(cfg.out() / "spectrum_meta.json", meta);
  log << "spectrum: " << decomp.eigenvalues.size() << " eigenvalues, alpha_red "
      << format_double(alpha_red) << ", alpha_lr " << format_double(alpha_lr) << " (" << source
      << ") -> " << (cfg.out() / "spectrum.csv").string() << "\n";
}

// ---------------------------------------------------------------- eval

void cmd_eval(const RunConfig& cfg, std::ostream& log) {
  const Dataset ds = open_dataset(cfg);
  const auto split_name = cfg.string("eval.split", cfg.string("split", "test"));
  const auto& samples = ds.split(split_name);
  require(!samples.empty(), ErrorKind::config, "split '" + split_name + "' is empty");
  const fs::path root = cfg.path("eval.denoised_dir", cfg.out() / "denoised") / split_name;
  require(fs::is_directory(root), ErrorKind::io, "no denoised outputs at " + root.string());

  static const std::regex pattern(R"(denoised_([a-z_]+)_sigma([0-9.eE+-]+)\.csv)");
  std::set<std::pair<Method, double>> keys;
  std::vector<std::map<std::pair<Method, double>, fs::path>> files(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const fs::path dir = root / samples[i].name;
    require(fs::is_directory(dir), ErrorKind::io, "missing denoised directory " + dir.string());
    std::vector<fs::path> entries;
    for (const auto& e : fs::directory_iterator(dir)) entries.push_back(e.path());
    std::sort(entries.begin(), entries.end());
    for (const auto& p : entries) {
      std::smatch mt;
      const std::string name = p.filename().string();
      if (!std::regex_match(name, mt, pattern)) continue;
      const Method m = parse_method(mt[1]);
      const double want = std::strtod(mt[2].str().c_str(), nullptr);
      auto it = std::find_if(ds.sigmas.begin(), ds.sigmas.end(),
                             [&](double d) { return same_sigma(d, want); });
      require(it != ds.sigmas.end(), ErrorKind::io, p.string() + ": sigma not in dataset");
      files[i][{m, *it}] = p;
      keys.insert({m, *it});
    }
  }
  require(!keys.empty(), ErrorKind::io, "no denoised_<method>_sigma<s>.csv files under " + root.string());

  RmseTable table;
  std::set<double> sigma_set;
  for (const auto& [m, sigma] : keys) {
    sigma_set.insert(sigma);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      auto it = files[i].find({m, sigma});
      require(it != files[i].end(), ErrorKind::io,
              "missing " + denoised_file_name(m, sigma) + " for sample " + samples[i].name);
      const Matrix x = read_matrix_csv(it->second.string());
      const Matrix& clean = clean_of(samples[i], "eval");
      require(x.rows() == clean.rows() && x.cols() == clean.cols(), ErrorKind::io,
              it->second.string() + ": shape does not match the clean signal");
      table[m][sigma].push_back(rmse(x, clean));
    }
  }
  for (double sigma : sigma_set)
    for (const auto& s : samples)
      table[Method::observed][sigma].push_back(rmse(s.observed.at(sigma), clean_of(s, "eval")));

  const std::vector<double> sigmas(sigma_set.begin(), sigma_set.end());
  const Json metrics = metrics_json(split_name, samples, table, sigmas);
  write_json(cfg.out() / "eval.json", metrics);
  print_table(log, metrics);
  log << "eval: wrote " << (cfg.out() / "eval.json").string() << "\n";
}

}  // namespace graphred::app
