#include "graphred/methods.hpp"

#include "graphred/error.hpp"
#include "graphred/parallel.hpp"

#include <cmath>
#include <limits>

namespace graphred {

namespace {

struct MethodName {
  Method method;
  const char* name;
};

constexpr MethodName kNames[] = {
    {Method::observed, "observed"},         {Method::lr, "lr"},
    {Method::pnp, "pnp"},                   {Method::red_lr, "red_lr"},
    {Method::red_pnp, "red_pnp"},           {Method::red_lr_dau, "red_lr_dau"},
    {Method::red_pnp_dau, "red_pnp_dau"},   {Method::red_lr_unsup, "red_lr_unsup"},
};

}  // namespace

std::string to_string(Method m) {
  for (const auto& n : kNames)
    if (n.method == m) return n.name;
  return "unknown";
}

Method parse_method(const std::string& s) {
  for (const auto& n : kNames)
    if (s == n.name) return n.method;
  std::string known;
  for (const auto& n : kNames) known += std::string(known.empty() ? "" : ", ") + n.name;
  fail(ErrorKind::config, "unknown method '" + s + "' (known: " + known + ")");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = [] {
    std::vector<Method> v;
    for (const auto& n : kNames) v.push_back(n.method);
    return v;
  }();
  return methods;
}

bool is_red(Method m) {
  return m == Method::red_lr || m == Method::red_pnp || is_unrolled(m);
}

bool is_unrolled(Method m) {
  return m == Method::red_lr_dau || m == Method::red_pnp_dau || m == Method::red_lr_unsup;
}

DenoiserKind denoiser_kind(Method m) {
  return (m == Method::pnp || m == Method::red_pnp || m == Method::red_pnp_dau)
             ? DenoiserKind::pnp
             : DenoiserKind::lr;
}

Method flat_counterpart(Method m) {
  switch (m) {
    case Method::red_lr_dau:
    case Method::red_lr_unsup:
      return Method::red_lr;
    case Method::red_pnp_dau:
      return Method::red_pnp;
    default:
      return m;
  }
}

Denoiser SolverSettings::denoiser(DenoiserKind kind, double alpha, double rho) const {
  Denoiser d;
  d.kind = kind;
  d.alpha = alpha;
  d.rho = rho;
  d.pnp_iters = pnp_iters;
  d.lr_solve = lr_solve;
  d.cg_tol = cg_tol;
  d.cg_max_iters = cg_max_iters;
  d.paper_literal_x_update = paper_literal_x_update;
  return d;
}

Vector run_method(Method m, const std::shared_ptr<const SignalSpace>& space, const Vector& y,
                  const MethodParams& params, const SolverSettings& settings,
                  RedSolveReport* report) {
  require(space != nullptr, ErrorKind::parameter, "run_method: no signal space");
  require(y.size() == space->size(), ErrorKind::dimension, "run_method: signal length mismatch");
  if (m == Method::observed) return y;

  if (is_unrolled(m)) {
    require(params.unrolled.has_value(), ErrorKind::config,
            "method " + to_string(m) + " needs learned per-layer parameters");
    const auto& up = *params.unrolled;
    require(up.kind == denoiser_kind(m), ErrorKind::config,
            "learned parameters for " + to_string(up.kind) + " cannot drive " + to_string(m));
    return unrolled_forward(space, y, up, settings.denoiser(up.kind, 1.0, 1.0),
                            settings.red_options());
  }

  require(params.flat.has_value(), ErrorKind::config,
          "method " + to_string(m) + " needs tuned scalar parameters");
  const auto& p = *params.flat;
  const Denoiser den = settings.denoiser(denoiser_kind(m), p.alpha_denoiser, p.rho);
  if (!is_red(m)) return denoise(*space, den, y);

  RedProblem prob{space, y, p.alpha_red, den};
  auto r = red_cg_solve(prob, settings.layers, std::nullopt, settings.red_options());
  if (report) *report = r;
  return std::move(r.x);
}

Matrix run_method(Method m, const std::shared_ptr<const SignalSpace>& space, const Matrix& y,
                  const MethodParams& params, const SolverSettings& settings) {
  Matrix out(y.rows(), y.cols());
  for (Index c = 0; c < y.cols(); ++c)
    out.col(c) = run_method(m, space, Vector(y.col(c)), params, settings);
  return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  require(n >= 1, ErrorKind::config, "grid needs at least one point");
  require(lo > 0.0 && hi >= lo, ErrorKind::config, "grid range must satisfy 0 < lo <= hi");
  if (n == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(n));
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> GridSpec::alphas() const {
  return alpha_values.empty() ? log_grid(alpha_lo, alpha_hi, points) : alpha_values;
}

std::vector<double> GridSpec::rhos() const {
  return rho_values.empty() ? log_grid(rho_lo, rho_hi, points) : rho_values;
}

void GridSpec::validate() const {
  for (double a : alphas()) require(a > 0.0 && std::isfinite(a), ErrorKind::config, "grid alpha values must be positive");
  for (double r : rhos()) require(r > 0.0 && std::isfinite(r), ErrorKind::config, "grid rho values must be positive");
}

double mean_rmse(Method m, const std::vector<TuneSample>& samples, const MethodParams& params,
                 const SolverSettings& settings) {
  require(!samples.empty(), ErrorKind::parameter, "no samples to score");
  double total = 0.0;
  for (const auto& s : samples) total += rmse(run_method(m, s.space, s.input, params, settings), s.target);
  return total / static_cast<double>(samples.size());
}

TuneResult grid_search(Method m, const std::vector<TuneSample>& samples, const GridSpec& grid,
                       const SolverSettings& settings, int threads) {
  grid.validate();
  require(!samples.empty(), ErrorKind::parameter, "grid search needs training samples");
  const Method target = flat_counterpart(m);
  require(target != Method::observed, ErrorKind::config, "observed has no parameters to tune");

  const auto alphas = grid.alphas();
  const auto rhos = grid.rhos();
  const bool use_red = is_red(target);
  const bool use_rho = denoiser_kind(target) == DenoiserKind::pnp;
  const std::vector<double> red_axis = use_red ? alphas : std::vector<double>{0.0};
  const std::vector<double> rho_axis = use_rho ? rhos : std::vector<double>{1.0};

  std::vector<ScalarParams> points;
  for (double ar : red_axis)
    for (double ad : alphas)
      for (double r : rho_axis) points.push_back({ar, ad, r});
  require(!points.empty(), ErrorKind::config, "empty grid");

  std::vector<double> scores(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    double s;
    try {
      s = mean_rmse(target, samples, MethodParams{points[i], std::nullopt}, settings);
    } catch (const Error& e) {
      // A grid point that breaks the solver is simply not a candidate.
      if (e.kind() != ErrorKind::divergence && e.kind() != ErrorKind::stagnation &&
          e.kind() != ErrorKind::numerical_failure)
        throw;
      s = std::numeric_limits<double>::infinity();
    }
    scores[i] = std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
  });

  TuneResult best;
  best.score = std::numeric_limits<double>::infinity();
  best.evaluated = static_cast<Index>(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (scores[i] < best.score) {
      best.params = points[i];
      best.score = scores[i];
    }
  }
  require(std::isfinite(best.score), ErrorKind::numerical_failure, "every grid point failed for " + to_string(m));
  return best;
}

}  // namespace graphred
