#pragma once

// Named denoising methods and exhaustive grid tuning of their scalar
// hyperparameters.
//
// All methods run in a SignalSpace's coordinates; RMSE is computed there as
// well, which is exact for the spectral space since U is orthonormal.

#include "graphred/denoisers.hpp"
#include "graphred/red.hpp"
#include "graphred/unroll.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace graphred {

enum class Method { observed, lr, pnp, red_lr, red_pnp, red_lr_dau, red_pnp_dau, red_lr_unsup };

std::string to_string(Method m);
Method parse_method(const std::string& s);
const std::vector<Method>& all_methods();

bool is_red(Method m);
/// DAU and unsupervised variants: per-layer parameters loaded from training.
bool is_unrolled(Method m);
DenoiserKind denoiser_kind(Method m);
/// The flat method whose tuned scalars initialize an unrolled one.
Method flat_counterpart(Method m);

struct ScalarParams {
  double alpha_red = 1.0;
  double alpha_denoiser = 1.0;
  double rho = 1.0;
};

struct SolverSettings {
  int layers = 10;
  int pnp_iters = 10;
  bool paper_literal_x_update = false;
  bool warm_start = false;
  LrSolve lr_solve = LrSolve::direct;
  double cg_tol = 1e-10;
  int cg_max_iters = 10000;

  Denoiser denoiser(DenoiserKind kind, double alpha, double rho) const;
  RedCgOptions red_options() const { return {warm_start, false}; }
};

struct MethodParams {
  std::optional<ScalarParams> flat;
  std::optional<UnrolledParams> unrolled;
};

/// Denoise one signal given in `space` coordinates. `report` is filled for
/// flat RED methods only.
Vector run_method(Method m, const std::shared_ptr<const SignalSpace>& space, const Vector& y,
                  const MethodParams& params, const SolverSettings& settings,
                  RedSolveReport* report = nullptr);

/// Column-wise version for multi-channel signals.
Matrix run_method(Method m, const std::shared_ptr<const SignalSpace>& space, const Matrix& y,
                  const MethodParams& params, const SolverSettings& settings);

/// Log-spaced grids: n points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

struct GridSpec {
  double alpha_lo = 1e-3;
  double alpha_hi = 1e3;
  double rho_lo = 1e-2;
  double rho_hi = 1e2;
  int points = 20;
  /// Explicit values override the log-spaced ranges when non-empty.
  std::vector<double> alpha_values;
  std::vector<double> rho_values;

  std::vector<double> alphas() const;
  std::vector<double> rhos() const;
  void validate() const;
};

/// Tuning signal in space coordinates; columns are channels.
struct TuneSample {
  std::shared_ptr<const SignalSpace> space;
  Matrix input;
  Matrix target;
};

struct TuneResult {
  ScalarParams params;
  double score = 0.0;  // mean per-sample RMSE
  Index evaluated = 0;
};

/// Exhaustive search over the grid dimensions the method uses, in ascending
/// order (alpha_red, then alpha_denoiser, then rho). Ties keep the earlier,
/// smaller point.
TuneResult grid_search(Method m, const std::vector<TuneSample>& samples, const GridSpec& grid,
                       const SolverSettings& settings, int threads = 1);

/// Mean per-sample RMSE of a method on tuning samples.
double mean_rmse(Method m, const std::vector<TuneSample>& samples, const MethodParams& params,
                 const SolverSettings& settings);

}  // namespace graphred
