#pragma once

// Regularization by denoising on graphs:
//
//   min_x  1/2 ||x - y||^2 + alpha_red/2 x^T (x - D(x))
//
// with the simplified gradient x - y + alpha_red (x - D(x)), solved by plain
// gradient descent or by the conjugate-gradient recursion with optional
// per-layer (unrolled) parameters. Also hosts the empirical homogeneity and
// passivity checks for a denoiser.

#include "graphred/denoisers.hpp"
#include "graphred/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace graphred {

struct RedProblem {
  std::shared_ptr<const SignalSpace> space;
  Vector y;
  double alpha_red = 1.0;
  Denoiser denoiser;

  void validate() const;
  Vector apply_denoiser(const Vector& x) const { return denoise(*space, denoiser, x); }
};

enum class StopReason { completed, converged, stagnated };
std::string to_string(StopReason r);

struct RedSolveReport {
  Vector x;
  int iterations = 0;
  std::vector<double> gradient_norm_history;
  std::vector<double> objective_history;
  StopReason stop_reason = StopReason::completed;
};

double red_objective(const RedProblem& prob, const Vector& x);
Vector red_gradient(const RedProblem& prob, const Vector& x);

/// x_{k+1} = x_k - step * grad(x_k), from x_0 = 0. Throws Error(divergence)
/// if the objective exceeds 1e6 times its initial value.
RedSolveReport red_gradient_descent(const RedProblem& prob, double step, int iters);

/// Per-layer hyperparameters, index 0 for the initialization and index k for
/// the k-th loop body. `rho` is used only by PnP denoisers and may be empty.
struct LayerSchedule {
  std::vector<double> alpha_red;
  std::vector<double> alpha_denoiser;
  std::vector<double> rho;

  static LayerSchedule flat(int layers, double alpha_red, double alpha_denoiser,
                            std::optional<double> rho = std::nullopt);
  int layers() const { return static_cast<int>(alpha_red.size()) - 1; }
};

struct RedCgOptions {
  /// Start from y instead of 0.
  bool warm_start = false;
  /// Throw Error(stagnation) instead of stopping early on a vanishing
  /// line-search denominator.
  bool raise_on_stagnation = false;
};

/// Conjugate-gradient RED solve with Fletcher-Reeves updates and a line
/// search that applies the denoiser to the search direction. Runs exactly K
/// layers unless the gradient vanishes or the line search stagnates.
RedSolveReport red_cg_solve(const RedProblem& prob, int layers,
                            const std::optional<LayerSchedule>& schedule = std::nullopt,
                            const RedCgOptions& options = {});

/// ||D(c x) - c D(x)|| / ||c D(x)||.
double check_homogeneity(const SignalMap& denoiser, const Vector& x, double c);
/// ||D(x)||^2 / ||x||^2.
double check_passivity(const SignalMap& denoiser, const Vector& x);

}  // namespace graphred
