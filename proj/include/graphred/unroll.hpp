#pragma once

// Deep algorithm unrolling of the RED conjugate-gradient solver: K layers
// with their own alpha_red, denoiser strength and (PnP only) rho, learned
// with Adam from clean targets (supervised) or from re-noised observations
// (Noise2Noise).

#include "graphred/denoisers.hpp"
#include "graphred/red.hpp"
#include "graphred/rng.hpp"
#include "graphred/types.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace graphred {

/// log(1 + exp(t)); maps any real to a positive value.
double softplus(double t);
/// Inverse of softplus for a > 0.
double inverse_softplus(double a);

struct UnrolledParams {
  int layers = 10;  // K
  DenoiserKind kind = DenoiserKind::lr;
  std::vector<double> alpha_red;       // K+1
  std::vector<double> alpha_denoiser;  // K+1
  std::vector<double> rho;             // K+1 for PnP, empty for LR

  static UnrolledParams flat(int layers, DenoiserKind kind, double alpha_red,
                             double alpha_denoiser, double rho = 1.0);

  /// 2(K+1) for LR, 3(K+1) for PnP.
  Index trainable_count() const;
  void validate() const;
  LayerSchedule schedule() const;

  /// Unconstrained coordinates: [alpha_red..., alpha_denoiser..., rho...]
  /// through inverse_softplus.
  Vector to_theta() const;
  static UnrolledParams from_theta(int layers, DenoiserKind kind, const Vector& theta);
};

/// Unrolled RED-CG pass with per-layer parameters. `base` supplies the
/// denoiser settings that are not learned (PnP iterations, LR solver, ...).
Vector unrolled_forward(std::shared_ptr<const SignalSpace> space, const Vector& y,
                        const UnrolledParams& params, const Denoiser& base = {},
                        const RedCgOptions& options = {});

double mse(const Vector& x_hat, const Vector& x_star);
double rmse(const Vector& x_hat, const Vector& x_star);
/// RMSE over all entries of two equally shaped matrices (multi-channel).
double rmse(const Matrix& x_hat, const Matrix& x_star);

struct N2NPair {
  Vector input;
  Vector target;
  double sigma = 0.0;
};

/// sigma ~ U[sigma_lo, sigma_hi], input = y + N(0, sigma^2 I), target = y.
N2NPair make_n2n_pair(const Vector& y, double sigma_lo, double sigma_hi, Rng& rng);

struct AdamOptions {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  Vector m;
  Vector v;
  long step = 0;

  static AdamState fresh(Index n) { return {Vector::Zero(n), Vector::Zero(n), 0}; }
};

/// One bias-corrected Adam update; advances `state`.
Vector adam_step(const Vector& theta, const Vector& grad, AdamState& state,
                 const AdamOptions& opts = {});

enum class TrainMode { supervised, noise2noise };
enum class GradientMethod { finite_difference, analytic_linear };

struct TrainConfig {
  TrainMode mode = TrainMode::supervised;
  AdamOptions adam;
  int epochs = 200;
  /// Noise2Noise sigma range as fractions of max|y| per sample.
  double n2n_sigma_lo = 0.0;
  double n2n_sigma_hi = 0.4;
  std::uint64_t seed = 0;
  GradientMethod gradient = GradientMethod::finite_difference;
  /// Central-difference step in theta coordinates.
  double fd_step = 1e-5;
  int threads = 1;
  RedCgOptions solver;

  void validate() const;
};

/// One training signal. Signals are node-domain; `space` decides where the
/// solver runs.
struct TrainSample {
  std::shared_ptr<const SignalSpace> space;
  Vector observed;
  std::optional<Vector> clean;
};

struct TrainResult {
  UnrolledParams params;
  /// Mean loss at the parameters entering each epoch.
  std::vector<double> loss_history;
  /// Mean loss after the final update (the next epoch's starting loss).
  double final_loss = 0.0;
  /// Unconstrained coordinates of `params`, kept for bit-exact resumption.
  Vector theta;
  AdamState adam;
  int epochs_completed = 0;
};

/// Resume support: pass the state and epoch counter saved from a previous run
/// to continue the exact same trajectory.
struct TrainResume {
  AdamState adam;
  int epochs_completed = 0;
  /// Optional; when empty the initial parameters are re-encoded.
  Vector theta;
};

TrainResult train(const std::vector<TrainSample>& dataset, const TrainConfig& config,
                  const UnrolledParams& init, const Denoiser& base = {},
                  const std::optional<TrainResume>& resume = std::nullopt);

struct LossAndGradient {
  double loss = 0.0;
  Vector gradient;  // with respect to theta
};

/// Mean training loss and its theta-gradient at `params` for a given epoch's
/// inputs/targets. Exposed so both gradient paths can be compared directly.
LossAndGradient training_loss_gradient(const std::vector<TrainSample>& dataset,
                                       const TrainConfig& config,
                                       const UnrolledParams& params, const Denoiser& base,
                                       int epoch);

/// MSE and theta-gradient of one LR-denoiser unrolled pass, by forward-mode
/// differentiation of the CG recursion in the graph Fourier domain.
/// `y_hat` and `target_hat` are GFT coefficients.
LossAndGradient unrolled_lr_loss_gradient(const Vector& eigenvalues, const Vector& y_hat,
                                          const Vector& target_hat,
                                          const UnrolledParams& params,
                                          const RedCgOptions& options = {});

}  // namespace graphred
