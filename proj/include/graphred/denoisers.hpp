#pragma once

// Internal graph denoisers: Laplacian regularization (LR) and PnP-ADMM with an
// LR inner step.
//
// Every denoiser here is a function of L, so it can run either on node-domain
// signals or on graph-Fourier coefficients, where (I + aL)^-1 is diagonal.
// SignalSpace selects which; inner products and norms agree in both because
// the Fourier basis is orthonormal.

#include "graphred/graph.hpp"
#include "graphred/types.hpp"

#include <memory>
#include <optional>
#include <string>

namespace graphred {

enum class DenoiserKind { lr, pnp };
enum class LrSolve { direct, cg };

std::string to_string(DenoiserKind kind);
DenoiserKind parse_denoiser_kind(const std::string& s);

struct Denoiser {
  DenoiserKind kind = DenoiserKind::lr;
  /// alpha_lr for LR; alpha_pnp (strength of the inner LR step) for PnP.
  double alpha = 1.0;
  double rho = 1.0;
  int pnp_iters = 10;
  LrSolve lr_solve = LrSolve::direct;
  double cg_tol = 1e-10;
  int cg_max_iters = 10000;
  /// Use x <- (x + rho(v - u)) / (1 + rho) instead of the y-anchored update.
  bool paper_literal_x_update = false;

  void validate() const;
};

class SignalSpace {
 public:
  /// Signals indexed by node; LR solves against L.
  static std::shared_ptr<const SignalSpace> vertex(Laplacian lap);
  /// Signals are GFT coefficients; LR is a diagonal scaling.
  static std::shared_ptr<const SignalSpace> spectral(SpectralDecomp decomp);

  bool is_spectral() const { return decomp_.has_value(); }
  Index size() const;

  const Laplacian& laplacian() const;
  const SpectralDecomp& decomposition() const;

  /// Node-domain signal -> this space's coordinates, and back.
  Vector encode(const Vector& node_signal) const;
  Vector decode(const Vector& coords) const;

  /// (I + alpha L)^-1 y in this space's coordinates.
  Vector lr(const Vector& y, double alpha, const Denoiser& cfg) const;

 private:
  SignalSpace() = default;
  std::optional<Laplacian> lap_;
  std::optional<SpectralDecomp> decomp_;
};

/// Dense Cholesky (LDL^T) solve of (I + alpha L) x = y; alpha = 0 returns y.
Vector lr_denoise(const Laplacian& lap, const Vector& y, double alpha);

struct CgResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Conjugate gradient on (I + alpha L) x = y starting from 0. Stops when
/// ||r|| <= tol ||y||; throws Error(convergence) after max_iters.
CgResult lr_denoise_cg(const Laplacian& lap, const Vector& y, double alpha, double tol,
                       int max_iters);

/// PnP-ADMM with an arbitrary inner denoiser. Starts from x = v = y, u = 0.
Vector pnp_admm_denoise(const Vector& y, const SignalMap& inner, double rho, int iters,
                        bool paper_literal_x_update = false);

/// PnP-ADMM with the LR inner denoiser at strength alpha.
Vector pnp_admm_denoise(const Laplacian& lap, const Vector& y, double alpha, double rho,
                        int iters, bool paper_literal_x_update = false);

/// Apply a configured denoiser in the given space.
Vector denoise(const SignalSpace& space, const Denoiser& cfg, const Vector& y);

/// Bind space and config into a plain signal map.
SignalMap make_denoiser(std::shared_ptr<const SignalSpace> space, Denoiser cfg);

}  // namespace graphred
