#include "graphred/denoisers.hpp"

#include "graphred/error.hpp"

#include <cmath>

namespace graphred {

std::string to_string(DenoiserKind kind) {
  return kind == DenoiserKind::lr ? "lr" : "pnp";
}

DenoiserKind parse_denoiser_kind(const std::string& s) {
  if (s == "lr") return DenoiserKind::lr;
  if (s == "pnp") return DenoiserKind::pnp;
  fail(ErrorKind::parameter, "unknown denoiser kind '" + s + "' (expected lr or pnp)");
}

void Denoiser::validate() const {
  require(std::isfinite(alpha) && alpha >= 0.0, ErrorKind::parameter,
          "denoiser alpha must be >= 0");
  if (kind == DenoiserKind::pnp) {
    require(std::isfinite(rho) && rho > 0.0, ErrorKind::parameter, "PnP rho must be > 0");
    require(pnp_iters >= 1, ErrorKind::parameter, "PnP iterations must be >= 1");
  }
  if (lr_solve == LrSolve::cg) {
    require(cg_tol > 0.0 && cg_max_iters >= 1, ErrorKind::parameter,
            "CG tolerance must be > 0 and max iterations >= 1");
  }
}

std::shared_ptr<const SignalSpace> SignalSpace::vertex(Laplacian lap) {
  auto s = std::shared_ptr<SignalSpace>(new SignalSpace());
  s->lap_.emplace(std::move(lap));
  return s;
}

std::shared_ptr<const SignalSpace> SignalSpace::spectral(SpectralDecomp decomp) {
  auto s = std::shared_ptr<SignalSpace>(new SignalSpace());
  s->decomp_.emplace(std::move(decomp));
  return s;
}

Index SignalSpace::size() const {
  return decomp_ ? decomp_->size() : lap_->size();
}

const Laplacian& SignalSpace::laplacian() const {
  require(lap_.has_value(), ErrorKind::parameter, "signal space has no Laplacian");
  return *lap_;
}

const SpectralDecomp& SignalSpace::decomposition() const {
  require(decomp_.has_value(), ErrorKind::parameter, "signal space is not spectral");
  return *decomp_;
}

Vector SignalSpace::encode(const Vector& node_signal) const {
  return decomp_ ? gft(*decomp_, node_signal) : node_signal;
}

Vector SignalSpace::decode(const Vector& coords) const {
  return decomp_ ? igft(*decomp_, coords) : coords;
}

Vector SignalSpace::lr(const Vector& y, double alpha, const Denoiser& cfg) const {
  require(y.size() == size(), ErrorKind::dimension,
          "denoiser input length " + std::to_string(y.size()) + " != N=" +
              std::to_string(size()));
  if (decomp_) {
    return (y.array() / (1.0 + alpha * decomp_->eigenvalues.array())).matrix();
  }
  if (cfg.lr_solve == LrSolve::cg) {
    return lr_denoise_cg(*lap_, y, alpha, cfg.cg_tol, cfg.cg_max_iters).x;
  }
  return lr_denoise(*lap_, y, alpha);
}

Vector lr_denoise(const Laplacian& lap, const Vector& y, double alpha) {
  require(y.size() == lap.size(), ErrorKind::dimension, "lr_denoise: dimension mismatch");
  require(alpha >= 0.0, ErrorKind::parameter, "lr_denoise: alpha must be >= 0");
  if (alpha == 0.0) return y;
  Matrix a = alpha * lap.matrix();
  a.diagonal().array() += 1.0;
  Eigen::LDLT<Matrix> ldlt(a);
  require(ldlt.info() == Eigen::Success, ErrorKind::numerical_failure,
          "lr_denoise: factorization of I + alpha L failed");
  Vector x = ldlt.solve(y);
  require(x.allFinite(), ErrorKind::numerical_failure, "lr_denoise: non-finite solution");
  return x;
}

CgResult lr_denoise_cg(const Laplacian& lap, const Vector& y, double alpha, double tol,
                       int max_iters) {
  require(y.size() == lap.size(), ErrorKind::dimension, "lr_denoise_cg: dimension mismatch");
  require(alpha >= 0.0, ErrorKind::parameter, "lr_denoise_cg: alpha must be >= 0");
  const Matrix& l = lap.matrix();
  CgResult res;
  res.x = Vector::Zero(y.size());
  const double bnorm = y.norm();
  if (bnorm == 0.0) return res;

  Vector r = y;
  Vector p = r;
  double rr = r.squaredNorm();
  for (int it = 0; it < max_iters; ++it) {
    if (std::sqrt(rr) <= tol * bnorm) break;
    Vector ap = p + alpha * (l * p);
    const double pap = p.dot(ap);
    require(pap > 0.0 && std::isfinite(pap), ErrorKind::numerical_failure,
            "lr_denoise_cg: breakdown (p^T A p = " + std::to_string(pap) + ")");
    const double step = rr / pap;
    res.x += step * p;
    r -= step * ap;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
    res.iterations = it + 1;
  }
  res.relative_residual = std::sqrt(rr) / bnorm;
  if (res.relative_residual > tol) {
    fail(ErrorKind::convergence,
         "lr_denoise_cg: no convergence after " + std::to_string(max_iters) +
             " iterations (relative residual " + std::to_string(res.relative_residual) + ")");
  }
  return res;
}

Vector pnp_admm_denoise(const Vector& y, const SignalMap& inner, double rho, int iters,
                        bool paper_literal_x_update) {
  require(iters >= 1, ErrorKind::parameter, "pnp_admm: iterations must be >= 1");
  require(rho > 0.0, ErrorKind::parameter, "pnp_admm: rho must be > 0");
  Vector x = y;
  Vector v = y;
  Vector u = Vector::Zero(y.size());
  const double scale = 1.0 / (1.0 + rho);
  for (int k = 0; k < iters; ++k) {
    const Vector& anchor = paper_literal_x_update ? x : y;
    x = scale * (anchor + rho * (v - u));
    v = inner(x + u);
    u += x - v;
    if (!x.allFinite() || !v.allFinite() || !u.allFinite()) {
      fail(ErrorKind::divergence,
           "pnp_admm: non-finite values at iteration " + std::to_string(k + 1));
    }
  }
  return x;
}

Vector pnp_admm_denoise(const Laplacian& lap, const Vector& y, double alpha, double rho,
                        int iters, bool paper_literal_x_update) {
  return pnp_admm_denoise(
      y, [&](const Vector& s) { return lr_denoise(lap, s, alpha); }, rho, iters,
      paper_literal_x_update);
}

Vector denoise(const SignalSpace& space, const Denoiser& cfg, const Vector& y) {
  switch (cfg.kind) {
    case DenoiserKind::lr:
      return space.lr(y, cfg.alpha, cfg);
    case DenoiserKind::pnp:
      return pnp_admm_denoise(
          y, [&](const Vector& s) { return space.lr(s, cfg.alpha, cfg); }, cfg.rho,
          cfg.pnp_iters, cfg.paper_literal_x_update);
  }
  fail(ErrorKind::parameter, "unknown denoiser kind");
}

SignalMap make_denoiser(std::shared_ptr<const SignalSpace> space, Denoiser cfg) {
  cfg.validate();
  return [space = std::move(space), cfg](const Vector& y) { return denoise(*space, cfg, y); };
}

}  // namespace graphred
