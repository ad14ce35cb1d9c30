#include "graphred/red.hpp"

#include "graphred/error.hpp"

#include <cmath>

namespace graphred {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::completed: return "completed";
    case StopReason::converged: return "converged";
    case StopReason::stagnated: return "stagnated";
  }
  return "unknown";
}

void RedProblem::validate() const {
  require(space != nullptr, ErrorKind::parameter, "RED problem has no signal space");
  require(y.size() == space->size(), ErrorKind::dimension,
          "observation length " + std::to_string(y.size()) + " != N=" +
              std::to_string(space->size()));
  require(std::isfinite(alpha_red) && alpha_red >= 0.0, ErrorKind::parameter,
          "alpha_red must be >= 0");
  denoiser.validate();
}

namespace {

struct GradientEval {
  Vector gradient;
  double objective;
};

GradientEval evaluate(const Vector& x, const Vector& y, double alpha_red, const Vector& dx) {
  const Vector resid = x - dx;
  GradientEval out{x - y + alpha_red * resid, 0.0};
  out.objective = 0.5 * (x - y).squaredNorm() + 0.5 * alpha_red * x.dot(resid);
  if (!out.gradient.allFinite() || !std::isfinite(out.objective)) {
    fail(ErrorKind::numerical_failure, "non-finite RED gradient or objective");
  }
  return out;
}

void require_dims(const RedProblem& prob, const Vector& x) {
  require(x.size() == prob.y.size(), ErrorKind::dimension,
          "signal length " + std::to_string(x.size()) + " != N=" +
              std::to_string(prob.y.size()));
}

}  // namespace

double red_objective(const RedProblem& prob, const Vector& x) {
  require_dims(prob, x);
  return evaluate(x, prob.y, prob.alpha_red, prob.apply_denoiser(x)).objective;
}

Vector red_gradient(const RedProblem& prob, const Vector& x) {
  require_dims(prob, x);
  return evaluate(x, prob.y, prob.alpha_red, prob.apply_denoiser(x)).gradient;
}

RedSolveReport red_gradient_descent(const RedProblem& prob, double step, int iters) {
  prob.validate();
  require(step > 0.0, ErrorKind::parameter, "gradient descent step must be > 0");
  require(iters >= 0, ErrorKind::parameter, "iteration count must be >= 0");
  RedSolveReport rep;
  rep.x = Vector::Zero(prob.y.size());
  double initial = 0.0;
  for (int it = 0;; ++it) {
    const auto ev = evaluate(rep.x, prob.y, prob.alpha_red, prob.apply_denoiser(rep.x));
    if (it == 0) initial = ev.objective;
    if (initial > 0.0 && ev.objective > 1e6 * initial) {
      fail(ErrorKind::divergence,
           "gradient descent diverged at iteration " + std::to_string(it) +
               "; try a smaller step than " + std::to_string(step));
    }
    rep.objective_history.push_back(ev.objective);
    rep.gradient_norm_history.push_back(ev.gradient.norm());
    if (it == iters) break;
    rep.x -= step * ev.gradient;
    rep.iterations = it + 1;
  }
  return rep;
}

LayerSchedule LayerSchedule::flat(int layers, double alpha_red, double alpha_denoiser,
                                  std::optional<double> rho) {
  const auto n = static_cast<std::size_t>(layers + 1);
  LayerSchedule s;
  s.alpha_red.assign(n, alpha_red);
  s.alpha_denoiser.assign(n, alpha_denoiser);
  if (rho) s.rho.assign(n, *rho);
  return s;
}

RedSolveReport red_cg_solve(const RedProblem& prob, int layers,
                            const std::optional<LayerSchedule>& schedule,
                            const RedCgOptions& options) {
  prob.validate();
  require(layers >= 1, ErrorKind::parameter, "layer count K must be >= 1");
  const auto n_params = static_cast<std::size_t>(layers + 1);
  if (schedule) {
    require(schedule->alpha_red.size() == n_params &&
                schedule->alpha_denoiser.size() == n_params &&
                (schedule->rho.empty() || schedule->rho.size() == n_params),
            ErrorKind::parameter,
            "per-layer parameter sequences must have length K+1 = " +
                std::to_string(n_params));
  }

  auto alpha_red_at = [&](int k) {
    return schedule ? schedule->alpha_red[static_cast<std::size_t>(k)] : prob.alpha_red;
  };
  auto denoiser_at = [&](int k) {
    Denoiser d = prob.denoiser;
    if (schedule) {
      d.alpha = schedule->alpha_denoiser[static_cast<std::size_t>(k)];
      if (!schedule->rho.empty()) d.rho = schedule->rho[static_cast<std::size_t>(k)];
    }
    return d;
  };
  const SignalSpace& space = *prob.space;
  const Vector& y = prob.y;

  RedSolveReport rep;
  rep.x = options.warm_start ? y : Vector::Zero(y.size());
  double a = alpha_red_at(0);
  auto ev = evaluate(rep.x, y, a, denoise(space, denoiser_at(0), rep.x));
  Vector grad = std::move(ev.gradient);
  double grad_sq = grad.squaredNorm();
  rep.objective_history.push_back(ev.objective);
  rep.gradient_norm_history.push_back(std::sqrt(grad_sq));
  Vector dir = -grad;

  for (int k = 1; k <= layers; ++k) {
    if (grad_sq == 0.0) {
      rep.stop_reason = StopReason::converged;
      break;
    }
    a = alpha_red_at(k);
    const Denoiser dk = denoiser_at(k);
    const Vector d_dir = denoise(space, dk, dir);
    const double denom = dir.dot(dir + a * (dir - d_dir));
    if (!std::isfinite(denom)) {
      fail(ErrorKind::divergence, "non-finite line-search denominator at layer " +
                                      std::to_string(k));
    }
    if (std::abs(denom) < 1e-14 * dir.squaredNorm()) {
      if (options.raise_on_stagnation) {
        fail(ErrorKind::stagnation,
             "line-search denominator vanished at layer " + std::to_string(k));
      }
      rep.stop_reason = StopReason::stagnated;
      break;
    }
    const double tau = -dir.dot(grad) / denom;
    rep.x += tau * dir;
    ev = evaluate(rep.x, y, a, denoise(space, dk, rep.x));
    const double next_sq = ev.gradient.squaredNorm();
    const double gamma = next_sq / grad_sq;
    dir = -ev.gradient + gamma * dir;
    grad = std::move(ev.gradient);
    grad_sq = next_sq;
    if (!rep.x.allFinite() || !dir.allFinite()) {
      fail(ErrorKind::divergence, "non-finite iterate at layer " + std::to_string(k));
    }
    rep.iterations = k;
    rep.objective_history.push_back(ev.objective);
    rep.gradient_norm_history.push_back(std::sqrt(grad_sq));
  }
  return rep;
}

double check_homogeneity(const SignalMap& denoiser, const Vector& x, double c) {
  require(c > 0.0, ErrorKind::parameter, "homogeneity scale c must be > 0");
  require(x.norm() > 0.0, ErrorKind::undefined_check, "homogeneity check needs ||x|| > 0");
  const Vector scaled_out = c * denoiser(x);
  const double den = scaled_out.norm();
  require(den > 0.0, ErrorKind::undefined_check, "homogeneity check: c D(x) is zero");
  return (denoiser(c * x) - scaled_out).norm() / den;
}

double check_passivity(const SignalMap& denoiser, const Vector& x) {
  const double xx = x.squaredNorm();
  require(xx > 0.0, ErrorKind::undefined_check, "passivity check needs ||x|| > 0");
  return denoiser(x).squaredNorm() / xx;
}

}  // namespace graphred
