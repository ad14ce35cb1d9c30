#include "graphred/unroll.hpp"

#include "graphred/error.hpp"
#include "graphred/parallel.hpp"

#include <cmath>

namespace graphred {

double softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

double inverse_softplus(double a) {
  require(a > 0.0, ErrorKind::parameter, "inverse_softplus needs a > 0");
  return a > 20.0 ? a + std::log(-std::expm1(-a)) : std::log(std::expm1(a));
}

namespace {

double sigmoid(double t) {
  return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

}  // namespace

UnrolledParams UnrolledParams::flat(int layers, DenoiserKind kind, double alpha_red,
                                    double alpha_denoiser, double rho) {
  UnrolledParams p;
  p.layers = layers;
  p.kind = kind;
  const auto n = static_cast<std::size_t>(layers + 1);
  p.alpha_red.assign(n, alpha_red);
  p.alpha_denoiser.assign(n, alpha_denoiser);
  if (kind == DenoiserKind::pnp) p.rho.assign(n, rho);
  p.validate();
  return p;
}

Index UnrolledParams::trainable_count() const {
  return static_cast<Index>(alpha_red.size() + alpha_denoiser.size() + rho.size());
}

void UnrolledParams::validate() const {
  require(layers >= 1, ErrorKind::parameter, "unrolled layer count K must be >= 1");
  const auto n = static_cast<std::size_t>(layers + 1);
  require(alpha_red.size() == n && alpha_denoiser.size() == n, ErrorKind::parameter,
          "alpha sequences must have K+1 = " + std::to_string(n) + " entries");
  if (kind == DenoiserKind::pnp) {
    require(rho.size() == n, ErrorKind::parameter,
            "PnP rho sequence must have K+1 = " + std::to_string(n) + " entries");
  } else {
    require(rho.empty(), ErrorKind::parameter, "LR parameters carry no rho sequence");
  }
  auto positive = [](const std::vector<double>& v) {
    for (double a : v)
      if (!(a > 0.0) || !std::isfinite(a)) return false;
    return true;
  };
  require(positive(alpha_red) && positive(alpha_denoiser) && positive(rho),
          ErrorKind::parameter, "unrolled parameters must be finite and > 0");
}

LayerSchedule UnrolledParams::schedule() const {
  return {alpha_red, alpha_denoiser, rho};
}

Vector UnrolledParams::to_theta() const {
  Vector theta(trainable_count());
  Index i = 0;
  for (const auto* seq : {&alpha_red, &alpha_denoiser, &rho})
    for (double a : *seq) theta(i++) = inverse_softplus(a);
  return theta;
}

UnrolledParams UnrolledParams::from_theta(int layers, DenoiserKind kind, const Vector& theta) {
  const Index n = layers + 1;
  const Index expected = (kind == DenoiserKind::pnp ? 3 : 2) * n;
  require(theta.size() == expected, ErrorKind::parameter,
          "theta has " + std::to_string(theta.size()) + " entries, expected " +
              std::to_string(expected));
  UnrolledParams p;
  p.layers = layers;
  p.kind = kind;
  auto decode = [&](Index offset, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = softplus(theta(offset + k));
  };
  decode(0, p.alpha_red);
  decode(n, p.alpha_denoiser);
  if (kind == DenoiserKind::pnp) decode(2 * n, p.rho);
  return p;
}

Vector unrolled_forward(std::shared_ptr<const SignalSpace> space, const Vector& y,
                        const UnrolledParams& params, const Denoiser& base,
                        const RedCgOptions& options) {
  params.validate();
  RedProblem prob{std::move(space), y, params.alpha_red.front(), base};
  prob.denoiser.kind = params.kind;
  prob.denoiser.alpha = params.alpha_denoiser.front();
  if (!params.rho.empty()) prob.denoiser.rho = params.rho.front();
  return red_cg_solve(prob, params.layers, params.schedule(), options).x;
}

double mse(const Vector& x_hat, const Vector& x_star) {
  require(x_hat.size() == x_star.size() && x_hat.size() > 0, ErrorKind::dimension,
          "mse: length mismatch");
  return (x_hat - x_star).squaredNorm() / static_cast<double>(x_hat.size());
}

double rmse(const Vector& x_hat, const Vector& x_star) { return std::sqrt(mse(x_hat, x_star)); }

double rmse(const Matrix& x_hat, const Matrix& x_star) {
  require(x_hat.rows() == x_star.rows() && x_hat.cols() == x_star.cols() && x_hat.size() > 0,
          ErrorKind::dimension, "rmse: shape mismatch");
  return std::sqrt((x_hat - x_star).squaredNorm() / static_cast<double>(x_hat.size()));
}

N2NPair make_n2n_pair(const Vector& y, double sigma_lo, double sigma_hi, Rng& rng) {
  require(sigma_lo >= 0.0 && sigma_hi >= sigma_lo, ErrorKind::parameter,
          "N2N sigma range must satisfy 0 <= lo <= hi");
  N2NPair pair;
  pair.sigma = rng.uniform(sigma_lo, sigma_hi);
  pair.input = y;
  if (pair.sigma > 0.0)
    for (Index i = 0; i < y.size(); ++i) pair.input(i) += pair.sigma * rng.normal();
  pair.target = y;
  return pair;
}

Vector adam_step(const Vector& theta, const Vector& grad, AdamState& state,
                 const AdamOptions& opts) {
  require(grad.size() == theta.size(), ErrorKind::dimension, "adam: gradient size mismatch");
  if (state.m.size() == 0) state = AdamState::fresh(theta.size());
  require(state.m.size() == theta.size() && state.v.size() == theta.size(),
          ErrorKind::dimension, "adam: state size mismatch");
  ++state.step;
  state.m = opts.beta1 * state.m + (1.0 - opts.beta1) * grad;
  state.v = opts.beta2 * state.v + (1.0 - opts.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(opts.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(opts.beta2, static_cast<double>(state.step));
  const Eigen::ArrayXd m_hat = state.m.array() / c1;
  const Eigen::ArrayXd v_hat = state.v.array() / c2;
  return theta - (opts.learning_rate * m_hat / (v_hat.sqrt() + opts.epsilon)).matrix();
}

void TrainConfig::validate() const {
  require(adam.learning_rate > 0.0, ErrorKind::parameter, "learning rate must be > 0");
  require(epochs >= 0, ErrorKind::parameter, "epochs must be >= 0");
  require(n2n_sigma_lo >= 0.0 && n2n_sigma_hi >= n2n_sigma_lo, ErrorKind::parameter,
          "N2N sigma range must satisfy 0 <= lo <= hi");
  require(fd_step > 0.0, ErrorKind::parameter, "finite-difference step must be > 0");
}

namespace {

// Inputs and targets for one epoch, in each sample's space coordinates.
struct EpochData {
  std::vector<Vector> inputs;
  std::vector<Vector> targets;
};

EpochData epoch_data(const std::vector<TrainSample>& dataset, const TrainConfig& config,
                     int epoch) {
  EpochData d;
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const auto& sample = dataset[s];
    if (config.mode == TrainMode::supervised) {
      require(sample.clean.has_value(), ErrorKind::parameter,
              "supervised training needs clean targets (sample " + std::to_string(s) + ")");
      d.inputs.push_back(sample.space->encode(sample.observed));
      d.targets.push_back(sample.space->encode(*sample.clean));
    } else {
      const double peak = sample.observed.cwiseAbs().maxCoeff();
      auto rng = Rng::stream(config.seed, StreamPurpose::n2n_noise,
                             {static_cast<std::uint64_t>(epoch), s});
      auto pair = make_n2n_pair(sample.observed, config.n2n_sigma_lo * peak,
                                config.n2n_sigma_hi * peak, rng);
      d.inputs.push_back(sample.space->encode(pair.input));
      d.targets.push_back(sample.space->encode(pair.target));
    }
  }
  return d;
}

double mean_loss(const std::vector<TrainSample>& dataset, const EpochData& data,
                 const UnrolledParams& params, const Denoiser& base,
                 const RedCgOptions& options) {
  double total = 0.0;
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const Vector out = unrolled_forward(dataset[s].space, data.inputs[s], params, base, options);
    total += mse(out, data.targets[s]);
  }
  return total / static_cast<double>(dataset.size());
}

LossAndGradient fd_loss_gradient(const std::vector<TrainSample>& dataset,
                                 const EpochData& data, const TrainConfig& config,
                                 const UnrolledParams& shape, const Vector& theta,
                                 const Denoiser& base) {
  auto decode = [&](const Vector& t) {
    return UnrolledParams::from_theta(shape.layers, shape.kind, t);
  };
  LossAndGradient out;
  out.loss = mean_loss(dataset, data, decode(theta), base, config.solver);
  out.gradient = Vector::Zero(theta.size());
  const double h = config.fd_step;
  parallel_for(static_cast<std::size_t>(theta.size()), config.threads, [&](std::size_t p) {
    Vector plus = theta, minus = theta;
    plus(static_cast<Index>(p)) += h;
    minus(static_cast<Index>(p)) -= h;
    const double lp = mean_loss(dataset, data, decode(plus), base, config.solver);
    const double lm = mean_loss(dataset, data, decode(minus), base, config.solver);
    out.gradient(static_cast<Index>(p)) = (lp - lm) / (2.0 * h);
  });
  return out;
}

LossAndGradient analytic_loss_gradient(const std::vector<TrainSample>& dataset,
                                       const EpochData& data, const TrainConfig& config,
                                       const UnrolledParams& shape, const Vector& theta) {
  require(shape.kind == DenoiserKind::lr, ErrorKind::parameter,
          "analytic gradients are available only for the LR denoiser");
  const auto params = UnrolledParams::from_theta(shape.layers, shape.kind, theta);
  LossAndGradient out;
  out.gradient = Vector::Zero(theta.size());
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    require(dataset[s].space->is_spectral(), ErrorKind::parameter,
            "analytic gradients need samples in a spectral signal space");
    const auto lg = unrolled_lr_loss_gradient(dataset[s].space->decomposition().eigenvalues,
                                              data.inputs[s], data.targets[s], params,
                                              config.solver);
    out.loss += lg.loss;
    out.gradient += lg.gradient;
  }
  const double inv = 1.0 / static_cast<double>(dataset.size());
  out.loss *= inv;
  out.gradient *= inv;
  return out;
}

LossAndGradient loss_gradient_at(const std::vector<TrainSample>& dataset,
                                 const TrainConfig& config, const UnrolledParams& shape,
                                 const Vector& theta, const Denoiser& base, int epoch) {
  require(!dataset.empty(), ErrorKind::parameter, "training dataset is empty");
  const EpochData data = epoch_data(dataset, config, epoch);
  if (config.gradient == GradientMethod::analytic_linear) {
    return analytic_loss_gradient(dataset, data, config, shape, theta);
  }
  return fd_loss_gradient(dataset, data, config, shape, theta, base);
}

}  // namespace

LossAndGradient training_loss_gradient(const std::vector<TrainSample>& dataset,
                                       const TrainConfig& config,
                                       const UnrolledParams& params, const Denoiser& base,
                                       int epoch) {
  params.validate();
  return loss_gradient_at(dataset, config, params, params.to_theta(), base, epoch);
}

TrainResult train(const std::vector<TrainSample>& dataset, const TrainConfig& config,
                  const UnrolledParams& init, const Denoiser& base,
                  const std::optional<TrainResume>& resume) {
  config.validate();
  init.validate();
  require(!dataset.empty(), ErrorKind::parameter, "training dataset is empty");

  TrainResult res;
  res.adam = resume ? resume->adam : AdamState::fresh(init.trainable_count());
  const int first_epoch = resume ? resume->epochs_completed : 0;
  Vector theta = init.to_theta();
  if (resume && resume->theta.size() > 0) {
    require(resume->theta.size() == theta.size(), ErrorKind::parameter,
            "resume theta has the wrong length");
    theta = resume->theta;
  }

  auto evaluate = [&](int epoch) {
    try {
      auto lg = loss_gradient_at(dataset, config, init, theta, base, epoch);
      if (!std::isfinite(lg.loss) || !lg.gradient.allFinite()) {
        fail(ErrorKind::numerical_failure,
             "training failed: non-finite loss or gradient at epoch " + std::to_string(epoch));
      }
      return lg;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::parameter || e.kind() == ErrorKind::dimension) throw;
      fail(ErrorKind::numerical_failure,
           "training failed at epoch " + std::to_string(epoch) + ": " + e.what());
    }
  };

  for (int e = 0; e < config.epochs; ++e) {
    const int epoch = first_epoch + e;
    const auto lg = evaluate(epoch);
    res.loss_history.push_back(lg.loss);
    theta = adam_step(theta, lg.gradient, res.adam, config.adam);
  }
  res.params = UnrolledParams::from_theta(init.layers, init.kind, theta);
  res.theta = theta;
  res.epochs_completed = first_epoch + config.epochs;
  res.final_loss = evaluate(res.epochs_completed).loss;
  return res;
}

LossAndGradient unrolled_lr_loss_gradient(const Vector& eigenvalues, const Vector& y_hat,
                                          const Vector& target_hat,
                                          const UnrolledParams& params,
                                          const RedCgOptions& options) {
  params.validate();
  require(params.kind == DenoiserKind::lr, ErrorKind::parameter,
          "analytic gradient needs the LR denoiser");
  const Index n = eigenvalues.size();
  require(y_hat.size() == n && target_hat.size() == n, ErrorKind::dimension,
          "analytic gradient: dimension mismatch");
  const int K = params.layers;
  const Index P = params.trainable_count();
  const Eigen::ArrayXd lam = eigenvalues.array();

  // Per-layer diagonal RED operator g = 1 + r (1 - d), d = 1 / (1 + a lam),
  // with its partials in r and a.
  struct Layer {
    Eigen::ArrayXd g, dg_dr, dg_da;
    Index col_r, col_a;
  };
  auto layer = [&](int k) {
    const double r = params.alpha_red[static_cast<std::size_t>(k)];
    const double a = params.alpha_denoiser[static_cast<std::size_t>(k)];
    const Eigen::ArrayXd d = 1.0 / (1.0 + a * lam);
    return Layer{1.0 + r * (1.0 - d), 1.0 - d, r * lam * d * d, k, (K + 1) + k};
  };
  // J of g o v given J of v.
  auto apply = [](const Layer& L, const Vector& v, const Matrix& jv, Vector& out, Matrix& jout) {
    out = (L.g * v.array()).matrix();
    jout = L.g.matrix().asDiagonal() * jv;
    jout.col(L.col_r) += (L.dg_dr * v.array()).matrix();
    jout.col(L.col_a) += (L.dg_da * v.array()).matrix();
  };

  Vector x = options.warm_start ? y_hat : Vector::Zero(n);
  Matrix jx = Matrix::Zero(n, P);
  Vector gx;
  Matrix jgx;
  apply(layer(0), x, jx, gx, jgx);
  Vector grad = gx - y_hat;
  Matrix jgrad = jgx;
  double gg = grad.squaredNorm();
  Eigen::RowVectorXd dgg = 2.0 * grad.transpose() * jgrad;
  Vector dir = -grad;
  Matrix jdir = -jgrad;

  for (int k = 1; k <= K; ++k) {
    if (gg == 0.0) break;
    const Layer L = layer(k);
    Vector gd;
    Matrix jgd;
    apply(L, dir, jdir, gd, jgd);
    const double den = dir.dot(gd);
    if (!std::isfinite(den)) fail(ErrorKind::divergence, "non-finite denominator");
    if (std::abs(den) < 1e-14 * dir.squaredNorm()) {
      if (options.raise_on_stagnation) {
        fail(ErrorKind::stagnation, "line-search denominator vanished at layer " +
                                        std::to_string(k));
      }
      break;
    }
    const Eigen::RowVectorXd dden = dir.transpose() * jgd + gd.transpose() * jdir;
    const double num = dir.dot(grad);
    const Eigen::RowVectorXd dnum = dir.transpose() * jgrad + grad.transpose() * jdir;
    const double tau = -num / den;
    const Eigen::RowVectorXd dtau = -(dnum * den - num * dden) / (den * den);

    jx += dir * dtau + tau * jdir;
    x += tau * dir;

    apply(L, x, jx, gx, jgx);
    grad = gx - y_hat;
    jgrad = jgx;
    const double gg_next = grad.squaredNorm();
    const Eigen::RowVectorXd dgg_next = 2.0 * grad.transpose() * jgrad;
    const double gamma = gg_next / gg;
    const Eigen::RowVectorXd dgamma = (dgg_next * gg - gg_next * dgg) / (gg * gg);

    jdir = -jgrad + dir * dgamma + gamma * jdir;
    dir = -grad + gamma * dir;
    gg = gg_next;
    dgg = dgg_next;
  }

  LossAndGradient out;
  const Vector err = x - target_hat;
  out.loss = err.squaredNorm() / static_cast<double>(n);
  const Vector dloss_dalpha = (2.0 / static_cast<double>(n)) * (jx.transpose() * err);
  const Vector theta = params.to_theta();
  out.gradient = dloss_dalpha;
  for (Index p = 0; p < P; ++p) out.gradient(p) *= sigmoid(theta(p));
  return out;
}

}  // namespace graphred
