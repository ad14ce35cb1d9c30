#include "graphred/io.hpp"
#include "graphred/serialize.hpp"
#include "graphred/unroll.hpp"
#include "helpers.hpp"

#include "doctest.h"

using namespace graphred;
using testutil::error_kind_of;
using testutil::rel_err;

namespace {

std::vector<TrainSample> small_dataset(bool spectral, int n_samples = 3) {
  std::vector<TrainSample> out;
  SyntheticSpec spec;
  spec.n_nodes = 40;
  for (int s = 0; s < n_samples; ++s) {
    const auto g = make_synthetic_sample(spec, static_cast<std::uint64_t>(s));
    auto rng = Rng(100 + s);
    TrainSample t;
    t.space = spectral ? SignalSpace::spectral(g.decomp) : SignalSpace::vertex(build_laplacian(g.graph));
    t.clean = g.clean;
    t.observed = add_noise(g.clean, 0.5, rng);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

TEST_CASE("softplus and its inverse") {
  for (double a : {1e-6, 0.01, 1.0, 30.0, 1000.0})
    CHECK(softplus(inverse_softplus(a)) == doctest::Approx(a).epsilon(1e-12));
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(softplus(800.0) == 800.0);
  CHECK(softplus(-800.0) >= 0.0);
  CHECK(error_kind_of([] { inverse_softplus(0.0); }) == ErrorKind::parameter);
}

TEST_CASE("trainable counts and theta layout") {
  const auto lr = UnrolledParams::flat(10, DenoiserKind::lr, 2.0, 3.0);
  const auto pnp = UnrolledParams::flat(10, DenoiserKind::pnp, 2.0, 3.0, 0.5);
  CHECK(lr.trainable_count() == 22);
  CHECK(pnp.trainable_count() == 33);
  CHECK(UnrolledParams::flat(4, DenoiserKind::pnp, 1, 1).trainable_count() == 15);
  CHECK(lr.rho.empty());

  const Vector t = pnp.to_theta();
  REQUIRE(t.size() == 33);
  CHECK(softplus(t[0]) == doctest::Approx(2.0));
  CHECK(softplus(t[11]) == doctest::Approx(3.0));
  CHECK(softplus(t[22]) == doctest::Approx(0.5));
  const auto back = UnrolledParams::from_theta(10, DenoiserKind::pnp, t);
  CHECK(back.rho[10] == doctest::Approx(0.5));
  CHECK(error_kind_of([&] { UnrolledParams::from_theta(10, DenoiserKind::lr, t); }) ==
        ErrorKind::parameter);
}

TEST_CASE("flat unrolled pass equals the scalar RED-CG solve") {
  const auto lap = build_laplacian(testutil::sensor_graph(30, 5));
  const auto space = SignalSpace::vertex(lap);
  const Vector y = testutil::ramp_signal(30);
  const auto up = UnrolledParams::flat(10, DenoiserKind::pnp, 1.5, 0.8, 2.0);
  RedProblem prob{space, y, 1.5, Denoiser{DenoiserKind::pnp, 0.8, 2.0}};
  CHECK((unrolled_forward(space, y, up) - red_cg_solve(prob, 10).x).norm() == 0.0);
}

TEST_CASE("layer-0 parameters are inert from a zero start") {
  const auto lap = build_laplacian(testutil::sensor_graph(30, 5));
  const auto space = SignalSpace::vertex(lap);
  const Vector y = testutil::ramp_signal(30);
  auto a = UnrolledParams::flat(5, DenoiserKind::lr, 1.0, 1.0);
  auto b = a;
  b.alpha_red[0] = 7.0;
  b.alpha_denoiser[0] = 0.1;
  CHECK((unrolled_forward(space, y, a) - unrolled_forward(space, y, b)).norm() == 0.0);
  // but not from a warm start
  const RedCgOptions warm{true, false};
  CHECK((unrolled_forward(space, y, a, {}, warm) - unrolled_forward(space, y, b, {}, warm)).norm() >
        0.0);
}

TEST_CASE("analytic LR gradient agrees with finite differences") {
  const auto data = small_dataset(true);
  auto p = UnrolledParams::flat(10, DenoiserKind::lr, 1.0, 2.0);
  for (int k = 0; k <= 10; ++k) p.alpha_red[k] += 0.05 * k;
  TrainConfig fd;
  fd.fd_step = 1e-6;
  TrainConfig an = fd;
  an.gradient = GradientMethod::analytic_linear;
  const auto a = training_loss_gradient(data, an, p, {}, 0);
  const auto b = training_loss_gradient(data, fd, p, {}, 0);
  CHECK(a.loss == doctest::Approx(b.loss).epsilon(1e-12));
  CHECK(rel_err(a.gradient, b.gradient) < 1e-5);
  // the initialization layer gets no gradient from a zero start
  CHECK(std::abs(a.gradient[0]) < 1e-12);
  CHECK(std::abs(a.gradient[11]) < 1e-12);
}

TEST_CASE("supervised training lowers the loss and is deterministic") {
  const auto data = small_dataset(true);
  TrainConfig cfg;
  cfg.epochs = 15;
  cfg.adam.learning_rate = 0.05;
  const auto init = UnrolledParams::flat(10, DenoiserKind::lr, 1.0, 1.0);
  const auto r1 = train(data, cfg, init);
  const auto r2 = train(data, cfg, init);
  REQUIRE(r1.loss_history.size() == 15);
  CHECK(r1.final_loss < r1.loss_history.front());
  CHECK(r1.theta == r2.theta);
  CHECK(r1.epochs_completed == 15);
}

TEST_CASE("resuming continues the exact trajectory") {
  const auto data = small_dataset(true, 2);
  TrainConfig cfg;
  cfg.mode = TrainMode::noise2noise;
  cfg.epochs = 8;
  cfg.seed = 4;
  const auto init = UnrolledParams::flat(10, DenoiserKind::lr, 0.5, 2.0);
  const auto full = train(data, cfg, init);

  cfg.epochs = 5;
  const auto first = train(data, cfg, init);
  cfg.epochs = 3;
  const auto second = train(data, cfg, first.params, {},
                            TrainResume{first.adam, first.epochs_completed, first.theta});
  CHECK(second.theta == full.theta);
  CHECK(second.epochs_completed == 8);
  CHECK(second.loss_history.back() == full.loss_history.back());
}

TEST_CASE("Noise2Noise pairs") {
  auto rng = Rng(3);
  const Vector y = Vector::Constant(1000, 2.0);
  const auto pair = make_n2n_pair(y, 0.5, 1.5, rng);
  CHECK(pair.target == y);
  CHECK(pair.sigma >= 0.5);
  CHECK(pair.sigma <= 1.5);
  const double sd = std::sqrt((pair.input - y).squaredNorm() / 1000.0);
  CHECK(sd == doctest::Approx(pair.sigma).epsilon(0.1));
}

TEST_CASE("N2N training works without clean targets; supervised needs them") {
  auto data = small_dataset(false, 2);
  for (auto& s : data) s.clean.reset();
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.mode = TrainMode::noise2noise;
  const auto init = UnrolledParams::flat(3, DenoiserKind::pnp, 1.0, 1.0, 1.0);
  CHECK(train(data, cfg, init).params.trainable_count() == 12);
  cfg.mode = TrainMode::supervised;
  CHECK(error_kind_of([&] { train(data, cfg, init); }) == ErrorKind::parameter);
}

TEST_CASE("Adam step matches the bias-corrected update") {
  auto st = AdamState::fresh(2);
  const Vector theta = Vector::Zero(2);
  Vector g(2);
  g << 1.0, -4.0;
  const Vector t1 = adam_step(theta, g, st);
  // first step moves each coordinate by about lr against the gradient sign
  CHECK(t1[0] == doctest::Approx(-0.01).epsilon(1e-6));
  CHECK(t1[1] == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(st.step == 1);
}

TEST_CASE("metrics") {
  Vector a(2), b(2);
  a << 1, 2;
  b << 1, 4;
  CHECK(mse(a, b) == 2.0);
  CHECK(rmse(a, b) == doctest::Approx(std::sqrt(2.0)));
  Matrix m = Matrix::Zero(2, 2), n = Matrix::Ones(2, 2);
  CHECK(rmse(m, n) == 1.0);
}

TEST_CASE("learned-parameter files round trip including training state") {
  const auto data = small_dataset(true, 1);
  TrainConfig cfg;
  cfg.epochs = 2;
  const auto res = train(data, cfg, UnrolledParams::flat(10, DenoiserKind::lr, 1.0, 1.0));
  testutil::TempDir dir("learned");
  const auto path = (dir.path() / "p.json").string();
  write_text_file(path, learned_params_json(res, "red_lr_dau", 20, "supervised").dump(2));
  const auto file = read_learned_params(path);
  CHECK(file.method == "red_lr_dau");
  CHECK(file.sigma == 20);
  CHECK(file.params.alpha_red == res.params.alpha_red);
  REQUIRE(file.resume.has_value());
  CHECK(file.resume->theta == res.theta);
  CHECK(file.resume->adam.m == res.adam.m);
  CHECK(file.resume->epochs_completed == 2);

  const auto j = to_json(res.params);
  CHECK(j["trainable_parameters"] == 22);
  CHECK(j["alpha_red_layers"].size() == 11);
  CHECK(!j.contains("pnp_rho_layers"));
  CHECK(unrolled_params_from_json(j).alpha_denoiser == res.params.alpha_denoiser);
}
