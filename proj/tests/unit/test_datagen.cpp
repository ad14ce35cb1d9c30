#include "graphred/datagen.hpp"
#include "helpers.hpp"

#include "doctest.h"

#include <set>

using namespace graphred;
using testutil::error_kind_of;

TEST_CASE("sensor points lie in the square and come from the stream in (x, y) order") {
  auto a = Rng(5);
  auto b = Rng(5);
  const auto pts = generate_sensor_points(200, 50.0, a);
  CHECK(pts.coords().minCoeff() >= 0.0);
  CHECK(pts.coords().maxCoeff() < 50.0);
  CHECK(pts.coords()(0, 0) == 50.0 * b.uniform());
  CHECK(pts.coords()(0, 1) == 50.0 * b.uniform());
}

TEST_CASE("bandlimited signal lives in the first n_band eigenvectors") {
  SyntheticSpec spec;
  spec.n_nodes = 60;
  const auto s = make_synthetic_sample(spec, 3);
  const Vector c = gft(s.decomp, s.clean);
  CHECK(c.tail(57).norm() < 1e-10);
  for (int k = 1; k <= 3; ++k)
    CHECK(c[k - 1] == doctest::Approx(std::sin(k * M_PI / 3) + 2.0));
  CHECK(s.graph.max_weight() == 1.0);
  // distinct ids give distinct graphs, equal ids identical ones
  const auto again = make_synthetic_sample(spec, 3);
  CHECK(again.clean == s.clean);
  CHECK(make_synthetic_sample(spec, 4).points.coords() != s.points.coords());
}

TEST_CASE("noise has the requested level") {
  auto rng = Rng(1);
  const Vector x = Vector::Zero(20000);
  const Vector y = add_noise(x, 3.0, rng);
  const double sd = std::sqrt(y.squaredNorm() / 20000.0);
  CHECK(sd == doctest::Approx(3.0).epsilon(0.02));
  CHECK(std::abs(y.mean()) < 0.1);
  Matrix m = Matrix::Zero(4, 2);
  auto r1 = Rng(2), r2 = Rng(2);
  const Matrix nm = add_noise(m, 1.0, r1);
  // column by column
  CHECK(nm(0, 1) == add_noise(Vector(Vector::Zero(5)), 1.0, r2)[4]);
  CHECK(error_kind_of([&] { add_noise(x, -1.0, rng); }) == ErrorKind::parameter);
}

TEST_CASE("farthest point sampling") {
  Matrix p(5, 1);
  p << 0, 1, 2, 3, 10;
  const auto idx = fps(PointSet(p), 3, 0);
  REQUIRE(idx.size() == 3);
  CHECK(idx[0] == 0);
  CHECK(idx[1] == 4);
  CHECK(idx[2] == 3);
  const auto all = fps(PointSet(p), 5, 1);
  CHECK(std::set<Index>(all.begin(), all.end()).size() == 5);
  CHECK(error_kind_of([&] { fps(PointSet(p), 6, 0); }) == ErrorKind::parameter);

  Matrix q(4, 1);
  q << 0, -1, 1, 0.5;
  CHECK(fps(PointSet(q), 2, 0)[1] == 1);  // -1 and 1 tie: lower index
}
