#include "graphred/spectral.hpp"

#include "graphred/error.hpp"

#include <cstdio>
#include <fstream>

namespace graphred {

FilterResponse h_lr(const Vector& lambdas, double alpha_lr) {
  require(alpha_lr > 0.0, ErrorKind::parameter, "h_lr: alpha_lr must be > 0");
  return {lambdas, alpha_lr * lambdas, "h_lr"};
}

FilterResponse h_red(const Vector& lambdas, double alpha_red, double alpha_lr) {
  require(alpha_red > 0.0 && alpha_lr > 0.0, ErrorKind::parameter,
          "h_red: alpha_red and alpha_lr must be > 0");
  const Eigen::ArrayXd hl = alpha_lr * lambdas.array();
  return {lambdas, (alpha_red * hl / (1.0 + hl)).matrix(), "h_red"};
}

ResponseTable compare_responses(const Vector& lambdas, double alpha_red, double alpha_lr) {
  ResponseTable t;
  t.lambda = lambdas;
  t.h_lr = h_lr(lambdas, alpha_lr).response;
  t.h_red = h_red(lambdas, alpha_red, alpha_lr).response;
  t.alpha_red = alpha_red;
  t.alpha_lr = alpha_lr;
  return t;
}

ResponseTable compare_responses(const SpectralDecomp& decomp, double alpha_red,
                                double alpha_lr) {
  return compare_responses(decomp.eigenvalues, alpha_red, alpha_lr);
}

Vector lambda_grid(double lambda_max, Index n) {
  require(n >= 2 && lambda_max > 0.0, ErrorKind::parameter,
          "lambda grid needs n >= 2 and lambda_max > 0");
  return Vector::LinSpaced(n, 0.0, lambda_max);
}

Vector apply_spectral_filter(const SpectralDecomp& decomp, const Vector& response,
                             const Vector& x) {
  require(response.size() == decomp.size() && x.size() == decomp.size(),
          ErrorKind::dimension, "spectral filter: dimension mismatch");
  return decomp.basis * (response.asDiagonal() * (decomp.basis.transpose() * x));
}

void write_response_csv(std::ostream& out, const ResponseTable& table) {
  out << "lambda,h_lr,h_red\n";
  char buf[96];
  for (Index i = 0; i < table.lambda.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", table.lambda(i), table.h_lr(i),
                  table.h_red(i));
    out << buf;
  }
}

void write_response_csv(const std::string& path, const ResponseTable& table) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path);
  write_response_csv(out, table);
}

}  // namespace graphred
