#pragma once

// Frequency responses of the LR and RED regularizer gradients, viewed as
// graph filters over the Laplacian spectrum:
//
//   h_lr(l)  = a_lr l
//   h_red(l) = a_red a_lr l / (1 + a_lr l)
//
// h_lr grows without bound; h_red saturates at a_red.

#include "graphred/graph.hpp"
#include "graphred/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace graphred {

struct FilterResponse {
  Vector eigenvalues;
  Vector response;
  std::string label;
};

FilterResponse h_lr(const Vector& lambdas, double alpha_lr);
FilterResponse h_red(const Vector& lambdas, double alpha_red, double alpha_lr);

struct ResponseTable {
  Vector lambda;
  Vector h_lr;
  Vector h_red;
  double alpha_red = 0.0;
  double alpha_lr = 0.0;
};

ResponseTable compare_responses(const Vector& lambdas, double alpha_red, double alpha_lr);
ResponseTable compare_responses(const SpectralDecomp& decomp, double alpha_red, double alpha_lr);

/// n evenly spaced values on [0, lambda_max], for documentation plots.
Vector lambda_grid(double lambda_max, Index n);

/// U diag(response) U^T x.
Vector apply_spectral_filter(const SpectralDecomp& decomp, const Vector& response,
                             const Vector& x);

/// Header `lambda,h_lr,h_red`, one row per eigenvalue.
void write_response_csv(std::ostream& out, const ResponseTable& table);
void write_response_csv(const std::string& path, const ResponseTable& table);

}  // namespace graphred
