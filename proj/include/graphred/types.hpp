#pragma once

#include <Eigen/Dense>

#include <functional>

namespace graphred {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A signal-to-signal map, e.g. a configured graph denoiser.
using SignalMap = std::function<Vector(const Vector&)>;

}  // namespace graphred
