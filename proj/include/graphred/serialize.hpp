#pragma once

// JSON and CSV forms of solver reports and learned parameters.

#include "graphred/red.hpp"
#include "graphred/unroll.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace graphred {

using Json = nlohmann::ordered_json;

Json to_json(const RedSolveReport& report);
Json to_json(const Vector& v);
Vector vector_from_json(const Json& j);

/// {K, denoiser_kind, alpha_red_layers, alpha_denoiser_layers,
///  pnp_rho_layers?, trainable_parameters}
Json to_json(const UnrolledParams& params);
UnrolledParams unrolled_params_from_json(const Json& j);

/// Learned-parameter file: the parameters plus enough training state
/// (theta, Adam moments, epoch counter) to resume bit-exactly.
Json learned_params_json(const TrainResult& result, const std::string& method, double sigma,
                         const std::string& mode);
struct LearnedParamsFile {
  UnrolledParams params;
  std::string method;
  double sigma = 0.0;
  std::optional<TrainResume> resume;
};
LearnedParamsFile read_learned_params(const std::string& path);

/// `epoch,loss` rows.
std::string loss_history_csv(const std::vector<double>& history, int first_epoch);

/// 17-significant-digit formatting used for every floating value on disk.
std::string format_double(double v);
/// Compact label for sigma in file names: 10 -> "10", 12.5 -> "12.5".
std::string sigma_label(double sigma);

}  // namespace graphred
