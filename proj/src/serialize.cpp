#include "graphred/serialize.hpp"

#include "graphred/error.hpp"
#include "graphred/io.hpp"

#include <cstdio>
#include <sstream>

namespace graphred {

Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vector vector_from_json(const Json& j) {
  require(j.is_array(), ErrorKind::parse, "expected a JSON array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    require(j[i].is_number(), ErrorKind::parse, "expected a JSON array of numbers");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

Json to_json(const RedSolveReport& report) {
  Json j;
  j["iterations"] = report.iterations;
  j["stop_reason"] = to_string(report.stop_reason);
  j["gradient_norm_history"] = report.gradient_norm_history;
  j["objective_history"] = report.objective_history;
  j["x"] = to_json(report.x);
  return j;
}

Json to_json(const UnrolledParams& params) {
  Json j;
  j["K"] = params.layers;
  j["denoiser_kind"] = to_string(params.kind);
  j["alpha_red_layers"] = params.alpha_red;
  j["alpha_denoiser_layers"] = params.alpha_denoiser;
  if (params.kind == DenoiserKind::pnp) j["pnp_rho_layers"] = params.rho;
  j["trainable_parameters"] = params.trainable_count();
  return j;
}

UnrolledParams unrolled_params_from_json(const Json& j) {
  try {
    UnrolledParams p;
    p.layers = j.at("K").get<int>();
    p.kind = parse_denoiser_kind(j.at("denoiser_kind").get<std::string>());
    p.alpha_red = j.at("alpha_red_layers").get<std::vector<double>>();
    p.alpha_denoiser = j.at("alpha_denoiser_layers").get<std::vector<double>>();
    if (j.contains("pnp_rho_layers")) p.rho = j.at("pnp_rho_layers").get<std::vector<double>>();
    p.validate();
    return p;
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse, std::string("bad unrolled-parameter JSON: ") + e.what());
  }
}

Json learned_params_json(const TrainResult& result, const std::string& method, double sigma,
                         const std::string& mode) {
  Json j = to_json(result.params);
  j["method"] = method;
  j["sigma"] = sigma;
  Json t;
  t["mode"] = mode;
  t["epochs_completed"] = result.epochs_completed;
  t["final_loss"] = result.final_loss;
  t["theta"] = to_json(result.theta);
  t["adam"] = {{"step", result.adam.step},
               {"m", to_json(result.adam.m)},
               {"v", to_json(result.adam.v)}};
  j["training"] = std::move(t);
  return j;
}

LearnedParamsFile read_learned_params(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::parse, path + ": " + e.what());
  }
  LearnedParamsFile f;
  f.params = unrolled_params_from_json(j);
  f.method = j.value("method", std::string{});
  f.sigma = j.value("sigma", 0.0);
  if (j.contains("training")) {
    try {
      const auto& t = j.at("training");
      TrainResume r;
      r.epochs_completed = t.at("epochs_completed").get<int>();
      r.theta = vector_from_json(t.at("theta"));
      r.adam.step = t.at("adam").at("step").get<long>();
      r.adam.m = vector_from_json(t.at("adam").at("m"));
      r.adam.v = vector_from_json(t.at("adam").at("v"));
      f.resume = std::move(r);
    } catch (const Json::exception& e) {
      fail(ErrorKind::parse, path + ": bad training state: " + e.what());
    }
  }
  return f;
}

std::string loss_history_csv(const std::vector<double>& history, int first_epoch) {
  std::ostringstream out;
  out << "epoch,loss\n";
  for (std::size_t i = 0; i < history.size(); ++i)
    out << (first_epoch + static_cast<int>(i)) << ',' << format_double(history[i]) << '\n';
  return out.str();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sigma_label(double sigma) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", sigma);
  return buf;
}

}  // namespace graphred
