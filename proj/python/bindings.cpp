// Python module graphred._core: graphs, denoisers, RED solvers, spectra,
// synthetic data and the command-line entry point.

#include "graphred/cli.hpp"
#include "graphred/construct.hpp"
#include "graphred/datagen.hpp"
#include "graphred/denoisers.hpp"
#include "graphred/error.hpp"
#include "graphred/red.hpp"
#include "graphred/spectral.hpp"
#include "graphred/unroll.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace graphred;

namespace {

Denoiser make_config(const std::string& kind, double alpha, double rho, int pnp_iters,
                     bool paper_literal) {
  Denoiser d;
  d.kind = parse_denoiser_kind(kind);
  d.alpha = alpha;
  d.rho = rho;
  d.pnp_iters = pnp_iters;
  d.paper_literal_x_update = paper_literal;
  d.validate();
  return d;
}

std::shared_ptr<const SignalSpace> vertex_space(const Graph& g) {
  return SignalSpace::vertex(build_laplacian(g));
}

RedProblem make_problem(const Graph& g, const Vector& y, double alpha_red, const std::string& kind,
                        double alpha, double rho, int pnp_iters, bool paper_literal) {
  RedProblem p{vertex_space(g), y, alpha_red, make_config(kind, alpha, rho, pnp_iters, paper_literal)};
  p.validate();
  return p;
}

py::dict report_dict(const RedSolveReport& r) {
  py::dict d;
  d["x"] = r.x;
  d["iterations"] = r.iterations;
  d["gradient_norm_history"] = r.gradient_norm_history;
  d["objective_history"] = r.objective_history;
  d["stop_reason"] = to_string(r.stop_reason);
  return d;
}

#define DENOISER_ARGS                                                                      \
  py::arg("denoiser") = "lr", py::arg("alpha") = 1.0, py::arg("rho") = 1.0,                \
      py::arg("pnp_iters") = 10, py::arg("paper_literal_x_update") = false

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graph-signal denoising with regularization by denoising";

  static py::exception<Error> py_error(m, "GraphRedError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(py_error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<Graph>(m, "Graph")
      .def(py::init<Matrix>(), py::arg("adjacency"))
      .def_static(
          "from_edges",
          [](Index n, const std::vector<std::tuple<Index, Index, double>>& edges) {
            std::vector<Edge> e;
            for (const auto& [i, j, w] : edges) e.push_back({i, j, w});
            return Graph::from_edges(n, e);
          },
          py::arg("n_nodes"), py::arg("edges"))
      .def_property_readonly("n_nodes", &Graph::n_nodes)
      .def_property_readonly("n_edges", &Graph::n_edges)
      .def_property_readonly("adjacency", &Graph::adjacency)
      .def("edges",
           [](const Graph& g) {
             std::vector<std::tuple<Index, Index, double>> out;
             for (const auto& e : g.edges()) out.emplace_back(e.i, e.j, e.weight);
             return out;
           })
      .def("laplacian", [](const Graph& g) { return build_laplacian(g).matrix(); })
      .def(
          "spectrum",
          [](const Graph& g) {
            auto d = eigendecompose(build_laplacian(g));
            return py::make_tuple(d.eigenvalues, d.basis);
          },
          "(eigenvalues ascending, orthonormal basis U with eigenvectors as columns)")
      .def("quadratic_form",
           [](const Graph& g, const Vector& x) { return quadratic_form(build_laplacian(g), x); })
      .def("to_edge_list", [](const Graph& g) {
        std::ostringstream out;
        write_edge_list(out, g);
        return out.str();
      });

  m.def(
      "knn_graph",
      [](const Matrix& points, Index k, std::optional<Matrix> features) {
        PointSet p(points);
        return features ? knn_graph(p, k, *features) : knn_graph(p, k);
      },
      py::arg("points"), py::arg("k"), py::arg("features") = py::none(),
      "kNN graph with inverse-distance weights (union symmetrization).");
  m.def("normalize_weights", &normalize_weights, py::arg("graph"));

  m.def(
      "gft", [](const Matrix& U, const Vector& x) { return gft({U, Vector::Zero(U.cols())}, x); },
      py::arg("basis"), py::arg("x"));
  m.def(
      "igft", [](const Matrix& U, const Vector& xh) { return igft({U, Vector::Zero(U.cols())}, xh); },
      py::arg("basis"), py::arg("x_hat"));

  m.def(
      "lr_denoise",
      [](const Graph& g, const Vector& y, double alpha, const std::string& solver, double tol,
         int max_iters) -> Vector {
        const auto lap = build_laplacian(g);
        if (solver == "direct") return lr_denoise(lap, y, alpha);
        if (solver == "cg") return lr_denoise_cg(lap, y, alpha, tol, max_iters).x;
        fail(ErrorKind::parameter, "solver must be 'direct' or 'cg'");
      },
      py::arg("graph"), py::arg("y"), py::arg("alpha"), py::arg("solver") = "direct",
      py::arg("tol") = 1e-10, py::arg("max_iters") = 10000);
  m.def(
      "pnp_admm_denoise",
      [](const Graph& g, const Vector& y, double alpha, double rho, int iters, bool literal) {
        return pnp_admm_denoise(build_laplacian(g), y, alpha, rho, iters, literal);
      },
      py::arg("graph"), py::arg("y"), py::arg("alpha"), py::arg("rho"), py::arg("iters") = 10,
      py::arg("paper_literal_x_update") = false);
  m.def(
      "denoise",
      [](const Graph& g, const Vector& y, const std::string& kind, double alpha, double rho,
         int pnp_iters, bool literal) {
        return denoise(*vertex_space(g), make_config(kind, alpha, rho, pnp_iters, literal), y);
      },
      py::arg("graph"), py::arg("y"), DENOISER_ARGS);

  m.def(
      "red_objective",
      [](const Graph& g, const Vector& y, const Vector& x, double alpha_red, const std::string& kind,
         double alpha, double rho, int pnp_iters, bool literal) {
        return red_objective(make_problem(g, y, alpha_red, kind, alpha, rho, pnp_iters, literal), x);
      },
      py::arg("graph"), py::arg("y"), py::arg("x"), py::arg("alpha_red"), DENOISER_ARGS);
  m.def(
      "red_gradient",
      [](const Graph& g, const Vector& y, const Vector& x, double alpha_red, const std::string& kind,
         double alpha, double rho, int pnp_iters, bool literal) {
        return red_gradient(make_problem(g, y, alpha_red, kind, alpha, rho, pnp_iters, literal), x);
      },
      py::arg("graph"), py::arg("y"), py::arg("x"), py::arg("alpha_red"), DENOISER_ARGS);
  m.def(
      "red_cg_solve",
      [](const Graph& g, const Vector& y, double alpha_red, int layers, bool warm_start,
         const std::string& kind, double alpha, double rho, int pnp_iters, bool literal) {
        const auto p = make_problem(g, y, alpha_red, kind, alpha, rho, pnp_iters, literal);
        return report_dict(red_cg_solve(p, layers, std::nullopt, {warm_start, false}));
      },
      py::arg("graph"), py::arg("y"), py::arg("alpha_red"), py::arg("layers") = 10,
      py::arg("warm_start") = false, DENOISER_ARGS);
  m.def(
      "red_gradient_descent",
      [](const Graph& g, const Vector& y, double alpha_red, double step, int iters,
         const std::string& kind, double alpha, double rho, int pnp_iters, bool literal) {
        const auto p = make_problem(g, y, alpha_red, kind, alpha, rho, pnp_iters, literal);
        return report_dict(red_gradient_descent(p, step, iters));
      },
      py::arg("graph"), py::arg("y"), py::arg("alpha_red"), py::arg("step"), py::arg("iters"),
      DENOISER_ARGS);

  m.def(
      "unrolled_forward",
      [](const Graph& g, const Vector& y, std::vector<double> alpha_red_layers,
         std::vector<double> alpha_denoiser_layers, std::optional<std::vector<double>> rho_layers,
         const std::string& kind, int pnp_iters) {
        UnrolledParams p;
        p.kind = parse_denoiser_kind(kind);
        p.layers = static_cast<int>(alpha_red_layers.size()) - 1;
        p.alpha_red = std::move(alpha_red_layers);
        p.alpha_denoiser = std::move(alpha_denoiser_layers);
        if (rho_layers) p.rho = std::move(*rho_layers);
        Denoiser base;
        base.pnp_iters = pnp_iters;
        return unrolled_forward(vertex_space(g), y, p, base);
      },
      py::arg("graph"), py::arg("y"), py::arg("alpha_red_layers"),
      py::arg("alpha_denoiser_layers"), py::arg("rho_layers") = py::none(),
      py::arg("denoiser") = "lr", py::arg("pnp_iters") = 10);
  m.def(
      "trainable_count",
      [](int layers, const std::string& kind) {
        return UnrolledParams::flat(layers, parse_denoiser_kind(kind), 1.0, 1.0).trainable_count();
      },
      py::arg("layers"), py::arg("denoiser"));

  m.def(
      "check_homogeneity",
      [](const Graph& g, const Vector& x, double c, const std::string& kind, double alpha,
         double rho, int pnp_iters, bool literal) {
        return check_homogeneity(
            make_denoiser(vertex_space(g), make_config(kind, alpha, rho, pnp_iters, literal)), x, c);
      },
      py::arg("graph"), py::arg("x"), py::arg("c") = 1.1, DENOISER_ARGS);
  m.def(
      "check_passivity",
      [](const Graph& g, const Vector& x, const std::string& kind, double alpha, double rho,
         int pnp_iters, bool literal) {
        return check_passivity(
            make_denoiser(vertex_space(g), make_config(kind, alpha, rho, pnp_iters, literal)), x);
      },
      py::arg("graph"), py::arg("x"), DENOISER_ARGS);

  m.def(
      "h_lr", [](const Vector& l, double a) { return h_lr(l, a).response; }, py::arg("lambdas"),
      py::arg("alpha_lr"));
  m.def(
      "h_red", [](const Vector& l, double ar, double a) { return h_red(l, ar, a).response; },
      py::arg("lambdas"), py::arg("alpha_red"), py::arg("alpha_lr"));

  m.def(
      "generate_sensor_points",
      [](Index n, double side, std::uint64_t seed) {
        auto rng = Rng::stream(seed, StreamPurpose::sensor_points);
        return generate_sensor_points(n, side, rng).coords();
      },
      py::arg("n"), py::arg("side") = 100.0, py::arg("seed") = 0);
  m.def(
      "bandlimited_signal",
      [](const Graph& g, Index n_band, double offset) {
        return generate_bandlimited(eigendecompose(build_laplacian(g)), n_band, offset);
      },
      py::arg("graph"), py::arg("n_band") = 3, py::arg("offset") = 2.0);
  m.def(
      "add_noise",
      [](const Vector& x, double sigma, std::uint64_t seed) {
        auto rng = Rng::stream(seed, StreamPurpose::observation_noise);
        return add_noise(x, sigma, rng);
      },
      py::arg("x"), py::arg("sigma"), py::arg("seed") = 0);
  m.def(
      "fps", [](const Matrix& pts, Index m, Index start) { return fps(PointSet(pts), m, start); },
      py::arg("points"), py::arg("m"), py::arg("start") = 0);
  m.def(
      "synthetic_sample",
      [](std::uint64_t seed, std::uint64_t sample_id, Index n_nodes, Index k) {
        SyntheticSpec spec;
        spec.seed = seed;
        spec.n_nodes = n_nodes;
        spec.k = k;
        auto s = make_synthetic_sample(spec, sample_id);
        py::dict d;
        d["points"] = s.points.coords();
        d["graph"] = s.graph;
        d["clean"] = s.clean;
        d["eigenvalues"] = s.decomp.eigenvalues;
        return d;
      },
      py::arg("seed") = 0, py::arg("sample_id") = 0, py::arg("n_nodes") = 100, py::arg("k") = 5);
  m.def(
      "rmse", [](const Matrix& a, const Matrix& b) { return rmse(a, b); }, py::arg("x_hat"),
      py::arg("x_star"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a graphred subcommand; returns (exit_code, stdout, stderr).");
}
