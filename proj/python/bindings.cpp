#include <optional>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "psdfact/errors.hpp"
#include "psdfact/harness.hpp"
#include "psdfact/instances.hpp"
#include "psdfact/matops.hpp"
#include "psdfact/model.hpp"
#include "psdfact/quartic.hpp"

namespace py = pybind11;
using namespace psdfact;

namespace {

GramFactorSet to_factors(std::vector<Matrix> a, std::vector<Matrix> b) {
  GramFactorSet f{std::move(a), std::move(b)};
  f.validate();
  return f;
}

py::dict factors_dict(const GramFactorSet& f) {
  py::dict d;
  d["a"] = f.a;
  d["b"] = f.b;
  return d;
}

py::dict factorize(const Matrix& x, int k, const std::string& solver, std::optional<int> rank,
                   std::optional<int> iters, std::optional<double> seconds, std::uint64_t seed,
                   int restarts, double alpha, double delta, bool symmetric, double gamma,
                   double tol) {
  const ProblemInstance inst(x);
  const RankProfile profile = RankProfile::uniform(k, inst.rows(), inst.cols(), rank.value_or(k));
  profile.validate();
  SolverConfig config;
  config.solver = parse_solver(solver);
  config.alpha = alpha;
  config.delta = delta;
  config.symmetric = symmetric;
  config.gamma = gamma;
  config.seed = seed;
  config.budget = seconds ? Budget::time(*seconds) : Budget::iterations(iters.value_or(100));
  config.budget.outer_tol = tol;
  MultiStartOptions options;
  options.restarts = restarts;
  options.threads = 1;

  BenchmarkReport report;
  {
    py::gil_scoped_release release;
    report = multi_start(inst, profile, config, options);
  }
  const RunResult& best = report.best();
  py::dict out = factors_dict(best.factors);
  out["relative_error"] = best.relative_error;
  out["seed"] = best.seed;
  out["outer_iterations"] = best.outer_iterations;
  std::vector<std::pair<double, double>> trace;
  for (const auto& s : best.trace.samples()) trace.emplace_back(s.seconds, s.error);
  out["trace"] = trace;
  out["errors"] = [&] {
    std::vector<double> e;
    for (const auto& r : report.runs) e.push_back(r.relative_error);
    return e;
  }();
  return out;
}

}  // namespace

PYBIND11_MODULE(_psdfact, m) {
  m.doc() = "PSD factorization of nonnegative matrices";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InitializationFailure>(m, "InitializationFailure", PyExc_RuntimeError);

  m.def("sym_eig", [](const Matrix& c) {
    const EigenDecomposition e = sym_eig(SymMatrix(c));
    return py::make_tuple(e.eigenvalues, e.eigenvectors);
  }, py::arg("c"), "Eigenvalues (descending) and eigenvectors of a symmetric matrix.");
  m.def("project_psd", [](const Matrix& c) { return project_psd(SymMatrix(c)).matrix(); },
        py::arg("c"));
  m.def("lambda_max", [](const Matrix& c) { return lambda_max(SymMatrix(c)); }, py::arg("c"));
  m.def("gram", [](const Matrix& a) { return gram(a).matrix(); }, py::arg("a"));

  m.def("cardano_minimize", [](double c3, double c2, double c1, double c0) {
    return cardano_minimize(QuarticCoeffs{c3, c2, c1, c0});
  }, py::arg("c3"), py::arg("c2"), py::arg("c1"), py::arg("c0"));
  m.def("minimize_quartic", [](double c3, double c2, double c1, double c0) {
    return minimize_quartic_safe(QuarticCoeffs{c3, c2, c1, c0});
  }, py::arg("c3"), py::arg("c2"), py::arg("c1"), py::arg("c0"));

  m.def("gen_ngon", [](int n, const std::string& scale) {
    if (scale != "adjacent" && scale != "inradius") {
      throw ConfigError("scale must be 'adjacent' or 'inradius'");
    }
    return gen_ngon(n, scale == "inradius" ? NgonScaling::inradius : NgonScaling::adjacent).data();
  }, py::arg("n"), py::arg("scale") = "adjacent");
  m.def("gen_pn", [](int n) { return gen_pn(n).data(); }, py::arg("n"));
  m.def("gen_cor", [](int n) { return gen_cor(n).data(); }, py::arg("n"));

  m.def("fixtures", [] {
    py::list out;
    for (const auto& fx : fixtures()) {
      py::dict d = factors_dict(fx.factors);
      d["name"] = fx.name;
      d["data"] = fx.instance.data();
      d["symmetric"] = fx.symmetric;
      out.append(d);
    }
    return out;
  });

  m.def("relative_error", [](const Matrix& x, std::vector<Matrix> a, std::vector<Matrix> b) {
    return relative_error(ProblemInstance(x), to_factors(std::move(a), std::move(b)));
  }, py::arg("x"), py::arg("a"), py::arg("b"));
  m.def("verify", [](const Matrix& x, std::vector<Matrix> a, std::vector<Matrix> b, double tol) {
    const VerifyReport r = verify_factorization(ProblemInstance(x), to_factors(std::move(a), std::move(b)), tol);
    py::dict d;
    d["relative_error"] = r.relative_error;
    d["ranks_a"] = r.ranks_a;
    d["ranks_b"] = r.ranks_b;
    d["psd"] = r.psd;
    d["passed"] = r.passed;
    return d;
  }, py::arg("x"), py::arg("a"), py::arg("b"), py::arg("tol") = 1e-9);

  m.def("factorize", &factorize, py::arg("x"), py::arg("k"), py::arg("solver") = "cd-gs",
        py::arg("rank") = py::none(), py::arg("iters") = py::none(),
        py::arg("seconds") = py::none(), py::arg("seed") = 0, py::arg("restarts") = 1,
        py::arg("alpha") = 0.5, py::arg("delta") = 5.0, py::arg("symmetric") = false,
        py::arg("gamma") = 1.0, py::arg("tol") = 0.0,
        "Best of `restarts` seeded runs. Returns a dict with factors a, b, relative_error, "
        "seed, outer_iterations, trace and the per-run errors.");
}
