#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "psdfact/errors.hpp"
#include "psdfact/harness.hpp"
#include "psdfact/instances.hpp"
#include "psdfact/io.hpp"

namespace {

using namespace psdfact;

struct RunFlags {
  std::string solver = "cd-gs";
  std::string rank = "auto";
  double delta = 5.0;
  double alpha = 0.5;
  bool symmetric = false;
  double gamma = 1.0;
  std::string mask;
  int restarts = 1;
  int threads = 0;
  std::optional<double> seconds;
  std::optional<int> iters;
  std::uint64_t seed = 0;
  double tol = 0.0;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--solver", solver, "fpgm, cd-cyclic or cd-gs")
        ->check(CLI::IsMember({"fpgm", "cd-cyclic", "cd-gs"}))
        ->capture_default_str();
    cmd.add_option("--rank", rank, "inner rank of every Gram factor, or auto (= k)")
        ->capture_default_str();
    cmd.add_option("--delta", delta, "FPGM inner steps per k")->capture_default_str();
    cmd.add_option("--alpha", alpha, "Gauss-Southwell updates per k*r")->capture_default_str();
    cmd.add_flag("--symmetric", symmetric, "penalize a_i - b_i (square symmetric input)");
    cmd.add_option("--gamma", gamma, "symmetric penalty weight")->capture_default_str();
    cmd.add_option("--mask", mask, "JSON file of fixed Gram-factor entries")->check(CLI::ExistingFile);
    cmd.add_option("--restarts", restarts, "number of seeded runs")->check(CLI::PositiveNumber);
    cmd.add_option("--threads", threads, "worker threads (0 = all cores)");
    auto* t = cmd.add_option("--time", seconds, "seconds per run");
    auto* i = cmd.add_option("--iters", iters, "outer iterations per run");
    t->excludes(i);
    cmd.add_option("--seed", seed, "base seed; run r uses seed + r")->capture_default_str();
    cmd.add_option("--tol", tol, "stop a run once its relative error is below this");
  }

  RankProfile profile(int k, int m, int n) const {
    int r = k;
    if (rank != "auto") {
      try {
        std::size_t used = 0;
        r = std::stoi(rank, &used);
        if (used != rank.size()) throw std::invalid_argument(rank);
      } catch (const std::exception&) {
        throw ConfigError("--rank must be an integer or 'auto', got '" + rank + "'");
      }
    }
    RankProfile p = RankProfile::uniform(k, m, n, r);
    p.validate();
    return p;
  }

  SolverConfig config() const {
    SolverConfig c;
    c.solver = parse_solver(solver);
    c.delta = delta;
    c.alpha = alpha;
    c.symmetric = symmetric;
    c.gamma = gamma;
    if (!mask.empty()) c.mask = io::read_mask(mask);
    if (seconds) c.budget = Budget::time(*seconds);
    if (iters) c.budget = Budget::iterations(*iters);
    if (!seconds && !iters) c.budget = Budget::iterations(100);
    c.budget.outer_tol = tol;
    c.seed = seed;
    return c;
  }

  MultiStartOptions multi() const {
    MultiStartOptions o;
    o.restarts = restarts;
    o.threads = threads;
    if (tol > 0.0) o.success_threshold = tol;
    return o;
  }
};

int cmd_generate(const std::string& family, std::optional<int> n, const std::string& fixture_name,
                 const std::string& scale, const std::string& out, const std::string& factors_out) {
  ProblemInstance inst;
  if (!fixture_name.empty()) {
    const Fixture fx = fixture(fixture_name);
    inst = fx.instance;
    if (!factors_out.empty()) io::write_factors(factors_out, fx.factors, fx.name);
  } else {
    if (family.empty() || !n) throw ConfigError("generate needs --family and --n, or --fixture");
    const Family fam = parse_family(family);
    if (fam == Family::ngon && scale == "inradius") {
      inst = gen_ngon(*n, NgonScaling::inradius);
    } else {
      inst = generate(fam, *n);
    }
  }
  if (out.empty() || out == "-") {
    io::write_matrix_csv(std::cout, inst.data());
  } else {
    io::write_matrix_csv(out, inst.data());
  }
  return 0;
}

int cmd_factorize(const std::string& input, int k, const RunFlags& flags, const std::string& out,
                  const std::string& trace) {
  const ProblemInstance inst(io::read_matrix_csv(input), input);
  const RankProfile profile = flags.profile(k, inst.rows(), inst.cols());
  const BenchmarkReport report = multi_start(inst, profile, flags.config(), flags.multi());
  const RunResult& best = report.best();
  std::printf("runs=%zu best_seed=%llu relative_error=%.6e outer_iterations=%d\n",
              report.runs.size(), static_cast<unsigned long long>(best.seed), best.relative_error,
              best.outer_iterations);
  if (!out.empty()) io::write_factors(out, best.factors, input);
  if (!trace.empty()) write_trace_csv(trace, best.trace);
  return 0;
}

int cmd_check(const std::string& input, const std::string& factors, double tol) {
  const ProblemInstance inst(io::read_matrix_csv(input), input);
  const GramFactorSet f = io::read_factors(factors);
  const VerifyReport rep = verify_factorization(inst, f, tol);
  std::printf("relative_error=%.6e tol=%.3g psd=%s result=%s\n", rep.relative_error, tol,
              rep.psd ? "yes" : "no", rep.passed ? "PASS" : "FAIL");
  return rep.passed ? 0 : 1;
}

int cmd_benchmark(const std::string& suite, const std::string& input, std::optional<int> k,
                  const RunFlags& flags, const std::string& out) {
  std::vector<BenchmarkReport> reports;
  const SolverConfig config = flags.config();
  const auto run = [&](const ProblemInstance& inst, int kk) {
    const RankProfile profile = flags.profile(kk, inst.rows(), inst.cols());
    reports.push_back(multi_start(inst, profile, config, flags.multi()));
    std::printf("%-10s k=%d best_relative_error=%.6e runs=%zu\n", inst.name().c_str(), kk,
                reports.back().best_error(), reports.back().runs.size());
    std::fflush(stdout);
  };
  if (!suite.empty()) {
    if (suite != "table1") throw ConfigError("unknown suite '" + suite + "' (expected table1)");
    for (const auto& spec : table1()) run(spec.generate(), spec.k);
  } else {
    if (input.empty() || !k) throw ConfigError("benchmark needs --suite, or --input and --k");
    run(ProblemInstance(io::read_matrix_csv(input), input), *k);
  }
  const std::string json = report_to_json(reports);
  if (out.empty()) {
    std::cout << json << "\n";
  } else {
    io::write_text(out, json + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PSD factorization of nonnegative matrices"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "write a benchmark matrix as CSV");
  std::string family, fixture_name, scale = "adjacent", gen_out, factors_out;
  std::optional<int> n;
  gen->add_option("--family", family, "ngon, pn or cor")->check(CLI::IsMember({"ngon", "pn", "cor"}));
  gen->add_option("--n", n, "family parameter");
  gen->add_option("--fixture", fixture_name, "known exact factorization by name");
  gen->add_option("--ngon-scale", scale, "adjacent or inradius")
      ->check(CLI::IsMember({"adjacent", "inradius"}));
  gen->add_option("--out", gen_out, "CSV output path (default stdout)");
  gen->add_option("--factors-out", factors_out, "with --fixture, also write its factors");

  auto* fac = app.add_subcommand("factorize", "multi-start PSD factorization");
  std::string fac_input, fac_out, fac_trace;
  int fac_k = 0;
  RunFlags fac_flags;
  fac->add_option("--input", fac_input, "CSV matrix")->required()->check(CLI::ExistingFile);
  fac->add_option("--k", fac_k, "factor size")->required()->check(CLI::PositiveNumber);
  fac->add_option("--out", fac_out, "factor file for the best run");
  fac->add_option("--trace", fac_trace, "CSV (seconds, error) trace of the best run");
  fac_flags.add_to(*fac);

  auto* chk = app.add_subcommand("check", "verify a factorization");
  std::string chk_input, chk_factors;
  double chk_tol = 1e-9;
  chk->add_option("--input", chk_input, "CSV matrix")->required()->check(CLI::ExistingFile);
  chk->add_option("--factors", chk_factors, "factor file")->required()->check(CLI::ExistingFile);
  chk->add_option("--tol", chk_tol, "relative error tolerance")->capture_default_str();

  auto* bench = app.add_subcommand("benchmark", "multi-start runs over a suite");
  std::string suite, bench_input, bench_out;
  std::optional<int> bench_k;
  RunFlags bench_flags;
  bench->add_option("--suite", suite, "table1");
  bench->add_option("--input", bench_input, "CSV matrix")->check(CLI::ExistingFile);
  bench->add_option("--k", bench_k, "factor size for --input");
  bench->add_option("--out", bench_out, "JSON report path (default stdout)");
  bench_flags.add_to(*bench);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(family, n, fixture_name, scale, gen_out, factors_out);
    if (*fac) return cmd_factorize(fac_input, fac_k, fac_flags, fac_out, fac_trace);
    if (*chk) return cmd_check(chk_input, chk_factors, chk_tol);
    if (*bench) return cmd_benchmark(suite, bench_input, bench_k, bench_flags, bench_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "psdfact: error: %s\n", e.what());
    return 2;
  }
  return 2;
}
