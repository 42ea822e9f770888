// Acceptance run: one PASS/FAIL line per criterion. Expected values are
// recomputed here by oracles that do not go through the library code paths
// under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/expint.hpp>
#include <json.hpp>

#include "gafzeros/cli.hpp"
#include "gafzeros/deviations.hpp"
#include "gafzeros/intensity.hpp"
#include "gafzeros/rigidity.hpp"
#include "gafzeros/zeros.hpp"

namespace {

using namespace gafzeros;
using nlohmann::json;
constexpr double kPi = std::numbers::pi;
constexpr double kEuler = std::numbers::egamma;

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(int id, const std::string& name, const std::function<Verdict()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!v.pass) ++failures;
  std::printf("%s %2d %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", id, name.c_str(),
              v.detail.c_str(), seconds);
  std::fflush(stdout);
}

std::string Fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), format, args...);
  return buffer;
}

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gafzeros");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string WithoutTimestamp(const std::string& report) {
  json doc = json::parse(report);
  doc.erase("timestamp");
  return doc.dump();
}

std::string WriteConfig(const std::string& name, const json& doc) {
  const auto path = std::filesystem::temp_directory_path() / ("gafzeros_acceptance_" + name);
  std::ofstream(path) << doc.dump();
  return path.string();
}

// Mean and standard error of per-trial zero counts.
struct CountStats {
  double mean = 0.0;
  double se = 0.0;
};

CountStats Counts(const std::shared_ptr<const Ensemble>& ensemble, const Domain& region,
                  int trials, std::uint64_t seed) {
  std::vector<double> counts(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const auto s = Draw(ensemble, CoefficientLaw::Gaussian(), seed, static_cast<std::uint64_t>(t));
    counts[static_cast<std::size_t>(t)] = CountInRegion(s, region);
  }
  double mean = 0.0;
  for (double c : counts) mean += c;
  mean /= trials;
  double var = 0.0;
  for (double c : counts) var += (c - mean) * (c - mean);
  var /= trials - 1;
  return {mean, std::sqrt(var / trials)};
}

// ||Laplacian bump(r, R)||_1 by a midpoint rule on the radial form
// 2 pi int |t Phi'' + Phi'| dt, with Phi' and Phi'' from the smoothstep
// written out here.
double BumpLaplacianL1(double r, double R) {
  const int n = 400000;
  const double w = R - r;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = r + (i + 0.5) * w / n;
    const double u = (t - r) / w;
    // Phi = 1 - (10u^3 - 15u^4 + 6u^5).
    const double d1 = -(30 * u * u - 60 * u * u * u + 30 * u * u * u * u) / w;
    const double d2 = -(60 * u - 180 * u * u + 120 * u * u * u) / (w * w);
    total += std::abs(t * d2 + d1);
  }
  return 2.0 * kPi * total * w / n;
}

// int_{|Z| <= s} log|Z| dnu for E|Z|^2 = sigma^2, via E1.
double SublevelLogIntegral(double s, double sigma) {
  const double a = s * s / (sigma * sigma);
  const double mass = -std::expm1(-a);
  const double inner = -std::exp(-a) * std::log(a) - boost::math::expint(1, a) - kEuler;
  return 0.5 * (mass * std::log(sigma * sigma) + inner);
}

}  // namespace

int main() {
  const std::uint64_t seed = 20261016;

  Report(1, "planar mean count in D_2", [&] {
    const auto ens = std::make_shared<const Ensemble>(CurveFamily::Planar(6.0),
                                                      Domain::Disk(0.0, 2.5));
    const auto s = Counts(ens, Domain::Disk(0.0, 2.0), 4000, seed);
    const double expected = 4.0;  // (1/pi) * area
    return Verdict{std::abs(s.mean - expected) <= 4 * s.se,
                   Fmt("mean %.4f, expected %.1f, 4 SE %.4f", s.mean, expected, 4 * s.se)};
  });

  Report(2, "hyperbolic mean count in D_0.5", [&] {
    const auto ens = std::make_shared<const Ensemble>(CurveFamily::Hyperbolic(),
                                                      Domain::Disk(0.0, 0.6));
    const auto s = Counts(ens, Domain::Disk(0.0, 0.5), 4000, seed);
    const double expected = 0.25 / 0.75;
    return Verdict{std::abs(s.mean - expected) <= 4 * s.se,
                   Fmt("mean %.4f, expected %.4f, 4 SE %.4f", s.mean, expected, 4 * s.se)};
  });

  Report(3, "Kostlan companion and contour counts", [&] {
    std::string detail;
    bool pass = true;
    for (int n : {5, 20}) {
      const auto ens = std::make_shared<const Ensemble>(CurveFamily::Kostlan(n),
                                                        Domain::Disk(0.0, 1e3));
      int full = 0;
      int agree = 0;
      int outside = 0;
      for (int t = 0; t < 500; ++t) {
        const auto s = Draw(ens, CoefficientLaw::Gaussian(), seed, static_cast<std::uint64_t>(t));
        const auto roots = CompanionRoots(s);
        if (roots.TotalCount() == n) ++full;
        const int inside = roots.CountInside(Domain::Disk(0.0, 1e3));
        outside += n - inside;
        if (CountInRegion(s, Domain::Disk(0.0, 1e3)) == inside) ++agree;
      }
      pass = pass && full == 500 && agree == 500;
      detail += Fmt("N=%d: %d/500 full, %d/500 agree, %d roots beyond 1e3; ", n, full, agree,
                    outside);
    }
    return Verdict{pass, detail};
  });

  Report(4, "pointwise closed form below 3 e^-lambda", [&] {
    bool pass = true;
    std::string detail;
    for (double lambda : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0}) {
      // |Z|^2 ~ Exp(1): tails above e^{2 lambda} and below e^{-2 lambda}.
      const double oracle =
          std::exp(-std::exp(2 * lambda)) + -std::expm1(-std::exp(-2 * lambda));
      const double bound = 3.0 * std::exp(-lambda);
      const bool agrees = std::abs(PointwiseExactProbability(lambda) - oracle) <= 1e-14;
      pass = pass && oracle <= bound && agrees;
      detail += Fmt("%g: %.4g<=%.4g; ", lambda, oracle, bound);
    }
    return Verdict{pass, detail};
  });

  const std::string planar = WriteConfig("planar.json", {{"variant", "planar"}, {"window", 6.0}});
  const std::vector<std::string> tail_args = {
      "tail", "--ensemble", planar, "--bump", "1,2", "--lambdas", "0.5,1,2,4",
      "--trials", "4000", "--seed", std::to_string(seed)};
  CliRun tail_run;
  Report(5, "tail bound for bump(1,2)", [&] {
    auto args = tail_args;
    args.insert(args.end(), {"--workers", "1"});
    tail_run = Cli(args);
    if (tail_run.code == 1 || tail_run.code == 3) return Verdict{false, tail_run.err};
    const json r = json::parse(tail_run.out)["results"];
    const double l1 = BumpLaplacianL1(1.0, 2.0);
    bool pass = tail_run.code == 0 &&
                std::abs(r["laplacian_l1"].get<double>() - l1) <= 1e-6 * l1;
    std::string detail = Fmt("L1 %.6f (oracle %.6f); ", r["laplacian_l1"].get<double>(), l1);
    for (const auto& e : r["estimates"]) {
      const double lambda = e["lambda"].get<double>();
      const double bound = 3.0 * std::exp(-2.0 * kPi * lambda / l1);
      const double lower = e["ci"][0].get<double>();
      pass = pass && lower <= bound;
      detail += Fmt("%g: %.4f<=%.4f; ", lambda, lower, bound);
    }
    return Verdict{pass, detail};
  });

  const std::string hyperbolic = WriteConfig("hyperbolic.json", {{"variant", "hyperbolic"}});
  const std::vector<std::string> hole_args = {"hole",    "--ensemble", hyperbolic, "--R",
                                              "0.3,0.5,0.7", "--trials", "10000", "--seed",
                                              std::to_string(seed)};
  CliRun hole_run;
  Report(6, "hyperbolic hole probability", [&] {
    auto args = hole_args;
    args.insert(args.end(), {"--workers", "1"});
    hole_run = Cli(args);
    if (hole_run.code == 1 || hole_run.code == 3) return Verdict{false, hole_run.err};
    const json r = json::parse(hole_run.out)["results"];
    bool pass = hole_run.code == 0;
    std::string detail;
    for (const auto& e : r["estimates"]) {
      // Oracle for the reported minimizer: mu(D_r) = r^2 / (1 - r^2).
      const double rr = e["best_inner"].get<double>();
      const double mu = rr * rr / (1 - rr * rr);
      const double bound =
          3.0 * std::exp(-2.0 * kPi * mu / BumpLaplacianL1(rr, e["R"].get<double>()));
      const double lower = e["ci"][0].get<double>();
      pass = pass && lower <= bound && std::abs(bound - e["bound"].get<double>()) <= 1e-6;
      detail += Fmt("R=%g: p=%.4f ci_lo=%.4f<=%.4f; ", e["R"].get<double>(),
                    e["empirical"].get<double>(), lower, bound);
    }
    return Verdict{pass, detail};
  });

  Report(7, "Gaussian log-integral lemma suite", [&] {
    // Worst constant over sublevel and superlevel events on a dense mass grid.
    double oracle_constant = -1e300;
    for (int i = 1; i <= 20000; ++i) {
      const double nu = i / 20000.0;
      const double s = std::sqrt(-std::log1p(-nu));
      const double sub = std::abs(SublevelLogIntegral(s, 1.0));
      const double whole = -0.5 * kEuler;
      const double super = std::abs(whole - SublevelLogIntegral(s, 1.0));
      oracle_constant = std::max(oracle_constant, sub / nu - std::log(1 / nu));
      if (nu < 1.0) {
        const double tail = 1.0 - nu;
        oracle_constant = std::max(oracle_constant, super / tail - std::log(1 / tail));
      }
    }
    int failures_here = 0;
    double worst_gap = 1e300;
    double worst_error = 0.0;
    for (double sigma : {0.5, 1.0, 5.0}) {
      for (double nu : {1e-3, 1e-2, 0.1, 0.5}) {
        const auto r = LemmaCheck(sigma, LemmaEvent::SublevelWithMass(nu, sigma));
        const double exact = SublevelLogIntegral(r.event.s_upper, sigma);
        const double lhs = std::abs(exact - nu * std::log(sigma));
        const double rhs = nu * (std::log(1 / nu) + oracle_constant);
        worst_error = std::max(worst_error, std::abs(r.integral - exact));
        worst_gap = std::min(worst_gap, rhs - lhs);
        if (!(lhs <= rhs) || !r.holds) ++failures_here;
      }
    }
    const bool pass =
        failures_here == 0 && worst_error <= 1e-10 && oracle_constant <= kLemmaConstant;
    return Verdict{pass, Fmt("oracle constant %.6f (library %.5f), 12 checks, %d failures, "
                             "min slack %.3e, max integral error %.2e",
                             oracle_constant, kLemmaConstant, failures_here, worst_gap,
                             worst_error)};
  });

  Report(8, "rigidity round trip and negative controls", [&] {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto gaussian = [&] { return Complex(normal(rng), normal(rng)); };
    double worst_residual = 0.0;
    double worst_defect = 0.0;
    double worst_u = 0.0;
    int riesz_misses = 0;
    int rejected = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + trial % 8;
      const int d = n - 1 + trial % 3;
      Eigen::MatrixXcd c(n, d + 1);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= d; ++j) c(i, j) = gaussian();
      }
      const KernelModel first(c, {0.3 * gaussian(), 0.3 * gaussian(), 0.3 * gaussian()});
      const auto u = RandomUnitary(n, rng);
      const KernelModel second =
          MakeEquivalent(first, u, {gaussian(), gaussian(), gaussian()});
      const auto grid = GridPoints(Domain::Disk(0.0, 0.5), 6, 6);
      if (!RieszCompare(first, second, grid).same_measure) ++riesz_misses;
      const auto cert = RecoverEquivalence(first, second, SunflowerPoints(4 * n, 0.5));
      worst_residual = std::max(worst_residual, cert.residual);
      worst_defect = std::max(worst_defect, cert.unitarity_defect);
      // U is recovered up to the constant phase fixed by the gauge.
      const Complex phase = (u.adjoint() * cert.u).trace() / static_cast<double>(n);
      worst_u = std::max(worst_u, (cert.u - phase / std::abs(phase) * u).norm());

      // One-component curves carry only point masses at their zeros, which a
      // smooth stencil cannot see, so controls have at least two components.
      const int m = std::max(n, 2);
      Eigen::MatrixXcd other(m, std::max(d, 1) + 1);
      for (int i = 0; i < other.rows(); ++i) {
        for (int j = 0; j < other.cols(); ++j) other(i, j) = gaussian();
      }
      const KernelModel independent(other, {0.3 * gaussian(), 0.3 * gaussian()});
      if (!RieszCompare(first, independent, grid).same_measure) ++rejected;
    }
    const bool pass = worst_residual <= 1e-8 && worst_defect <= 1e-8 && worst_u <= 1e-8 &&
                      riesz_misses == 0 && rejected == 50;
    return Verdict{pass, Fmt("worst residual %.2e, defect %.2e, |U - U_true| %.2e, riesz "
                             "misses %d, controls rejected %d/50",
                             worst_residual, worst_defect, worst_u, riesz_misses, rejected)};
  });

  Report(9, "polarization of (1 + z conj w)^3", [&] {
    const auto table =
        Polarize([](Complex z) { return std::pow(1.0 + std::norm(z), 3); }, 0.0, 8);
    double error = 0.0;
    std::vector<Complex> probe;
    for (int i = 0; i < 21; ++i) {
      for (int j = 0; j < 21; ++j) {
        const Complex z(-0.1 + 0.01 * i, -0.1 + 0.01 * j);
        if (std::abs(z) <= 0.1) probe.push_back(z);
      }
    }
    for (auto z : probe) {
      for (auto w : probe) {
        error = std::max(error, std::abs(table.Evaluate(z, w) -
                                         std::pow(1.0 + z * std::conj(w), 3)));
      }
    }
    return Verdict{error <= 1e-6, Fmt("order %d, max error %.2e over %zu^2 pairs", table.order,
                                      error, probe.size())};
  });

  Report(10, "numeric vs closed intensity", [&] {
    struct Case {
      CurveFamily family;
      Domain region;
      std::function<double(Complex)> oracle;
    };
    const std::vector<Case> cases = {
        {CurveFamily::Planar(6.0), Domain::Disk(0.0, 2.0), [](Complex) { return 1 / kPi; }},
        {CurveFamily::Hyperbolic(), Domain::Disk(0.0, 0.5),
         [](Complex z) { return 1 / (kPi * std::pow(1 - std::norm(z), 2)); }},
        {CurveFamily::Kostlan(5), Domain::Disk(0.0, 2.0),
         [](Complex z) { return 5 / (kPi * std::pow(1 + std::norm(z), 2)); }}};
    bool pass = true;
    std::string detail;
    for (const auto& c : cases) {
      double worst = 0.0;
      for (auto z : GridPoints(c.region, 30, 30)) {
        const double numeric = DensityNumeric(c.family, z, DefaultStep(c.region));
        worst = std::max({worst, std::abs(numeric - c.oracle(z)),
                          std::abs(DensityClosed(c.family, z) - c.oracle(z))});
      }
      pass = pass && worst <= 1e-6;
      detail += Fmt("%s %.2e; ", c.family.Name().c_str(), worst);
    }
    return Verdict{pass, detail};
  });

  Report(11, "reports identical at 1 and 8 workers", [&] {
    auto tail8 = tail_args;
    tail8.insert(tail8.end(), {"--workers", "8"});
    auto hole8 = hole_args;
    hole8.insert(hole8.end(), {"--workers", "8"});
    const auto tail_again = Cli(tail8);
    const auto hole_again = Cli(hole8);
    const bool tail_same = !tail_run.out.empty() &&
                           WithoutTimestamp(tail_run.out) == WithoutTimestamp(tail_again.out);
    const bool hole_same = !hole_run.out.empty() &&
                           WithoutTimestamp(hole_run.out) == WithoutTimestamp(hole_again.out);
    bool sample_same = true;
    const std::string kostlan =
        WriteConfig("kostlan.json", {{"variant", "kostlan"}, {"degree", 20}});
    for (int workers : {1, 8}) {
      static std::string first;
      const auto run = Cli({"sample", "--ensemble", kostlan, "--trials", "200", "--seed",
                            std::to_string(seed), "--workers", std::to_string(workers)});
      const auto stripped = WithoutTimestamp(run.out);
      if (workers == 1) first = stripped;
      else sample_same = stripped == first;
    }
    return Verdict{tail_same && hole_same && sample_same,
                   Fmt("tail %s, hole %s, sample %s", tail_same ? "identical" : "differs",
                       hole_same ? "identical" : "differs",
                       sample_same ? "identical" : "differs")};
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
