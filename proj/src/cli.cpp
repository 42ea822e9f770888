#include "gafzeros/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gafzeros/config.hpp"
#include "gafzeros/deviations.hpp"
#include "gafzeros/intensity.hpp"
#include "gafzeros/rigidity.hpp"
#include "gafzeros/zeros.hpp"

#ifndef GAFZEROS_VERSION
#define GAFZEROS_VERSION "0.0.0"
#endif

namespace gafzeros {

namespace {

using nlohmann::json;

// A checked bound failed; carries the report that shows it.
struct Outcome {
  json results;
  bool violated = false;
};

struct Common {
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out;
  std::string plot;
};

json ComplexJson(Complex c) { return json::array({c.real(), c.imag()}); }

json IntervalJson(const Interval& ci) { return json::array({ci.lower, ci.upper}); }

std::string Timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

void WriteText(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("out: cannot write " + path);
  file << text;
}

std::string Report(const std::string& kind, const json& config, const json& results) {
  json report;
  report["kind"] = kind;
  report["version"] = Version();
  report["timestamp"] = Timestamp();
  report["config"] = config;
  report["results"] = results;
  return report.dump(2) + "\n";
}

std::vector<double> ParseNumbers(const std::string& text, const std::string& field) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(field + ": '" + item + "' is not a number");
    }
  }
  return values;
}

std::uint64_t DefaultSeed() {
  const char* env = std::getenv("GAFZEROS_SEED");
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t seed = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto [ptr, ec] = std::from_chars(env, end, seed);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("GAFZEROS_SEED: '" + std::string(env) +
                      "' is not an unsigned 64-bit integer");
  }
  return seed;
}

void CheckTrials(std::int64_t trials) {
  if (trials < 1) throw ConfigError("trials: must be positive");
}

std::shared_ptr<const Ensemble> BuildEnsemble(const EnsembleConfig& config) {
  return std::make_shared<const Ensemble>(config.family, config.WorkingDomain(),
                                          config.policy);
}

Outcome RunSample(const EnsembleConfig& config, std::int64_t trials,
                  const Common& common) {
  CheckTrials(trials);
  const auto ensemble = BuildEnsemble(config);
  const auto law = config.Law();
  const auto samples = ParallelMap(static_cast<std::size_t>(trials), common.workers,
                                   [&](std::size_t t) {
                                     const auto s = Draw(ensemble, law, common.seed, t);
                                     json coeffs = json::array();
                                     for (auto c : s.coefficients()) coeffs.push_back(ComplexJson(c));
                                     return json{{"trial", t}, {"coefficients", coeffs}};
                                   });
  Outcome o;
  o.results["truncation_order"] = ensemble->order();
  o.results["num_coefficients"] = ensemble->NumCoefficients();
  o.results["evaluation_scale"] = ensemble->EvaluationScale();
  json list = json::array();
  for (const auto& s : samples) list.push_back(s);
  o.results["samples"] = list;
  return o;
}

std::string ZerosCsv(const ZeroSet& zeros) {
  std::ostringstream csv;
  csv.precision(17);
  csv << "re,im,multiplicity\n";
  for (const auto& z : zeros.zeros) {
    csv << z.location.real() << "," << z.location.imag() << "," << z.multiplicity << "\n";
  }
  return csv.str();
}

json TailResults(const TailReport& report, const TestFunction& phi, double prefactor,
                 bool asserted, bool& violated) {
  json r;
  r["mu_phi"] = report.mu_phi;
  r["laplacian_l1"] = report.laplacian_l1;
  r["triangle_bound"] = phi.triangle_bound();
  r["prefactor"] = prefactor;
  r["lemma_constant"] = kLemmaConstant;
  r["bound_formula"] = "prefactor * exp(-2 pi lambda / laplacian_l1)";
  r["one_sided_formula"] = "exp(-2 pi lambda / laplacian_l1 + lemma_constant)";
  r["bound_asserted"] = asserted;
  r["truncation_order"] = report.truncation_order;
  r["jitter_retries"] = report.jitter_retries;
  json resamples = json::array();
  for (const auto& s : report.resamples) {
    resamples.push_back({{"trial", s.trial}, {"attempts", s.attempts}, {"reason", s.reason}});
  }
  r["resamples"] = resamples;
  double mean = 0.0;
  for (double d : report.deviations) mean += d;
  mean /= static_cast<double>(report.deviations.size());
  double var = 0.0;
  for (double d : report.deviations) var += (d - mean) * (d - mean);
  r["deviation_mean"] = mean;
  r["deviation_std"] = std::sqrt(var / static_cast<double>(report.deviations.size() - 1));
  json estimates = json::array();
  violated = false;
  for (const auto& e : report.estimates) {
    const double bound = prefactor / 3.0 * e.bound;
    const bool bad = e.ci.lower > bound;
    violated = violated || (asserted && bad);
    estimates.push_back({{"lambda", e.lambda},
                         {"trials", e.trials},
                         {"exceed", e.exceed},
                         {"exceed_plus", e.exceed_plus},
                         {"exceed_minus", e.exceed_minus},
                         {"empirical_prob", e.empirical_prob},
                         {"ci", IntervalJson(e.ci)},
                         {"bound", bound},
                         {"one_sided_bound", e.one_sided_bound},
                         {"violated", bad}});
  }
  r["estimates"] = estimates;
  return r;
}

json HoleResults(const HoleReport& report, const CurveFamily& family) {
  json r;
  r["bound_formula"] = "min over r of 3 exp(-2 pi mu(D_r) / laplacian_l1(bump(r, R)))";
  r["scan_points"] = report.scan_points;
  r["truncation_order"] = report.truncation_order;
  r["jitter_retries"] = report.jitter_retries;
  json resamples = json::array();
  for (const auto& s : report.resamples) {
    resamples.push_back({{"trial", s.trial}, {"attempts", s.attempts}, {"reason", s.reason}});
  }
  r["resamples"] = resamples;
  json estimates = json::array();
  for (const auto& e : report.estimates) {
    json item = {{"R", e.radius},
                 {"holes", e.holes},
                 {"trials", e.trials},
                 {"empirical", e.empirical},
                 {"ci", IntervalJson(e.ci)},
                 {"bound", e.bound},
                 {"best_inner", e.best_inner},
                 {"mu_inner", e.mu_inner},
                 {"laplacian_l1", e.laplacian_l1},
                 {"violated", e.violated}};
    if (e.holes == 0) item["note"] = "0 with CI";
    // Inverse use: the scaled dimensionless bound mu(D_{sR}) <= C log(3/p) / (1 - s).
    if (e.holes > 0) {
      json checks = json::array();
      for (double s : {0.25, 0.5, 0.75}) {
        const double mu = MuRegion(family, Domain::Disk(0.0, s * e.radius));
        const double bound = DimensionlessDiskBound(e.empirical, s);
        checks.push_back({{"s", s}, {"mu", mu}, {"bound", bound}, {"holds", mu <= bound}});
      }
      item["dimensionless"] = checks;
    }
    estimates.push_back(item);
  }
  r["dimensionless_constant"] = DimensionlessConstant();
  r["estimates"] = estimates;
  return r;
}

LemmaEvent ParseLemmaEvent(const std::string& spec, double sigma) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("events: '" + spec + "' must look like kind:values");
  }
  const std::string kind = spec.substr(0, colon);
  const auto v = ParseNumbers(spec.substr(colon + 1), "events");
  auto need = [&](std::size_t n) {
    if (v.size() != n) {
      throw ConfigError("events: '" + spec + "' needs " + std::to_string(n) + " values");
    }
  };
  try {
    if (kind == "sub") {
      need(1);
      return LemmaEvent::Sublevel(v[0]);
    }
    if (kind == "super") {
      need(1);
      return LemmaEvent::Superlevel(v[0]);
    }
    if (kind == "half") {
      need(1);
      return LemmaEvent::HalfPlane(v[0]);
    }
    if (kind == "mass") {
      need(1);
      return LemmaEvent::SublevelWithMass(v[0], sigma);
    }
    if (kind == "sector") {
      need(4);
      return LemmaEvent::Sector(v[0], v[1], v[2], v[3]);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError("events: '" + spec + "': " + e.what());
  }
  throw ConfigError("events: unknown kind '" + kind + "' (sub, super, half, mass, sector)");
}

RealPolynomial ParsePolynomial(const std::vector<std::string>& terms, int variables) {
  RealPolynomial p;
  p.variables = variables;
  for (const auto& term : terms) {
    std::stringstream in(term);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.empty() || parts.size() > 3) {
      throw ConfigError("terms: '" + term + "' must be coef[:px[:py]]");
    }
    RealPolynomial::Term t;
    try {
      t.coef = std::stod(parts[0]);
      if (parts.size() > 1) t.px = std::stoi(parts[1]);
      if (parts.size() > 2) t.py = std::stoi(parts[2]);
    } catch (const std::exception&) {
      throw ConfigError("terms: '" + term + "' is not coef[:px[:py]]");
    }
    p.terms.push_back(t);
  }
  return p;
}

PolyEvent ParsePolyEvent(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("event: expected kind:values");
  const std::string kind = spec.substr(0, colon);
  const auto v = ParseNumbers(spec.substr(colon + 1), "event");
  PolyEvent e;
  if (kind == "sub" || kind == "super") {
    if (v.size() != 1) throw ConfigError("event: " + kind + " takes one level");
    e.kind = kind == "sub" ? PolyEvent::Kind::kSublevel : PolyEvent::Kind::kSuperlevel;
    e.level = v[0];
  } else if (kind == "box") {
    if (v.size() != 2 && v.size() != 4) {
      throw ConfigError("event: box takes x0,x1 or x0,x1,y0,y1");
    }
    e.kind = PolyEvent::Kind::kBox;
    e.lower[0] = v[0];
    e.upper[0] = v[1];
    if (v.size() == 4) {
      e.lower[1] = v[2];
      e.upper[1] = v[3];
    }
    if (!(e.lower[0] < e.upper[0]) || !(e.lower[1] <= e.upper[1])) {
      throw ConfigError("event: box bounds must be increasing");
    }
  } else {
    throw ConfigError("event: unknown kind '" + kind + "' (sub, super, box)");
  }
  return e;
}

std::vector<Complex> ReadPoints(const std::string& path) {
  const json doc = ReadJsonFile(path);
  if (!doc.is_array()) throw ConfigError("points: expected an array of complex numbers");
  std::vector<Complex> points;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    points.push_back(ParseComplex(doc[i], "points[" + std::to_string(i) + "]"));
  }
  return points;
}

json MatrixJson(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(ComplexJson(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string Version() { return GAFZEROS_VERSION; }

std::string FormatNumber(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  std::string text(buffer, ptr);
  if (std::isfinite(value) && text.find_first_of(".e") == std::string::npos) {
    text += ".0";
  }
  return text;
}

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate Gaussian analytic functions and check zero statistics",
               "gafzeros"};
  app.set_version_flag("--version", Version());
  app.require_subcommand(1);

  Common common;
  std::string ensemble_path;
  std::int64_t trials = 0;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Master seed (default: $GAFZEROS_SEED or 0)");
    sub->add_option("--workers", common.workers, "Worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", common.out, "Output file (default: stdout)");
  };

  auto* sample = app.add_subcommand("sample", "Draw coefficient vectors");
  add_common(sample);
  sample->add_option("--ensemble", ensemble_path, "Ensemble config")->required();
  sample->add_option("--trials", trials, "Number of samples")->default_val(1);

  std::int64_t trial = 0;
  std::string region_spec;
  std::string method = "locate";
  auto* zeros = app.add_subcommand("zeros", "Locate the zeros of one sample");
  add_common(zeros);
  zeros->add_option("--ensemble", ensemble_path, "Ensemble config")->required();
  zeros->add_option("--trial", trial, "Trial index")->default_val(0);
  zeros->add_option("--region", region_spec, "disk:cx,cy,r | rect:x0,y0,x1,y1 | window:r");
  zeros->add_option("--method", method, "locate | companion")
      ->check(CLI::IsMember({"locate", "companion"}));

  std::string grid;
  bool expected_count = false;
  bool numeric = false;
  double step = 0.0;
  auto* intensity = app.add_subcommand("intensity", "Zero intensity and expected counts");
  add_common(intensity);
  intensity->add_option("--ensemble", ensemble_path, "Ensemble config")->required();
  intensity->add_option("--region", region_spec, "Region")->required();
  intensity->add_option("--grid", grid, "WxH density grid written as CSV");
  intensity->add_flag("--expected-count", expected_count, "Print mu(region)");
  intensity->add_flag("--numeric", numeric, "Finite-difference density even with a closed form");
  intensity->add_option("--step", step, "Stencil step (default 1e-3 * region scale)");
  intensity->add_option("--emit-plot-data", common.plot, "Write (x, y) density series");

  std::string bump_spec;
  std::string center_spec = "0,0";
  std::string lambdas_spec;
  double prefactor = 3.0;
  auto* tail = app.add_subcommand("tail", "Tail of the smoothed zero-count deviation");
  add_common(tail);
  tail->add_option("--ensemble", ensemble_path, "Ensemble config")->required();
  tail->add_option("--bump", bump_spec, "r,R")->required();
  tail->add_option("--center", center_spec, "cx,cy of the bump");
  tail->add_option("--lambdas", lambdas_spec, "Comma-separated lambda grid")->required();
  tail->add_option("--trials", trials, "Number of trials")->required();
  tail->add_option("--prefactor", prefactor, "Diagnostic: prefactor of the bound (default 3)");
  tail->add_option("--emit-plot-data", common.plot, "Write the tail curve as CSV");

  std::string radii_spec;
  int scan = 199;
  auto* hole = app.add_subcommand("hole", "Hole probabilities of centered disks");
  add_common(hole);
  hole->add_option("--ensemble", ensemble_path, "Ensemble config")->required();
  hole->add_option("--R", radii_spec, "Comma-separated radii")->required();
  hole->add_option("--trials", trials, "Number of trials")->required();
  hole->add_option("--scan", scan, "Inner radii in the bound scan")->check(CLI::PositiveNumber);
  hole->add_option("--emit-plot-data", common.plot, "Write hole probability vs R as CSV");

  std::string sigma_spec = "1";
  std::vector<std::string> events;
  std::string pointwise_spec = "0.01,0.1,0.5,1,2,5";
  auto* lemma = app.add_subcommand("lemma", "Integral lemma and pointwise concentration");
  add_common(lemma);
  lemma->add_option("--sigma", sigma_spec, "Comma-separated standard deviations");
  lemma->add_option("--events", events,
                    "Events: sub:s super:s half:theta mass:nu sector:s0,s1,a0,width")
      ->required();
  lemma->add_option("--pointwise", pointwise_spec, "Comma-separated lambdas");

  std::string model1_path;
  std::string model2_path;
  std::string points_spec = "auto";
  double riesz_radius = 0.5;
  int polarize_order = -1;
  auto* rigidity = app.add_subcommand("rigidity", "Recover (g, U) between two kernel models");
  add_common(rigidity);
  rigidity->add_option("--model1", model1_path, "First model")->required();
  rigidity->add_option("--model2", model2_path, "Second model")->required();
  rigidity->add_option("--points", points_spec, "JSON file of sample points, or auto");
  rigidity->add_option("--riesz-radius", riesz_radius, "Radius of the harmonicity grid");
  rigidity->add_option("--polarize", polarize_order, "Also polarize model 1 to this order");

  std::vector<std::string> terms;
  int variables = 1;
  int degree = -1;
  std::string event_spec;
  auto* poly = app.add_subcommand("poly-lemma", "Polynomial lemma under the Gaussian measure");
  add_common(poly);
  poly->add_option("--terms", terms, "Terms coef:px:py")->required();
  poly->add_option("--variables", variables, "1 or 2");
  poly->add_option("--degree", degree, "Degree d (default: degree of P)");
  poly->add_option("--event", event_spec, "sub:level | super:level | box:x0,x1[,y0,y1]")
      ->required();
  poly->add_option("--trials", trials, "Monte Carlo points")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    common.seed = seed ? *seed : DefaultSeed();
    json config;
    config["seed"] = common.seed;
    Outcome outcome;
    std::string kind;

    if (sample->parsed()) {
      kind = "sample";
      const auto ens = ParseEnsemble(ReadJsonFile(ensemble_path));
      config["ensemble"] = ens.ToJson();
      config["trials"] = trials;
      outcome = RunSample(ens, trials, common);
    } else if (zeros->parsed()) {
      const auto ens = ParseEnsemble(ReadJsonFile(ensemble_path));
      const auto ensemble = BuildEnsemble(ens);
      if (trial < 0) throw ConfigError("trial: must be nonnegative");
      const auto s = Draw(ensemble, ens.Law(), common.seed, static_cast<std::uint64_t>(trial));
      ZeroSet set;
      if (method == "companion") {
        if (!region_spec.empty()) throw ConfigError("region: not used by --method companion");
        set = CompanionRoots(s);
      } else {
        const Domain region =
            region_spec.empty() ? ens.WorkingDomain() : ParseRegion(region_spec);
        set = Locate(s, region);
      }
      WriteText(common.out, ZerosCsv(set), out);
      if (!common.out.empty() && common.out != "-") {
        out << set.TotalCount() << " zeros in " << set.region.ToString() << "\n";
      }
      return kExitOk;
    } else if (intensity->parsed()) {
      const auto ens = ParseEnsemble(ReadJsonFile(ensemble_path));
      const Domain region = ParseRegion(region_spec);
      if (!expected_count && grid.empty()) {
        throw ConfigError("intensity: give --expected-count and/or --grid WxH");
      }
      if (expected_count) out << FormatNumber(MuRegion(ens.family, region)) << "\n";
      if (!grid.empty()) {
        int w = 0;
        int h = 0;
        char x = 0;
        std::istringstream in(grid);
        if (!(in >> w >> x >> h) || (x != 'x' && x != 'X') || w < 1 || h < 1) {
          throw ConfigError("grid: expected WxH with positive integers");
        }
        const double stencil = step > 0.0 ? step : DefaultStep(region);
        const auto measure = numeric ? IntensityMeasure::FiniteDifference(ens.family, stencil)
                                     : IntensityMeasure::For(ens.family, stencil);
        const auto points = GridPoints(region, w, h);
        const auto values = ParallelMap(points.size(), common.workers,
                                        [&](std::size_t i) { return measure.Density(points[i]); });
        std::ostringstream csv;
        csv.precision(17);
        csv << "x,y,density\n";
        for (std::size_t i = 0; i < points.size(); ++i) {
          csv << points[i].real() << "," << points[i].imag() << "," << values[i] << "\n";
        }
        WriteText(common.out, csv.str(), out);
        if (!common.plot.empty()) WriteText(common.plot, csv.str(), out);
      }
      return kExitOk;
    } else if (tail->parsed()) {
      kind = "tail";
      const auto ens = ParseEnsemble(ReadJsonFile(ensemble_path));
      const auto radii = ParseNumbers(bump_spec, "bump");
      if (radii.size() != 2) throw ConfigError("bump: expected r,R");
      const auto center = ParseNumbers(center_spec, "center");
      if (center.size() != 2) throw ConfigError("center: expected cx,cy");
      const auto lambdas = ParseNumbers(lambdas_spec, "lambdas");
      if (!(prefactor > 0.0)) throw ConfigError("prefactor: must be positive");
      const auto phi = TestFunction::Bump(radii[0], radii[1], {center[0], center[1]});
      MonteCarloOptions options;
      options.trials = trials;
      options.seed = common.seed;
      options.workers = common.workers;
      options.law = ens.Law();
      options.policy = ens.policy;
      if (trials < 1000) throw ConfigError("trials: at least 1000 for tail estimates");
      config["ensemble"] = ens.ToJson();
      config["bump"] = {{"r", radii[0]}, {"R", radii[1]}, {"center", center}};
      config["lambdas"] = lambdas;
      config["trials"] = trials;
      config["prefactor"] = prefactor;
      const auto report = OffordTail(ens.family, phi, lambdas, options);
      // The bound is proved for Gaussian coefficients only.
      const bool asserted = options.law.IsGaussian();
      outcome.results = TailResults(report, phi, prefactor, asserted, outcome.violated);
      if (!common.plot.empty()) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "lambda,empirical,ci_lower,ci_upper,bound\n";
        for (const auto& e : outcome.results["estimates"]) {
          csv << e["lambda"].get<double>() << "," << e["empirical_prob"].get<double>() << ","
              << e["ci"][0].get<double>() << "," << e["ci"][1].get<double>() << ","
              << e["bound"].get<double>() << "\n";
        }
        WriteText(common.plot, csv.str(), out);
      }
    } else if (hole->parsed()) {
      kind = "hole";
      const auto ens = ParseEnsemble(ReadJsonFile(ensemble_path));
      const auto radii = ParseNumbers(radii_spec, "R");
      MonteCarloOptions options;
      options.trials = trials;
      options.seed = common.seed;
      options.workers = common.workers;
      options.law = ens.Law();
      options.policy = ens.policy;
      CheckTrials(trials);
      config["ensemble"] = ens.ToJson();
      config["R"] = radii;
      config["trials"] = trials;
      config["scan"] = scan;
      const auto report = HoleProbability(ens.family, radii, options, scan);
      outcome.results = HoleResults(report, ens.family);
      outcome.violated = report.AnyViolated() && options.law.IsGaussian();
      outcome.results["bound_asserted"] = options.law.IsGaussian();
      if (!common.plot.empty()) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "R,empirical,ci_lower,ci_upper,bound\n";
        for (const auto& e : report.estimates) {
          csv << e.radius << "," << e.empirical << "," << e.ci.lower << "," << e.ci.upper
              << "," << e.bound << "\n";
        }
        WriteText(common.plot, csv.str(), out);
      }
    } else if (lemma->parsed()) {
      kind = "lemma";
      const auto sigmas = ParseNumbers(sigma_spec, "sigma");
      const auto lambdas = ParseNumbers(pointwise_spec, "pointwise");
      config["sigma"] = sigmas;
      config["events"] = events;
      config["pointwise"] = lambdas;
      json checks = json::array();
      for (double sigma : sigmas) {
        if (!(sigma > 0.0)) throw ConfigError("sigma: must be positive");
        for (const auto& spec : events) {
          const auto r = LemmaCheck(sigma, ParseLemmaEvent(spec, sigma));
          outcome.violated = outcome.violated || !r.holds;
          checks.push_back({{"sigma", sigma},
                            {"event", spec},
                            {"resolved", r.event.ToString()},
                            {"nu", r.nu},
                            {"integral", r.integral},
                            {"lhs", r.lhs},
                            {"rhs", r.rhs},
                            {"rhs_quarter", r.rhs_quarter},
                            {"holds", r.holds},
                            {"holds_quarter", r.holds_quarter}});
        }
      }
      json pointwise = json::array();
      for (double lambda : lambdas) {
        const double exact = PointwiseExactProbability(lambda);
        const double bound = PointwiseBound(lambda);
        outcome.violated = outcome.violated || exact > bound;
        pointwise.push_back(
            {{"lambda", lambda}, {"exact", exact}, {"bound", bound}, {"holds", exact <= bound}});
      }
      outcome.results["lemma_constant"] = kLemmaConstant;
      outcome.results["quarter_constant"] = kQuarter;
      outcome.results["checks"] = checks;
      outcome.results["pointwise"] = pointwise;
    } else if (rigidity->parsed()) {
      kind = "rigidity";
      const auto m1 = ParseModel(ReadJsonFile(model1_path));
      const auto m2 = ParseModel(ReadJsonFile(model2_path));
      if (m1.Dimension() != m2.Dimension()) {
        throw ConfigError("model2: dimension " + std::to_string(m2.Dimension()) +
                          " differs from model1's " + std::to_string(m1.Dimension()) +
                          "; equivalent curves have the same dimension");
      }
      const auto points = points_spec == "auto"
                              ? SunflowerPoints(4 * m1.Dimension(), 0.5)
                              : ReadPoints(points_spec);
      config["model1"] = ModelToJson(m1);
      config["model2"] = ModelToJson(m2);
      config["points"] = points_spec;
      config["riesz_radius"] = riesz_radius;
      const auto riesz =
          RieszCompare(m1, m2, GridPoints(Domain::Disk(0.0, riesz_radius), 6, 6));
      outcome.results["riesz"] = {{"max_abs_laplacian", riesz.max_abs_laplacian},
                                  {"tolerance", kHarmonicTolerance},
                                  {"same_measure", riesz.same_measure},
                                  {"step", riesz.step}};
      if (riesz.same_measure) {
        const auto cert = RecoverEquivalence(m1, m2, points);
        json g = json::array();
        for (std::size_t i = 0; i < cert.points.size(); ++i) {
          g.push_back({{"z", ComplexJson(cert.points[i])}, {"g", ComplexJson(cert.g_values[i])}});
        }
        outcome.results["certificate"] = {{"U", MatrixJson(cert.u)},
                                          {"g_values", g},
                                          {"residual", cert.residual},
                                          {"unitarity_defect", cert.unitarity_defect},
                                          {"valid", cert.Valid()}};
        outcome.violated = !cert.Valid();
      } else {
        outcome.results["certificate"] = nullptr;
        outcome.violated = true;
      }
      if (polarize_order >= 0) {
        const auto table = Polarize([&](Complex z) { return std::exp(m1.LogDiagonal(z)); },
                                    0.0, polarize_order);
        double error = 0.0;
        const auto probe = SunflowerPoints(24, 0.1);
        for (auto z : probe) {
          for (auto w : probe) error = std::max(error, std::abs(table.Evaluate(z, w) - m1.Kernel(z, w)));
        }
        config["polarize"] = polarize_order;
        outcome.results["polarization"] = {{"order", table.order},
                                           {"notice", table.notice},
                                           {"condition", table.condition},
                                           {"coefficients", MatrixJson(table.coefficients)},
                                           {"max_error_bidisk_0.1", error}};
      }
    } else if (poly->parsed()) {
      kind = "poly-lemma";
      if (variables != 1 && variables != 2) throw ConfigError("variables: must be 1 or 2");
      const auto p = ParsePolynomial(terms, variables);
      const auto e = ParsePolyEvent(event_spec);
      const int d = degree >= 0 ? degree : p.Degree();
      config["terms"] = terms;
      config["variables"] = variables;
      config["degree"] = d;
      config["event"] = event_spec;
      config["trials"] = trials;
      CheckTrials(trials);
      const auto r = PolynomialLemmaCheck(p, d, e, trials, common.seed, common.workers);
      outcome.results = {{"degree", r.degree},
                         {"trials", r.trials},
                         {"in_event", r.in_event},
                         {"nu", r.nu},
                         {"mean_event", r.mean_event},
                         {"mean_all", r.mean_all},
                         {"difference", r.difference},
                         {"c_empirical", r.c_empirical},
                         {"c_formula", "nu * exp(|difference| / (2 d))"},
                         {"finite", r.finite}};
      outcome.violated = !r.finite;
    }

    WriteText(common.out, Report(kind, config, outcome.results), out);
    if (outcome.violated) {
      err << "gafzeros " << kind << ": a checked bound was violated\n";
      return kExitViolation;
    }
    return kExitOk;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const OutsideDomain& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const BoundaryZeroError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DegreeDropError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace gafzeros
