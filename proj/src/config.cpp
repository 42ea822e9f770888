#include "gafzeros/config.hpp"

#include <fstream>
#include <set>

namespace gafzeros {

namespace {

using nlohmann::json;

const json& Require(const json& doc, const std::string& key,
                    const std::string& prefix) {
  if (!doc.contains(key)) throw ConfigError(prefix + key + ": required field missing");
  return doc.at(key);
}

double Number(const json& value, const std::string& field) {
  if (!value.is_number()) throw ConfigError(field + ": expected a number");
  return value.get<double>();
}

int Integer(const json& value, const std::string& field) {
  if (!value.is_number_integer()) throw ConfigError(field + ": expected an integer");
  return value.get<int>();
}

void RejectUnknown(const json& doc, const std::set<std::string>& known,
                   const std::string& prefix) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!known.count(it.key())) throw ConfigError(prefix + it.key() + ": unknown field");
  }
}

Eigen::MatrixXcd ParseMatrix(const json& value, const std::string& field) {
  if (!value.is_array() || value.empty()) {
    throw ConfigError(field + ": expected a non-empty array of rows");
  }
  const std::size_t cols = value.front().is_array() ? value.front().size() : 0;
  if (cols == 0) throw ConfigError(field + ": rows must be non-empty arrays");
  Eigen::MatrixXcd m(value.size(), cols);
  for (std::size_t i = 0; i < value.size(); ++i) {
    const std::string row = field + "[" + std::to_string(i) + "]";
    if (!value[i].is_array() || value[i].size() != cols) {
      throw ConfigError(row + ": every row needs " + std::to_string(cols) + " entries");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          ParseComplex(value[i][j], row + "[" + std::to_string(j) + "]");
    }
  }
  return m;
}

json ComplexToJson(Complex c) {
  if (c.imag() == 0.0) return c.real();
  return json::array({c.real(), c.imag()});
}

// Re-throws construction errors with the field that caused them.
template <typename Fn>
auto Field(const std::string& field, Fn fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

}  // namespace

Complex ParseComplex(const json& value, const std::string& field) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (value.is_array() && value.size() == 2 && value[0].is_number() &&
      value[1].is_number()) {
    return {value[0].get<double>(), value[1].get<double>()};
  }
  throw ConfigError(field + ": expected a number or [re, im]");
}

Domain EnsembleConfig::WorkingDomain() const {
  if (domain) return *domain;
  if (family.variant() == CurveFamily::Variant::kHyperbolic) {
    throw ConfigError(
        "ensemble.domain: required for hyperbolic ensembles (a disk of radius "
        "< 1)");
  }
  return family.domain();
}

json EnsembleConfig::ToJson() const {
  json out;
  switch (family.variant()) {
    case CurveFamily::Variant::kPlanar:
      out["variant"] = "planar";
      out["window"] = family.domain().radius();
      break;
    case CurveFamily::Variant::kHyperbolic:
      out["variant"] = "hyperbolic";
      break;
    case CurveFamily::Variant::kKostlan:
      out["variant"] = "kostlan";
      out["degree"] = family.kostlan_degree();
      out["window"] = family.domain().radius();
      break;
    case CurveFamily::Variant::kExplicit: {
      out["variant"] = "explicit";
      out["window"] = family.domain().radius();
      json rows = json::array();
      const auto& c = family.coefficients();
      for (Eigen::Index i = 0; i < c.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < c.cols(); ++j) row.push_back(ComplexToJson(c(i, j)));
        rows.push_back(row);
      }
      out["coefficients"] = rows;
      break;
    }
  }
  if (domain) out["domain"] = domain->ToString();
  out["epsilon"] = policy.epsilon;
  out["max_order"] = policy.max_order;
  out["law"] = law;
  return out;
}

EnsembleConfig ParseEnsemble(const json& doc) {
  const std::string p = "ensemble.";
  if (!doc.is_object()) throw ConfigError("ensemble: expected a JSON object");
  RejectUnknown(doc,
                {"variant", "window", "degree", "coefficients", "domain",
                 "epsilon", "max_order", "law"},
                p);
  const json& variant_json = Require(doc, "variant", p);
  if (!variant_json.is_string()) throw ConfigError(p + "variant: expected a string");
  const std::string variant = variant_json.get<std::string>();

  EnsembleConfig config;
  const double window = doc.contains("window")
                            ? Number(doc.at("window"), p + "window")
                            : CurveFamily::kDefaultWindow;
  if (!(window > 0.0)) throw ConfigError(p + "window: must be positive");

  if (variant == "planar") {
    if (!doc.contains("window")) throw ConfigError(p + "window: required for planar");
    config.family = CurveFamily::Planar(window);
  } else if (variant == "hyperbolic") {
    if (doc.contains("window")) throw ConfigError(p + "window: hyperbolic lives on the unit disk");
    config.family = CurveFamily::Hyperbolic();
  } else if (variant == "kostlan") {
    const int degree = Integer(Require(doc, "degree", p), p + "degree");
    if (degree < 1) throw ConfigError(p + "degree: must be a positive integer");
    config.family = CurveFamily::Kostlan(degree, window);
  } else if (variant == "explicit") {
    auto matrix = ParseMatrix(Require(doc, "coefficients", p), p + "coefficients");
    config.family = Field(p + "coefficients",
                          [&] { return CurveFamily::Explicit(matrix, window); });
  } else {
    throw ConfigError(p + "variant: unknown variant '" + variant +
                      "' (planar, hyperbolic, kostlan, explicit)");
  }
  if (variant != "kostlan" && doc.contains("degree")) {
    throw ConfigError(p + "degree: only kostlan takes a degree");
  }
  if (variant != "explicit" && doc.contains("coefficients")) {
    throw ConfigError(p + "coefficients: only explicit takes coefficients");
  }

  if (doc.contains("domain")) {
    if (!doc.at("domain").is_string()) throw ConfigError(p + "domain: expected a region string");
    const Domain d = Field(p + "domain",
                           [&] { return ParseRegion(doc.at("domain").get<std::string>()); });
    if (!config.family.domain().ContainsDomain(d) ||
        (variant == "hyperbolic" && d.MaxModulus() >= 1.0)) {
      throw ConfigError(p + "domain: " + d.ToString() + " is outside the " +
                        config.family.Name() + " domain");
    }
    config.domain = d;
  }
  if (doc.contains("epsilon")) {
    config.policy.epsilon = Number(doc.at("epsilon"), p + "epsilon");
    if (!(config.policy.epsilon > 0.0) || config.policy.epsilon >= 1.0) {
      throw ConfigError(p + "epsilon: must be in (0, 1)");
    }
  }
  if (doc.contains("max_order")) {
    config.policy.max_order = Integer(doc.at("max_order"), p + "max_order");
    if (config.policy.max_order < 1) throw ConfigError(p + "max_order: must be positive");
  }
  if (doc.contains("law")) {
    if (!doc.at("law").is_string()) throw ConfigError(p + "law: expected a string");
    config.law = doc.at("law").get<std::string>();
    Field(p + "law", [&] { return CoefficientLaw::FromName(config.law); });
  }
  return config;
}

KernelModel ParseModel(const json& doc) {
  const std::string p = "model.";
  if (!doc.is_object()) throw ConfigError("model: expected a JSON object");
  RejectUnknown(doc, {"coefficients", "log_multiplier"}, p);
  auto matrix = ParseMatrix(Require(doc, "coefficients", p), p + "coefficients");
  std::vector<Complex> q;
  if (doc.contains("log_multiplier")) {
    const json& value = doc.at("log_multiplier");
    if (!value.is_array()) throw ConfigError(p + "log_multiplier: expected an array");
    for (std::size_t k = 0; k < value.size(); ++k) {
      q.push_back(ParseComplex(value[k], p + "log_multiplier[" + std::to_string(k) + "]"));
    }
  }
  return Field(p + "coefficients", [&] { return KernelModel(matrix, q); });
}

json ModelToJson(const KernelModel& model) {
  json rows = json::array();
  const auto& c = model.coefficients();
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < c.cols(); ++j) row.push_back(ComplexToJson(c(i, j)));
    rows.push_back(row);
  }
  json q = json::array();
  for (auto v : model.log_multiplier()) q.push_back(ComplexToJson(v));
  return {{"coefficients", rows}, {"log_multiplier", q}};
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON (" + e.what() + ")");
  }
}

}  // namespace gafzeros
