#ifndef GAFZEROS_CONFIG_HPP_
#define GAFZEROS_CONFIG_HPP_

#include <optional>
#include <string>

#include <json.hpp>

#include "gafzeros/ensembles.hpp"
#include "gafzeros/rigidity.hpp"
#include "gafzeros/sampling.hpp"

namespace gafzeros {

// Config errors name the offending field, e.g. "ensemble.degree: ...".
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Ensemble descriptor; schema in docs/config.md.
struct EnsembleConfig {
  CurveFamily family = CurveFamily::Planar(1.0);
  std::optional<Domain> domain;
  TruncationPolicy policy;
  std::string law = "gaussian";

  // Working domain: the configured one, else the family's own domain.
  // Hyperbolic ensembles must configure one.
  Domain WorkingDomain() const;
  CoefficientLaw Law() const { return CoefficientLaw::FromName(law); }
  // Fully resolved descriptor with defaults filled in.
  nlohmann::json ToJson() const;
};

// A number or an [re, im] pair.
Complex ParseComplex(const nlohmann::json& value, const std::string& field);

EnsembleConfig ParseEnsemble(const nlohmann::json& doc);
KernelModel ParseModel(const nlohmann::json& doc);
nlohmann::json ModelToJson(const KernelModel& model);

// Reads and parses a JSON file; syntax errors become ConfigError.
nlohmann::json ReadJsonFile(const std::string& path);

}  // namespace gafzeros

#endif  // GAFZEROS_CONFIG_HPP_
