#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "tam/types.hpp"

namespace tam {

/// Sample at which the worst residual of a check was attained.
struct Witness {
  RealVector l;
  RealVector m;
  std::optional<RealVector> n;
  Vector vec;
};

/// Outcome of one law check: the check token, the pass threshold, the worst
/// residual over all samples, and where it happened.
struct AxiomReport {
  std::string check;
  double tolerance = 1e-9;
  double max_residual = 0.0;
  Witness worst;
  bool pass = true;
  Field field = Field::real;

  /// Bumps the stored worst case if `residual` beats it.
  void consider(double residual, const RealVector& l, const RealVector& m,
                const std::optional<RealVector>& n, const Vector& vec);
  void finalize();  // sets pass from max_residual vs tolerance

  nlohmann::json to_json() const;
};

/// Composition + identity laws reported together.
struct GroupoidReport {
  AxiomReport composition;  // K_{m->n} . K_{l->m} = K_{l->n}
  AxiomReport identity;     // K_{l->l} = id
  bool pass() const { return composition.pass && identity.pass; }
};

/// Serializes doubles at 17 significant digits with sorted keys; the report
/// writer uses this so identical runs produce identical bytes.
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace tam
