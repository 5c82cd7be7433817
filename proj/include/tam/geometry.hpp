#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tam/errors.hpp"
#include "tam/types.hpp"

namespace tam {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

/// Axis-aligned closed box; the common carrier for chart and parameter
/// domains.  Every interval must satisfy lo < hi.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> bounds);

  int dim() const { return static_cast<int>(bounds_.size()); }
  const std::vector<Interval>& bounds() const { return bounds_; }
  const Interval& bound(int axis) const { return bounds_.at(axis); }

  bool contains(const RealVector& p, double slack = 0.0) const;
  RealVector clamp(const RealVector& p) const;
  RealVector center() const;
  /// Maps a point of the unit cube affinely into this box.
  RealVector from_unit(const RealVector& u) const;

 private:
  std::vector<Interval> bounds_;
};

/// Single-chart base domain: a named box in R^dim.
struct ChartDomain {
  Box box;
  std::string name = "chart";
  int dim() const { return box.dim(); }
};

/// Parameter neighborhood in R^k.
struct ParamDomain {
  Box box;
  int dim() const { return box.dim(); }
};

/// Map from a parameter box into a chart domain, with optional analytic
/// Jacobian.  Assumed C^1; operations needing second derivatives require C^2
/// (second_partial, and everything layered on nested derivations).
struct SmoothMap {
  ParamDomain domain;
  ChartDomain codomain;
  std::function<RealVector(const RealVector&)> eval;
  // columns indexed by parameter axis
  std::optional<std::function<RealMatrix(const RealVector&)>> analytic_jacobian;
  std::string name = "map";

  SmoothMap restrict(const ParamDomain& sub) const;
};

/// Checked evaluation: throws DomainError when l is outside the parameter box
/// or the image escapes the chart.
RealVector eval_map(const SmoothMap& m, const RealVector& l);

/// d(m)/dl^a by central difference (analytic column when available).
/// Falls back to a one-sided stencil against a box edge.
RealVector partial_deriv(const SmoothMap& m, const RealVector& l, int axis,
                         double h = 0.0);

/// Mixed second partial d^2(m)/dl^a dl^b, computed as a difference of first
/// partials so an analytic Jacobian improves accuracy when present.
RealVector second_partial(const SmoothMap& m, const RealVector& l, int a,
                          int b, double h = 0.0);

SmoothMap identity_map(const Box& box, const std::string& name = "identity");
SmoothMap constant_map(const ParamDomain& domain, const ChartDomain& codomain,
                       const RealVector& value);

/// One monomial of a polynomial map: coeff_j * prod_i l_i^powers_i per output.
struct MonomialTerm {
  std::vector<int> powers;
  RealVector coeff;
};
SmoothMap polynomial_map(const ParamDomain& domain, const ChartDomain& codomain,
                         std::vector<MonomialTerm> terms,
                         const std::string& name = "polynomial");
SmoothMap linear_map(const ParamDomain& domain, const ChartDomain& codomain,
                     const RealMatrix& A);

/// Builds a map from a JSON config naming a builtin family: "identity",
/// "constant", "polynomial", "great_circle", "latitude_circle".
SmoothMap map_from_json(const nlohmann::json& config);
SmoothMap map_from_json_text(const std::string& text);

}  // namespace tam
