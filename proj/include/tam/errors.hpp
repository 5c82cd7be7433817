#pragma once

#include <stdexcept>
#include <string>

namespace tam {

/// Query point (or stencil) falls outside the relevant domain box.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A factor map is numerically singular (condition number above threshold).
class SingularFactorError : public std::runtime_error {
 public:
  explicit SingularFactorError(const std::string& what)
      : std::runtime_error(what) {}
};

/// A construction was handed data violating the transport laws.
class AxiomError : public std::runtime_error {
 public:
  explicit AxiomError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation requires a smoother section or map than was declared.
class SmoothnessError : public std::runtime_error {
 public:
  explicit SmoothnessError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Adaptive integrator could not meet its per-step error contract.
class IntegrationError : public std::runtime_error {
 public:
  explicit IntegrationError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Metric inertia is not constant across sample points.
class SignatureError : public std::runtime_error {
 public:
  explicit SignatureError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Supplied gauge matrix violates its defining relation.
class GaugeError : public std::runtime_error {
 public:
  explicit GaugeError(const std::string& what) : std::runtime_error(what) {}
};

/// Factor data breaks the conjugation gauge; carries the defect norm.
class HermiticityError : public std::runtime_error {
 public:
  HermiticityError(const std::string& what, double defect)
      : std::runtime_error(what), defect_(defect) {}
  double defect() const { return defect_; }

 private:
  double defect_;
};

}  // namespace tam
