#include "tam/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tam {

namespace {

nlohmann::json real_array(const RealVector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

nlohmann::json fibre_array(const Vector& v, Field f) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) {
    if (f == Field::real) {
      a.push_back(v[i].real());
    } else {
      a.push_back(nlohmann::json::array({v[i].real(), v[i].imag()}));
    }
  }
  return a;
}

}  // namespace

void AxiomReport::consider(double residual, const RealVector& l,
                           const RealVector& m,
                           const std::optional<RealVector>& n,
                           const Vector& vec) {
  if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
  if (residual >= max_residual) {
    max_residual = residual;
    worst = Witness{l, m, n, vec};
  }
}

void AxiomReport::finalize() { pass = max_residual <= tolerance; }

nlohmann::json AxiomReport::to_json() const {
  nlohmann::json w;
  w["l"] = real_array(worst.l);
  w["m"] = real_array(worst.m);
  w["n"] = worst.n ? real_array(*worst.n) : nlohmann::json(nullptr);
  w["vector"] = fibre_array(worst.vec, field);
  nlohmann::json j;
  j["check"] = check;
  j["tolerance"] = tolerance;
  j["max_residual"] = max_residual;
  j["worst_witness"] = w;
  j["pass"] = pass;
  return j;
}

namespace {

void dump_value(const nlohmann::json& j, std::ostringstream& os, int indent,
                int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad_in << nlohmann::json(it.key()).dump() << ": ";
        dump_value(it.value(), os, indent, depth + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ",\n";
        first = false;
        os << pad_in;
        dump_value(v, os, indent, depth + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
      os << buf;
      return;
    }
    default:
      os << j.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& j, int indent) {
  std::ostringstream os;
  dump_value(j, os, indent, 0);
  os << "\n";
  return os.str();
}

}  // namespace tam
