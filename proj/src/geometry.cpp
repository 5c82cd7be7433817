#include "tam/geometry.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tam/sphere.hpp"

namespace tam {

Box::Box(std::vector<Interval> bounds) : bounds_(std::move(bounds)) {
  if (bounds_.empty()) throw DomainError("box must have positive dimension");
  for (const auto& iv : bounds_) {
    if (!(iv.lo < iv.hi)) {
      std::ostringstream os;
      os << "degenerate interval [" << iv.lo << ", " << iv.hi << "]";
      throw DomainError(os.str());
    }
  }
}

bool Box::contains(const RealVector& p, double slack) const {
  if (p.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    double pad = slack * std::max(1.0, bounds_[i].length());
    if (p[i] < bounds_[i].lo - pad || p[i] > bounds_[i].hi + pad) return false;
  }
  return true;
}

RealVector Box::clamp(const RealVector& p) const {
  RealVector q = p;
  for (int i = 0; i < dim() && i < p.size(); ++i) {
    q[i] = std::min(std::max(q[i], bounds_[i].lo), bounds_[i].hi);
  }
  return q;
}

RealVector Box::center() const {
  RealVector c(dim());
  for (int i = 0; i < dim(); ++i) c[i] = 0.5 * (bounds_[i].lo + bounds_[i].hi);
  return c;
}

RealVector Box::from_unit(const RealVector& u) const {
  RealVector p(dim());
  for (int i = 0; i < dim(); ++i) {
    p[i] = bounds_[i].lo + u[i] * bounds_[i].length();
  }
  return p;
}

SmoothMap SmoothMap::restrict(const ParamDomain& sub) const {
  for (int i = 0; i < sub.dim(); ++i) {
    if (sub.box.bound(i).lo < domain.box.bound(i).lo - 1e-12 ||
        sub.box.bound(i).hi > domain.box.bound(i).hi + 1e-12) {
      throw DomainError("restriction is not a sub-box of the domain");
    }
  }
  SmoothMap r = *this;
  r.domain = sub;
  r.name = name + "|sub";
  return r;
}

RealVector eval_map(const SmoothMap& m, const RealVector& l) {
  if (!m.domain.box.contains(l, 1e-12)) {
    throw DomainError("parameter outside the domain of map '" + m.name + "'");
  }
  RealVector x = m.eval(l);
  if (!m.codomain.box.contains(x, 1e-9)) {
    throw DomainError("map '" + m.name + "' escapes its chart");
  }
  return x;
}

namespace {

// Signed steps that keep l +/- h e_a inside the box, shrinking at edges.
std::pair<double, double> fitted_steps(const Box& box, const RealVector& l,
                                       int axis, double h) {
  const Interval& iv = box.bound(axis);
  double up = std::min(h, iv.hi - l[axis]);
  double down = std::min(h, l[axis] - iv.lo);
  if (up < 0.0) up = 0.0;
  if (down < 0.0) down = 0.0;
  if (up + down < 1e-6 * h) {
    throw DomainError("difference stencil cannot fit after clamping");
  }
  return {up, down};
}

}  // namespace

RealVector partial_deriv(const SmoothMap& m, const RealVector& l, int axis,
                         double h) {
  if (axis < 0 || axis >= m.domain.dim()) {
    throw DomainError("axis out of range");
  }
  if (!m.domain.box.contains(l, 1e-12)) {
    throw DomainError("parameter outside the domain of map '" + m.name + "'");
  }
  if (m.analytic_jacobian) {
    return (*m.analytic_jacobian)(l).col(axis);
  }
  if (h <= 0.0) h = default_step(l);
  auto [up, down] = fitted_steps(m.domain.box, l, axis, h);
  RealVector lp = l, lm = l;
  lp[axis] += up;
  lm[axis] -= down;
  return (m.eval(lp) - m.eval(lm)) / (up + down);
}

RealVector second_partial(const SmoothMap& m, const RealVector& l, int a,
                          int b, double h) {
  if (a < 0 || a >= m.domain.dim() || b < 0 || b >= m.domain.dim()) {
    throw DomainError("axis out of range");
  }
  if (h <= 0.0) h = default_step(l);
  // symmetric step in axis a, shrunk to fit; first partials handle axis b
  const Interval& iv = m.domain.box.bound(a);
  double ha = std::min({h, iv.hi - l[a], l[a] - iv.lo});
  if (ha < 1e-6 * h) {
    throw DomainError("second-difference stencil cannot fit after clamping");
  }
  RealVector lp = l, lm = l;
  lp[a] += ha;
  lm[a] -= ha;
  return (partial_deriv(m, lp, b, h) - partial_deriv(m, lm, b, h)) / (2.0 * ha);
}

SmoothMap identity_map(const Box& box, const std::string& name) {
  SmoothMap m;
  m.domain = ParamDomain{box};
  m.codomain = ChartDomain{box, name + "-chart"};
  m.eval = [](const RealVector& l) { return l; };
  int k = box.dim();
  m.analytic_jacobian = [k](const RealVector&) {
    return RealMatrix(RealMatrix::Identity(k, k));
  };
  m.name = name;
  return m;
}

SmoothMap constant_map(const ParamDomain& domain, const ChartDomain& codomain,
                       const RealVector& value) {
  if (!codomain.box.contains(value)) {
    throw DomainError("constant value lies outside the chart");
  }
  SmoothMap m;
  m.domain = domain;
  m.codomain = codomain;
  m.eval = [value](const RealVector&) { return value; };
  int k = domain.dim();
  int n = codomain.dim();
  m.analytic_jacobian = [n, k](const RealVector&) {
    return RealMatrix(RealMatrix::Zero(n, k));
  };
  m.name = "constant";
  return m;
}

SmoothMap polynomial_map(const ParamDomain& domain, const ChartDomain& codomain,
                         std::vector<MonomialTerm> terms,
                         const std::string& name) {
  const int k = domain.dim();
  const int n = codomain.dim();
  for (const auto& t : terms) {
    if (static_cast<int>(t.powers.size()) != k || t.coeff.size() != n) {
      throw DomainError("monomial term has wrong arity");
    }
  }
  SmoothMap m;
  m.domain = domain;
  m.codomain = codomain;
  m.eval = [terms, n](const RealVector& l) {
    RealVector x = RealVector::Zero(n);
    for (const auto& t : terms) {
      double mono = 1.0;
      for (std::size_t i = 0; i < t.powers.size(); ++i) {
        mono *= std::pow(l[static_cast<int>(i)], t.powers[i]);
      }
      x += mono * t.coeff;
    }
    return x;
  };
  m.analytic_jacobian = [terms, n, k](const RealVector& l) {
    RealMatrix J = RealMatrix::Zero(n, k);
    for (const auto& t : terms) {
      for (int a = 0; a < k; ++a) {
        if (t.powers[a] == 0) continue;
        double mono = static_cast<double>(t.powers[a]);
        for (int i = 0; i < k; ++i) {
          int p = t.powers[i] - (i == a ? 1 : 0);
          mono *= std::pow(l[i], p);
        }
        J.col(a) += mono * t.coeff;
      }
    }
    return J;
  };
  m.name = name;
  return m;
}

SmoothMap linear_map(const ParamDomain& domain, const ChartDomain& codomain,
                     const RealMatrix& A) {
  std::vector<MonomialTerm> terms;
  for (int a = 0; a < domain.dim(); ++a) {
    MonomialTerm t;
    t.powers.assign(domain.dim(), 0);
    t.powers[a] = 1;
    t.coeff = A.col(a);
    terms.push_back(std::move(t));
  }
  return polynomial_map(domain, codomain, std::move(terms), "linear");
}

namespace {

Box box_from_json(const nlohmann::json& j) {
  std::vector<Interval> bounds;
  for (const auto& iv : j) {
    bounds.push_back(Interval{iv.at(0).get<double>(), iv.at(1).get<double>()});
  }
  return Box(std::move(bounds));
}

}  // namespace

SmoothMap map_from_json(const nlohmann::json& config) {
  const std::string family = config.at("family").get<std::string>();
  if (family == "identity") {
    return identity_map(box_from_json(config.at("domain")));
  }
  if (family == "constant") {
    ParamDomain dom{box_from_json(config.at("domain"))};
    ChartDomain chart{box_from_json(config.at("codomain"))};
    RealVector v(chart.dim());
    const auto& jv = config.at("value");
    for (int i = 0; i < v.size(); ++i) v[i] = jv.at(i).get<double>();
    return constant_map(dom, chart, v);
  }
  if (family == "polynomial") {
    ParamDomain dom{box_from_json(config.at("domain"))};
    ChartDomain chart{box_from_json(config.at("codomain"))};
    std::vector<MonomialTerm> terms;
    for (const auto& jt : config.at("terms")) {
      MonomialTerm t;
      for (const auto& p : jt.at("powers")) t.powers.push_back(p.get<int>());
      const auto& jc = jt.at("coeff");
      t.coeff.resize(static_cast<int>(jc.size()));
      for (int i = 0; i < t.coeff.size(); ++i) t.coeff[i] = jc.at(i).get<double>();
      terms.push_back(std::move(t));
    }
    return polynomial_map(dom, chart, std::move(terms));
  }
  if (family == "great_circle") {
    double tilt = config.value("tilt", 0.5);
    return great_circle(tilt);
  }
  if (family == "latitude_circle") {
    double colat = config.at("colatitude").get<double>();
    return latitude_circle(colat);
  }
  throw DomainError("unknown map family '" + family + "'");
}

SmoothMap map_from_json_text(const std::string& text) {
  return map_from_json(nlohmann::json::parse(text));
}

}  // namespace tam
