#include "mvs/young.hpp"

#include <cmath>
#include <stdexcept>

#include "mvs/physics.hpp"

namespace mvs {

void YoungMeasureCell::validate(const Exponents& e, double tol) const {
  if (atoms.empty()) throw std::invalid_argument("cell has no oscillation atoms");
  double w = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.weight > 0.0)) throw std::invalid_argument("atom weight must be > 0");
    if (a.l1 < 0.0) throw std::invalid_argument("atom lambda_1 must be >= 0");
    w += a.weight;
  }
  if (std::abs(w - 1.0) > tol) throw std::invalid_argument("atom weights do not sum to 1");
  if (conc_mass < 0.0) throw std::invalid_argument("concentration mass must be >= 0");
  if (conc_mass == 0.0) return;
  double ws = 0.0;
  for (const SphereAtom& s : sphere_atoms) {
    if (!(s.weight > 0.0)) throw std::invalid_argument("sphere atom weight must be > 0");
    if (s.b1 < 0.0) throw std::invalid_argument("sphere atom beta_1 must be >= 0");
    const double r = std::pow(s.b1, 2.0 * e.p) + std::pow(norm(s.bp), 2.0 * e.q);
    if (std::abs(r - 1.0) > tol) throw std::invalid_argument("sphere atom is off the sphere");
    ws += s.weight;
  }
  if (std::abs(ws - 1.0) > tol) throw std::invalid_argument("sphere weights do not sum to 1");
}

void YoungMeasureField::validate(double tol) const {
  if (cells.size() != grid.size()) throw std::invalid_argument("field size does not match grid");
  for (const auto& c : cells) c.validate(exponents, tol);
}

Shape shape_of(const Value& v) { return static_cast<Shape>(v.index()); }

Value zero_value(Shape shape) {
  switch (shape) {
    case Shape::Scalar: return 0.0;
    case Shape::Vector: return Vec2{};
    case Shape::Matrix: return Mat2{};
  }
  return 0.0;
}

Value add(const Value& a, const Value& b) {
  if (a.index() != b.index()) throw std::invalid_argument("shape mismatch in add");
  return std::visit(
      [&b](const auto& x) -> Value {
        using T = std::decay_t<decltype(x)>;
        return x + std::get<T>(b);
      },
      a);
}

Value scale(double s, const Value& a) {
  return std::visit([s](const auto& x) -> Value { return s * x; }, a);
}

double max_abs(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return std::abs(*d);
  if (const auto* w = std::get_if<Vec2>(&v)) return std::max(std::abs(w->x), std::abs(w->y));
  const auto& m = std::get<Mat2>(v);
  return std::max({std::abs(m.xx), std::abs(m.xy), std::abs(m.yx), std::abs(m.yy)});
}

Integrand Integrand::linear_combination(double alpha, const Integrand& g1, const Integrand& g2) {
  if (g1.shape != g2.shape) throw std::invalid_argument("shape mismatch in linear combination");
  Integrand g;
  g.name = std::to_string(alpha) + "*" + g1.name + "+" + g2.name;
  g.shape = g1.shape;
  g.evaluate = [alpha, e1 = g1.evaluate, e2 = g2.evaluate](double l1, const Vec2& lp) {
    return add(scale(alpha, e1(l1, lp)), e2(l1, lp));
  };
  if (!g1.zero_recession() || !g2.zero_recession()) {
    const Shape shape = g1.shape;
    g.recession = [alpha, shape, r1 = g1.recession, r2 = g2.recession](double b1, const Vec2& bp) {
      const Value v1 = r1 ? r1(b1, bp) : zero_value(shape);
      const Value v2 = r2 ? r2(b1, bp) : zero_value(shape);
      return add(scale(alpha, v1), v2);
    };
  }
  return g;
}

std::map<std::string, Integrand> catalog(const Exponents& e) {
  std::map<std::string, Integrand> c;
  const double p = e.p;
  c["h"] = {"h", Shape::Scalar, [](double l1, const Vec2&) -> Value { return l1; }, {}};
  c["h^p"] = {"h^p", Shape::Scalar,
              [p](double l1, const Vec2&) -> Value { return std::pow(l1, p); },
              [p](double b1, const Vec2&) -> Value { return std::pow(b1, p); }};
  c["hu"] = {"hu", Shape::Vector,
             [](double l1, const Vec2& lp) -> Value { return std::sqrt(l1) * lp; }, {}};
  c["hu(x)u"] = {"hu(x)u", Shape::Matrix,
                 [](double, const Vec2& lp) -> Value { return outer(lp, lp); },
                 [](double, const Vec2& bp) -> Value { return outer(bp, bp); }};
  c["h|u|^2"] = {"h|u|^2", Shape::Scalar, [](double, const Vec2& lp) -> Value { return norm2(lp); },
                 [](double, const Vec2& bp) -> Value { return norm2(bp); }};
  c["h|u|"] = {"h|u|", Shape::Scalar,
               [](double l1, const Vec2& lp) -> Value { return std::sqrt(l1) * norm(lp); }, {}};
  return c;
}

Value cell_moment(const YoungMeasureCell& cell, const Integrand& g) {
  Value acc = zero_value(g.shape);
  for (const Atom& a : cell.atoms) {
    const Value v = g.evaluate(a.l1, a.lp);
    if (shape_of(v) != g.shape) throw std::invalid_argument("integrand '" + g.name + "' shape mismatch");
    acc = add(acc, scale(a.weight, v));
  }
  if (cell.conc_mass > 0.0 && !g.zero_recession()) {
    Value conc = zero_value(g.shape);
    for (const SphereAtom& s : cell.sphere_atoms) {
      const Value v = g.recession(s.b1, s.bp);
      if (shape_of(v) != g.shape)
        throw std::invalid_argument("recession of '" + g.name + "' shape mismatch");
      conc = add(conc, scale(s.weight, v));
    }
    acc = add(acc, scale(cell.conc_mass, conc));
  }
  return acc;
}

std::vector<Value> moment(const YoungMeasureField& field, const Integrand& g) {
  std::vector<Value> out;
  out.reserve(field.cells.size());
  for (const auto& c : field.cells) out.push_back(cell_moment(c, g));
  return out;
}

std::vector<double> scalar_moment(const YoungMeasureField& field, const Integrand& g) {
  if (g.shape != Shape::Scalar) throw std::invalid_argument("integrand is not scalar-valued");
  std::vector<double> out;
  out.reserve(field.cells.size());
  for (const auto& c : field.cells) out.push_back(std::get<double>(cell_moment(c, g)));
  return out;
}

namespace {

Atom atom_of(double h, const Vec2& q, double floor) {
  if (h < 0.0) throw std::invalid_argument("negative height");
  Atom a;
  a.l1 = h;
  a.lp = h > floor ? q / std::sqrt(h) : Vec2{};
  return a;
}

}  // namespace

YoungMeasureField from_state(const ConservedState& state, const ModelParams& params, double floor) {
  YoungMeasureField f(state.grid, state.t, Exponents::for_model(params));
  for (std::size_t i = 0; i < state.size(); ++i) f.cells[i].atoms = {atom_of(state.h[i], state.q[i], floor)};
  return f;
}

double anisotropic_radius(double l1, const Vec2& lp, const Exponents& e) {
  const double s = std::pow(std::abs(l1), 2.0 * e.p) + std::pow(norm(lp), 2.0 * e.q);
  return std::pow(s, 1.0 / (2.0 * e.p * e.q));
}

SphereAtom project_to_sphere(double l1, const Vec2& lp, const Exponents& e) {
  const double r = anisotropic_radius(l1, lp, e);
  if (!(r > 0.0)) throw std::invalid_argument("cannot project the origin onto the sphere");
  SphereAtom s;
  s.b1 = l1 / std::pow(r, e.q);
  s.bp = lp / std::pow(r, e.p);
  return s;
}

YoungMeasureField from_ensemble(const std::vector<ConservedState>& states, const ModelParams& params,
                                double cutoff, double floor) {
  if (states.empty()) throw std::invalid_argument("from_ensemble: empty ensemble");
  if (!(cutoff > 0.0)) throw std::invalid_argument("from_ensemble: cutoff must be > 0");
  const TorusGrid& grid = states.front().grid;
  for (const auto& s : states) {
    if (!(s.grid == grid)) throw std::invalid_argument("from_ensemble: states on different grids");
    if (s.t != states.front().t) throw std::invalid_argument("from_ensemble: states at different times");
  }

  const Exponents e = Exponents::for_model(params);
  const double pq = e.p * e.q;
  const double w = 1.0 / double(states.size());
  YoungMeasureField field(grid, states.front().t, e);

  for (std::size_t i = 0; i < grid.size(); ++i) {
    YoungMeasureCell& cell = field.cells[i];
    double escaped_weight = 0.0;
    std::vector<double> conc;
    for (const auto& s : states) {
      const Atom a = atom_of(s.h[i], s.q[i], floor);
      const double r = anisotropic_radius(a.l1, a.lp, e);
      if (r <= cutoff) {
        cell.atoms.push_back({w, a.l1, a.lp});
      } else {
        escaped_weight += w;
        SphereAtom sa = project_to_sphere(a.l1, a.lp, e);
        const double mass = w * std::pow(r, pq);
        cell.conc_mass += mass;
        sa.weight = mass;
        cell.sphere_atoms.push_back(sa);
      }
    }
    if (escaped_weight > 0.0) cell.atoms.push_back({escaped_weight, 0.0, Vec2{}});
    for (auto& sa : cell.sphere_atoms) sa.weight /= cell.conc_mass;
  }
  return field;
}

Vec2 friction_resolvent(const Vec2& v, const Vec2& f, double d) { return friction_prox(v + f, d); }

YoungMeasureField pushforward_resolvent(const YoungMeasureField& field, const ModelParams& params) {
  if (params.model != Model::SavageHutter)
    throw std::invalid_argument("pushforward_resolvent requires the Savage-Hutter model");
  YoungMeasureField out = field;
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    const Vec2 f = params.force(field.t, field.grid.center(i));
    for (Atom& a : out.cells[i].atoms) a.lp = friction_resolvent(a.lp, f, params.d);
  }
  return out;
}

YoungMeasureField resolvent_preimage(const YoungMeasureField& field, const ModelParams& params) {
  if (params.model != Model::SavageHutter)
    throw std::invalid_argument("resolvent_preimage requires the Savage-Hutter model");
  YoungMeasureField out = field;
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    const Vec2 f = params.force(field.t, field.grid.center(i));
    for (Atom& a : out.cells[i].atoms) {
      const double n = norm(a.lp);
      a.lp = n > 0.0 ? a.lp + (params.d / n) * a.lp - f : -f;
    }
  }
  return out;
}

double recession_check(const Integrand& g, double b1, const Vec2& bp, double s_max,
                       const Exponents& e) {
  const Value scaled =
      scale(1.0 / std::pow(s_max, e.p * e.q), g.evaluate(std::pow(s_max, e.q) * b1, std::pow(s_max, e.p) * bp));
  const Value rec = g.recession ? g.recession(b1, bp) : zero_value(g.shape);
  return max_abs(add(scaled, scale(-1.0, rec)));
}

}  // namespace mvs
