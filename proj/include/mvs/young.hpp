#pragma once

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mvs/core.hpp"

namespace mvs {

/// Oscillation atom: probability weight at (λ₁, λ′) ∈ R⁺ × R^n, λ₁ ~ h, λ′ ~ √h u.
struct Atom {
  double weight = 1.0;
  double l1 = 0.0;
  Vec2 lp;
};

/// Concentration-angle atom on the nonhomogeneous sphere |β₁|^{2p} + |β′|^{2q} = 1.
struct SphereAtom {
  double weight = 1.0;
  double b1 = 0.0;
  Vec2 bp;
};

/// Growth exponents (p, q) of the density and of √h u. Euler: (γ, 2); SH: (2, 2).
struct Exponents {
  double p = 2.0;
  double q = 2.0;

  static Exponents for_model(const ModelParams& params) { return {params.density_exponent(), 2.0}; }
  friend bool operator==(const Exponents&, const Exponents&) = default;
};

/// Generalized Young measure data for one cell: ν as atoms, the density of
/// m_t with respect to the cell measure, and ν∞ as sphere atoms.
struct YoungMeasureCell {
  std::vector<Atom> atoms;
  double conc_mass = 0.0;
  std::vector<SphereAtom> sphere_atoms;

  /// Throws std::invalid_argument when weights do not sum to one, a support
  /// point has λ₁ < 0 / β₁ < 0, or a sphere atom is off the sphere (tol 1e-12).
  void validate(const Exponents& e, double tol = 1e-12) const;
};

/// One time slice m_t of a generalized Young measure on the torus.
struct YoungMeasureField {
  TorusGrid grid;
  double t = 0.0;
  Exponents exponents;
  std::vector<YoungMeasureCell> cells;

  YoungMeasureField(TorusGrid g, double time, Exponents e)
      : grid(g), t(time), exponents(e), cells(g.size()) {}

  void validate(double tol = 1e-12) const;
};

enum class Shape { Scalar, Vector, Matrix };

using Value = std::variant<double, Vec2, Mat2>;

Shape shape_of(const Value& v);
Value zero_value(Shape shape);
Value add(const Value& a, const Value& b);
Value scale(double s, const Value& a);
/// Largest absolute component.
double max_abs(const Value& v);

/// A function of (λ₁, λ′) together with its p-q recession function
/// g∞(β₁, β′) = lim g(s^q β₁, s^p β′) / s^{pq}.
struct Integrand {
  std::string name;
  Shape shape = Shape::Scalar;
  std::function<Value(double l1, const Vec2& lp)> evaluate;
  std::function<Value(double b1, const Vec2& bp)> recession;  // empty ⇒ identically 0

  bool zero_recession() const { return !recession; }

  /// α g₁ + g₂, recession combined the same way.
  static Integrand linear_combination(double alpha, const Integrand& g1, const Integrand& g2);
};

/// Named integrands used by the measure-valued formulation:
/// "h", "h^p" (h^γ for Euler, h² for SH), "hu", "hu(x)u", "h|u|^2", "h|u|".
std::map<std::string, Integrand> catalog(const Exponents& exponents);

/// ∑ᵢ wᵢ g(λ₁ᵢ, λ′ᵢ) + m ∑ⱼ ωⱼ g∞(β₁ⱼ, β′ⱼ) for a single cell.
/// Throws std::invalid_argument when g returns a value of the wrong shape.
Value cell_moment(const YoungMeasureCell& cell, const Integrand& g);

/// Per-cell moment ("barred quantity") of g.
std::vector<Value> moment(const YoungMeasureField& field, const Integrand& g);

/// Per-cell scalar moment; throws when g is not scalar-valued.
std::vector<double> scalar_moment(const YoungMeasureField& field, const Integrand& g);

/// Dirac field ν = δ_(h, √h u), m = 0.
YoungMeasureField from_state(const ConservedState& state, const ModelParams& params,
                             double floor = kDefaultHeightFloor);

/// Anisotropic radius r = (λ₁^{2p} + |λ′|^{2q})^{1/(2pq)}.
double anisotropic_radius(double l1, const Vec2& lp, const Exponents& e);

/// Projection (λ₁ / r^q, λ′ / r^p) onto the nonhomogeneous unit sphere.
SphereAtom project_to_sphere(double l1, const Vec2& lp, const Exponents& e);

/// Empirical generalized Young measure of an ensemble of states at equal time.
///
/// Samples with anisotropic radius r <= cutoff become atoms of weight 1/K.
/// A sample with r > cutoff contributes r^{pq}/K to the concentration mass and
/// a sphere atom at its projection; its probability weight is moved to an atom
/// at the origin so ν stays a probability measure. Throws std::invalid_argument
/// on an empty ensemble, mismatched grids or times, or cutoff <= 0.
YoungMeasureField from_ensemble(const std::vector<ConservedState>& states, const ModelParams& params,
                                double cutoff, double floor = kDefaultHeightFloor);

/// Resolvent of the monotone map w ↦ w + d B(w) - f(x): solves w + d B(w) ∋ v + f.
Vec2 friction_resolvent(const Vec2& v, const Vec2& f, double d);

/// Maps every atom's λ′ through the friction resolvent (single-valued),
/// turning a measure in the unresolved variable into one in √h u.
/// Savage-Hutter only; sphere atoms are unchanged.
YoungMeasureField pushforward_resolvent(const YoungMeasureField& field, const ModelParams& params);

/// Inverse direction: λ′ ↦ λ′ + d λ′/|λ′| - f, selecting -f at λ′ = 0.
YoungMeasureField resolvent_preimage(const YoungMeasureField& field, const ModelParams& params);

/// |g(s^q β₁, s^p β′)/s^{pq} - g∞(β₁, β′)| at s = s_max (max over components).
double recession_check(const Integrand& g, double b1, const Vec2& bp, double s_max,
                       const Exponents& e);

}  // namespace mvs
