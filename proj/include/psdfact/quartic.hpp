#pragma once

namespace psdfact {

/// Derivative coefficients of f(x) = c3 x⁴/4 + c2 x³/3 + c1 x²/2 + c0 x,
/// i.e. f'(x) = c3 x³ + c2 x² + c1 x + c0.
struct QuarticCoeffs {
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  double value(double x) const {
    return ((c3 * x / 4.0 + c2 / 3.0) * x + c1 / 2.0) * x * x + c0 * x;
  }
  double derivative(double x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
  double curvature(double x) const { return (3.0 * c3 * x + 2.0 * c2) * x + c1; }
};

/// Global minimizer of the quartic via Cardano's method on its derivative.
/// Requires c3 > 0. When the depressed cubic has three real roots only the
/// outer two are candidates (the middle one is a local maximum); the larger
/// root is kept only when strictly better.
double cardano_minimize(const QuarticCoeffs& c);

/// cardano_minimize with a guard for a vanishing leading coefficient
/// (c3 <= 1e-12 * max(1, |c2|, |c1|, |c0|)) and a Newton polish of the
/// closed-form root. Returns 0 when no direction improves on x = 0.
double minimize_quartic_safe(const QuarticCoeffs& c);

}  // namespace psdfact
