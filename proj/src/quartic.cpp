#include "psdfact/quartic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace psdfact {

double cardano_minimize(const QuarticCoeffs& c) {
  const double c3 = c.c3, c2 = c.c2, c1 = c.c1, c0 = c.c0;
  const double a = (3.0 * c3 * c1 - c2 * c2) / (3.0 * c3 * c3);
  const double b = (2.0 * c2 * c2 * c2 - 9.0 * c3 * c2 * c1 + 27.0 * c3 * c3 * c0) /
                   (27.0 * c3 * c3 * c3);
  const double delta = 4.0 * a * a * a + 27.0 * b * b;

  double t = 0.0;
  if (delta <= 0.0) {
    // a == 0 forces b == 0 here: triple root at t = 0.
    if (a < 0.0) {
      const double r = 2.0 * std::sqrt(-a / 3.0);
      const double arg = std::clamp(3.0 * b / (2.0 * a) * std::sqrt(-3.0 / a), -1.0, 1.0);
      const double theta = std::acos(arg) / 3.0;
      const double t0 = r * std::cos(theta);
      const double t1 = r * std::cos(theta + 2.0 * std::numbers::pi / 3.0);
      const auto depressed = [&](double s) { return s * s * s * s / 4.0 + a * s * s / 2.0 + b * s; };
      t = depressed(t0) < depressed(t1) ? t0 : t1;
    }
  } else {
    const double s = std::sqrt(delta / 27.0);
    t = std::cbrt(0.5 * (-b + s)) + std::cbrt(0.5 * (-b - s));
  }
  return t - c2 / (3.0 * c3);
}

namespace {

// Newton steps on f' from x, kept only while they lower f.
double polish(const QuarticCoeffs& c, double x) {
  for (int it = 0; it < 3; ++it) {
    const double h = c.curvature(x);
    if (!(h > 0.0)) break;
    const double next = x - c.derivative(x) / h;
    if (!std::isfinite(next) || !(c.value(next) <= c.value(x))) break;
    x = next;
  }
  return x;
}

}  // namespace

double minimize_quartic_safe(const QuarticCoeffs& c) {
  const double scale = std::max({1.0, std::abs(c.c2), std::abs(c.c1), std::abs(c.c0)});
  if (c.c3 > 1e-12 * scale) {
    const double x = cardano_minimize(c);
    if (!std::isfinite(x)) return 0.0;
    return polish(c, x);
  }

  // Leading term negligible: f is (at most) cubic.
  const double tiny = 1e-12 * scale;
  if (std::abs(c.c2) <= tiny) {
    if (c.c1 > tiny) return -c.c0 / c.c1;
    return 0.0;
  }
  // f' = c2 x² + c1 x + c0; the local minimum is the root where f'' = 2 c2 x + c1 > 0.
  const double disc = c.c1 * c.c1 - 4.0 * c.c2 * c.c0;
  if (disc <= 0.0) return 0.0;
  const double sq = std::sqrt(disc);
  const double r1 = (-c.c1 + sq) / (2.0 * c.c2);
  const double r2 = (-c.c1 - sq) / (2.0 * c.c2);
  const double x = (2.0 * c.c2 * r1 + c.c1 > 0.0) ? r1 : r2;
  return c.value(x) < 0.0 ? x : 0.0;
}

}  // namespace psdfact
