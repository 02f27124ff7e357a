// Independent oracles used by the tests: power-series modified Bessel
// functions, dense brute-force geometry evaluations, and reference
// quadratures. Kept deliberately separate from the library code paths they
// check.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "sobtrace/geometry.hpp"

namespace oracles {

inline double bessel_i0(double x) {
  const double t = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= t / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

inline double bessel_i1(double x) {
  const double t = 0.25 * x * x;
  double term = 1.0, sum = 1.0;  // sum of t^k / (k! (k+1)!)
  for (int k = 1; k < 200; ++k) {
    term *= t / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return 0.5 * x * sum;
}

constexpr double kEulerGamma = 0.57721566490153286;

inline double bessel_k0(double x) {
  const double t = 0.25 * x * x;
  double sum = 0.0, term = 1.0, harmonic = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= t / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    sum += term * harmonic;
    if (term * harmonic < 1e-18 * (1.0 + sum)) break;
  }
  return -(std::log(0.5 * x) + kEulerGamma) * bessel_i0(x) + sum;
}

inline double bessel_k1(double x) {
  const double t = 0.25 * x * x;
  // sum of (psi(k+1) + psi(k+2)) t^k / (k! (k+1)!)
  double term = 1.0;
  double psi1 = -kEulerGamma;        // psi(k+1)
  double psi2 = 1.0 - kEulerGamma;   // psi(k+2)
  double sum = psi1 + psi2;
  for (int k = 1; k < 200; ++k) {
    term *= t / (static_cast<double>(k) * (k + 1));
    psi1 += 1.0 / k;
    psi2 += 1.0 / (k + 1);
    sum += term * (psi1 + psi2);
    if (term * (psi1 + psi2) < 1e-18 * (1.0 + std::abs(sum))) break;
  }
  return std::log(0.5 * x) * bessel_i1(x) + 1.0 / x - 0.25 * x * sum;
}

/// sigma_{2,2}(B_R) in d=2: minimizer is I_0(r), sigma = sqrt(I_1(R)/I_0(R)).
inline double sigma22_ball_2d(double R) { return std::sqrt(bessel_i1(R) / bessel_i0(R)); }

/// sigma_{2,2}(B_R) in d=3: minimizer is sinh(r)/r.
inline double sigma22_ball_3d(double R) {
  const double u = std::sinh(R) / R;
  const double du = (R * std::cosh(R) - std::sinh(R)) / (R * R);
  return std::sqrt(du / u);
}

/// sigma~_{2,2}(A_{R1,R2}) in d=2: u = I0(r)K1(R1) + K0(r)I1(R1) has zero
/// flux at R1; sigma = sqrt(u'(R2)/u(R2)).
inline double sigma22_shell_2d(double R1, double R2) {
  const double k1 = bessel_k1(R1), i1 = bessel_i1(R1);
  const double u = bessel_i0(R2) * k1 + bessel_k0(R2) * i1;
  const double du = bessel_i1(R2) * k1 - bessel_k1(R2) * i1;
  return std::sqrt(du / u);
}

/// Dense angular quadrature of the support function: mean width / 2 and the
/// Steiner point, as a reference for the exact arc integration.
struct SupportAverages {
  sobtrace::geo::Vec2 steiner;
  double half_mean_width;
};

inline SupportAverages support_averages(const sobtrace::geo::ConvexPolygon& poly, int samples) {
  double sx = 0.0, sy = 0.0, sh = 0.0;
  const double pi = 3.14159265358979323846;
  for (int s = 0; s < samples; ++s) {
    const double th = 2.0 * pi * (s + 0.5) / samples;
    const sobtrace::geo::Vec2 u{std::cos(th), std::sin(th)};
    const double h = poly.support(u);
    sx += h * u.x;
    sy += h * u.y;
    sh += h;
  }
  const double dth = 2.0 * pi / samples;
  return {{sx * dth / pi, sy * dth / pi}, 0.5 * sh * dth / pi};
}

/// Dense angular brute force for the polygon-disc Hausdorff distance.
inline double hausdorff_poly_disc_dense(const sobtrace::geo::ConvexPolygon& poly,
                                        sobtrace::geo::Vec2 c, double r, int samples) {
  double best = 0.0;
  const double pi = 3.14159265358979323846;
  for (int s = 0; s < samples; ++s) {
    const double th = 2.0 * pi * s / samples;
    const sobtrace::geo::Vec2 u{std::cos(th), std::sin(th)};
    best = std::max(best, std::abs(poly.support(u) - (dot(c, u) + r)));
  }
  return best;
}

/// Brute-force center grid for the Hausdorff asymmetry with fixed radius.
inline double asymmetry_center_grid(const sobtrace::geo::ConvexPolygon& poly, double r,
                                    int grid, double span, int samples) {
  const sobtrace::geo::Vec2 c0 = poly.centroid();
  double best = 1e300;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const sobtrace::geo::Vec2 x{c0.x - span + 2.0 * span * i / (grid - 1),
                                  c0.y - span + 2.0 * span * j / (grid - 1)};
      best = std::min(best, hausdorff_poly_disc_dense(poly, x, r, samples));
    }
  }
  return best;
}

/// Stratified-random 2D quadrature over a convex polygon via rejection from
/// its bounding box; used as the independent check of the adaptive rule.
inline double stratified_polygon_integral(const sobtrace::geo::ConvexPolygon& poly,
                                          const std::function<double(sobtrace::geo::Vec2)>& f,
                                          int cells_per_side, std::uint64_t seed) {
  using sobtrace::geo::Vec2;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Vec2& v : poly.vertices()) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  std::mt19937_64 gen(seed);
  const auto uni = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  const double dx = (xmax - xmin) / cells_per_side;
  const double dy = (ymax - ymin) / cells_per_side;
  double sum = 0.0;
  for (int i = 0; i < cells_per_side; ++i) {
    for (int j = 0; j < cells_per_side; ++j) {
      const Vec2 p{xmin + (i + uni()) * dx, ymin + (j + uni()) * dy};
      if (poly.inner_distance(p) >= 0.0) sum += f(p);
    }
  }
  return sum * dx * dy;
}

}  // namespace oracles
