#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sobtrace::geo {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 v);
/// Rotates v by +90 degrees (counter-clockwise).
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

struct Disc {
  Vec2 center;
  double radius = 0.0;
};

/// Strictly convex polygon with vertices in counter-clockwise order.
///
/// Construction merges consecutive collinear vertices (normalized cross
/// product below 1e-12) and rejects anything that is not strictly convex
/// with positive area.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return verts_; }
  std::size_t size() const { return verts_.size(); }

  double area() const;
  double perimeter() const;
  Vec2 centroid() const;
  double diameter() const;

  /// True if p lies in the closed polygon (small tolerance on the boundary).
  bool contains(Vec2 p) const;

  /// min_i (b_i - n_i . p) over the edge half-planes; equals the distance to
  /// the boundary for interior points, negative outside.
  double inner_distance(Vec2 p) const;

  /// Euclidean distance from p to the closed polygon (0 inside).
  double distance_to(Vec2 p) const;

  /// Support function h(K, u) = max_x x.u for a unit direction u.
  double support(Vec2 dir) const;

  ConvexPolygon translated(Vec2 t) const;
  ConvexPolygon rotated(double angle) const;
  ConvexPolygon scaled(double s) const;

 private:
  std::vector<Vec2> verts_;
};

/// Outward unit normals and offsets of the edge half-planes {n.x <= b}.
struct EdgePlanes {
  std::vector<Vec2> normal;
  std::vector<double> offset;
};
EdgePlanes edge_planes(const ConvexPolygon& poly);

/// Inner parallel body at distance t >= 0: intersection of the edge
/// half-planes pushed inward by t. Empty once t reaches the inradius.
std::optional<ConvexPolygon> inner_parallel(const ConvexPolygon& poly, double t);

/// Largest t with nonempty inner parallel, by bisection to 1e-12 absolute.
double inradius(const ConvexPolygon& poly);

struct Quermass {
  double w0 = 0.0;  // area
  double w1 = 0.0;  // perimeter / 2
  double w2 = 0.0;  // pi
};
Quermass quermassintegrals(const ConvexPolygon& poly);

struct SteinerBall {
  Vec2 center;          // Steiner point s(K)
  double radius = 0.0;  // half the mean width
};

/// Steiner point and mean-width radius, integrated exactly over the normal
/// cone arc of each vertex (the support function is sinusoidal per arc).
SteinerBall steiner_ball(const ConvexPolygon& poly);

double hausdorff(const ConvexPolygon& a, const ConvexPolygon& b);

/// Hausdorff distance as the sup of |h_poly - h_disc| over directions,
/// from 4096 angular samples refined at local maxima plus the exact
/// per-arc candidates (vertex directions and edge normals).
double hausdorff(const ConvexPolygon& poly, const Disc& disc);

struct AsymmetryIndices {
  double star = 0.0;   // min_x d_H(K, B_r(x)), P(B_r) = P(K)
  double sharp = 0.0;  // min_x d_H(K, B_r(x)), |B_r| = |K|
  Vec2 star_center;
  Vec2 sharp_center;
};

/// Hausdorff asymmetry indices; the center minimization runs Nelder-Mead
/// from the centroid and the Steiner point with a 32x32 grid fallback.
AsymmetryIndices asymmetry_indices(const ConvexPolygon& poly);

/// Quantitative-isoperimetric modulus: s^2 (d=2), f^{-1}(s^2) with
/// f(t) = sqrt(t log(1/t)) (d=3, bisection), s^{(d+1)/2} (d>=4).
double g_modulus(int d, double s);

struct RadialGraphCheck {
  bool nearly_spherical = false;
  double sup_u = 0.0;  // sup of |radius - R| over the boundary graph
  double lip_u = 0.0;  // Lipschitz constant of the graph
  Vec2 center;
  std::string diagnostic;
};

/// Checks whether the polygon, recentered at its Steiner point, is an
/// R-nearly-spherical set: boundary a radial graph R + u with
/// max(sup|u|, Lip u) <= R/2.
RadialGraphCheck nearly_spherical_check(const ConvexPolygon& poly, double R);

/// Same check about an explicit center and with a configurable bound factor
/// (strict = require sup/Lip strictly below bound).
RadialGraphCheck radial_graph_check(const ConvexPolygon& poly, Vec2 center, double R,
                                    double bound, bool strict);

/// Deterministic random convex polygon with exactly n vertices and the given
/// perimeter: convex hull of jittered points on an ellipse, with rejection.
ConvexPolygon random_convex_polygon(int n, std::uint64_t seed, double target_perimeter);

ConvexPolygon regular_polygon(int n, double circumradius, Vec2 center = {0.0, 0.0});

/// Piecewise-linear model of t -> P(inner_parallel(poly, t)); breakpoints at
/// the edge-vanishing events, located by bisection on the vertex count.
class InnerParallelSweep {
 public:
  explicit InnerParallelSweep(const ConvexPolygon& poly);

  double inradius() const { return t_.back(); }
  double perimeter_at(double t) const;
  /// Area of the inner parallel body (exact for the piecewise-linear model).
  double area_at(double t) const;
  const std::vector<double>& breakpoints() const { return t_; }

 private:
  std::vector<double> t_;  // 0 = t0 < ... < t_k = inradius
  std::vector<double> perim_;
  std::vector<double> area_;
};

// --- JSON file interface -------------------------------------------------

/// Reads {"vertices": [[x, y], ...]} (CCW); rejects invalid input with a
/// diagnostic naming the offending position.
ConvexPolygon read_polygon_json(const std::string& path);
ConvexPolygon parse_polygon_json(const std::string& text);
std::string polygon_to_json(const ConvexPolygon& poly);
void write_polygon_json(const ConvexPolygon& poly, const std::string& path);

}  // namespace sobtrace::geo
