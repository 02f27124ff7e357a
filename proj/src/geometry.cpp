#include "sobtrace/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sobtrace::geo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCollinearTol = 1e-12;

double uniform01(std::mt19937_64& gen) {
  // Implementation-defined std distributions would break cross-platform
  // determinism, so draw from the raw 64-bit stream directly.
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return norm(p - a);
  double s = dot(p - a, ab) / len2;
  s = std::clamp(s, 0.0, 1.0);
  return norm(p - (a + s * ab));
}

}  // namespace

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) {
    throw std::invalid_argument("ConvexPolygon: need at least 3 vertices, got " +
                                std::to_string(vertices.size()));
  }
  // Merge consecutive duplicates and collinear triples until stable.
  std::vector<Vec2> v = std::move(vertices);
  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    std::vector<Vec2> out;
    out.reserve(v.size());
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 prev = v[(i + n - 1) % n];
      const Vec2 cur = v[i];
      const Vec2 next = v[(i + 1) % n];
      const Vec2 a = cur - prev;
      const Vec2 b = next - cur;
      const double na = norm(a), nb = norm(b);
      if (nb == 0.0) {  // duplicate of next
        changed = true;
        continue;
      }
      if (na > 0.0 && std::abs(cross(a, b)) <= kCollinearTol * na * nb && dot(a, b) > 0.0) {
        changed = true;  // collinear with the neighbours: drop
        continue;
      }
      out.push_back(cur);
    }
    v = std::move(out);
  }
  if (v.size() < 3) {
    throw std::invalid_argument("ConvexPolygon: degenerate after merging collinear vertices");
  }
  // Strict convexity, CCW.
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = v[(i + 1) % n] - v[i];
    const Vec2 b = v[(i + 2) % n] - v[(i + 1) % n];
    if (cross(a, b) <= 0.0) {
      throw std::invalid_argument("ConvexPolygon: vertices not strictly convex CCW at index " +
                                  std::to_string((i + 1) % n));
    }
  }
  verts_ = std::move(v);
  if (area() <= 0.0) {
    throw std::invalid_argument("ConvexPolygon: non-positive signed area");
  }
}

double ConvexPolygon::area() const {
  double s = 0.0;
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    s += cross(verts_[i], verts_[(i + 1) % n]);
  }
  return 0.5 * s;
}

double ConvexPolygon::perimeter() const {
  double s = 0.0;
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    s += norm(verts_[(i + 1) % n] - verts_[i]);
  }
  return s;
}

Vec2 ConvexPolygon::centroid() const {
  double a = 0.0;
  Vec2 c{0.0, 0.0};
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = verts_[i];
    const Vec2 q = verts_[(i + 1) % n];
    const double w = cross(p, q);
    a += w;
    c = c + w * (p + q);
  }
  return c * (1.0 / (3.0 * a));
}

double ConvexPolygon::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    for (std::size_t j = i + 1; j < verts_.size(); ++j) {
      best = std::max(best, norm(verts_[i] - verts_[j]));
    }
  }
  return best;
}

bool ConvexPolygon::contains(Vec2 p) const {
  return inner_distance(p) >= -1e-12 * (1.0 + norm(p) + norm(verts_[0]));
}

double ConvexPolygon::inner_distance(Vec2 p) const {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = verts_[(i + 1) % n] - verts_[i];
    const Vec2 nrm = Vec2{e.y, -e.x} * (1.0 / norm(e));  // outward for CCW
    best = std::min(best, dot(nrm, verts_[i] - p));
  }
  return best;
}

double ConvexPolygon::distance_to(Vec2 p) const {
  if (inner_distance(p) >= 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, verts_[i], verts_[(i + 1) % n]));
  }
  return best;
}

double ConvexPolygon::support(Vec2 dir) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : verts_) best = std::max(best, dot(v, dir));
  return best;
}

ConvexPolygon ConvexPolygon::translated(Vec2 t) const {
  std::vector<Vec2> v = verts_;
  for (Vec2& p : v) p = p + t;
  return ConvexPolygon(std::move(v));
}

ConvexPolygon ConvexPolygon::rotated(double angle) const {
  const double c = std::cos(angle), s = std::sin(angle);
  std::vector<Vec2> v = verts_;
  for (Vec2& p : v) p = {c * p.x - s * p.y, s * p.x + c * p.y};
  return ConvexPolygon(std::move(v));
}

ConvexPolygon ConvexPolygon::scaled(double s) const {
  if (s <= 0.0) throw std::invalid_argument("ConvexPolygon::scaled: factor must be positive");
  std::vector<Vec2> v = verts_;
  for (Vec2& p : v) p = p * s;
  return ConvexPolygon(std::move(v));
}

EdgePlanes edge_planes(const ConvexPolygon& poly) {
  EdgePlanes planes;
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  planes.normal.reserve(n);
  planes.offset.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = v[(i + 1) % n] - v[i];
    const Vec2 nrm = Vec2{e.y, -e.x} * (1.0 / norm(e));
    planes.normal.push_back(nrm);
    planes.offset.push_back(dot(nrm, v[i]));
  }
  return planes;
}

namespace {

std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& pts, Vec2 n, double b) {
  std::vector<Vec2> out;
  const std::size_t m = pts.size();
  out.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 p = pts[i];
    const Vec2 q = pts[(i + 1) % m];
    const double dp = b - dot(n, p);
    const double dq = b - dot(n, q);
    if (dp >= 0.0) out.push_back(p);
    if ((dp > 0.0 && dq < 0.0) || (dp < 0.0 && dq > 0.0)) {
      const double s = dp / (dp - dq);
      out.push_back(p + s * (q - p));
    }
  }
  return out;
}

}  // namespace

std::optional<ConvexPolygon> inner_parallel(const ConvexPolygon& poly, double t) {
  if (t < 0.0) throw std::invalid_argument("inner_parallel: negative distance");
  if (t == 0.0) return poly;
  const EdgePlanes planes = edge_planes(poly);
  std::vector<Vec2> cur = poly.vertices();
  for (std::size_t i = 0; i < planes.normal.size(); ++i) {
    cur = clip_halfplane(cur, planes.normal[i], planes.offset[i] - t);
    if (cur.size() < 3) return std::nullopt;
  }
  try {
    ConvexPolygon out(std::move(cur));
    if (out.area() <= 0.0) return std::nullopt;
    return out;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

double inradius(const ConvexPolygon& poly) {
  double lo = 0.0;
  // Half the minimal width bounds the inradius from above.
  double hi = 0.5 * poly.diameter();
  {
    const EdgePlanes planes = edge_planes(poly);
    for (std::size_t i = 0; i < planes.normal.size(); ++i) {
      const double w = planes.offset[i] + poly.support(-planes.normal[i]);
      hi = std::min(hi, 0.5 * w);
    }
  }
  hi = std::max(hi * (1.0 + 1e-9), 1e-12);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (inner_parallel(poly, mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

Quermass quermassintegrals(const ConvexPolygon& poly) {
  return {poly.area(), 0.5 * poly.perimeter(), kPi};
}

SteinerBall steiner_ball(const ConvexPolygon& poly) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  const EdgePlanes planes = edge_planes(poly);
  // Normal cone arc of vertex i runs from the normal of edge i-1 to the
  // normal of edge i; on it h(theta) = v_i . (cos, sin).
  double ix = 0.0, iy = 0.0, ih = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 n_prev = planes.normal[(i + n - 1) % n];
    const Vec2 n_cur = planes.normal[i];
    double a = std::atan2(n_prev.y, n_prev.x);
    double b = std::atan2(n_cur.y, n_cur.x);
    if (b < a) b += 2.0 * kPi;
    const double sa = std::sin(a), ca = std::cos(a);
    const double sb = std::sin(b), cb = std::cos(b);
    const double icc = 0.5 * ((b - a) + sb * cb - sa * ca);
    const double iss = 0.5 * ((b - a) - sb * cb + sa * ca);
    const double isc = 0.5 * (sb * sb - sa * sa);
    ix += v[i].x * icc + v[i].y * isc;
    iy += v[i].x * isc + v[i].y * iss;
    ih += v[i].x * (sb - sa) - v[i].y * (cb - ca);
  }
  SteinerBall ball;
  ball.center = {ix / kPi, iy / kPi};
  ball.radius = 0.5 * ih / kPi;  // mean width / 2; equals P / (2 pi) in 2D
  return ball;
}

double hausdorff(const ConvexPolygon& a, const ConvexPolygon& b) {
  double best = 0.0;
  for (const Vec2& p : a.vertices()) best = std::max(best, b.distance_to(p));
  for (const Vec2& p : b.vertices()) best = std::max(best, a.distance_to(p));
  return best;
}

double hausdorff(const ConvexPolygon& poly, const Disc& disc) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  const EdgePlanes planes = edge_planes(poly);

  const auto gap = [&](double theta) {
    const Vec2 u{std::cos(theta), std::sin(theta)};
    return std::abs(poly.support(u) - (dot(disc.center, u) + disc.radius));
  };

  constexpr int kSamples = 4096;
  std::vector<double> f(kSamples);
  // The support argmax rotates monotonically with theta, so advance a
  // pointer instead of scanning all vertices per sample.
  std::size_t arg = 0;
  {
    const Vec2 u0{1.0, 0.0};
    for (std::size_t i = 1; i < n; ++i) {
      if (dot(v[i], u0) > dot(v[arg], u0)) arg = i;
    }
  }
  for (int s = 0; s < kSamples; ++s) {
    const double theta = 2.0 * kPi * s / kSamples;
    const Vec2 u{std::cos(theta), std::sin(theta)};
    std::size_t steps = 0;
    while (steps < n && dot(v[(arg + 1) % n], u) > dot(v[arg], u)) {
      arg = (arg + 1) % n;
      ++steps;
    }
    f[s] = std::abs(dot(v[arg], u) - (dot(disc.center, u) + disc.radius));
  }

  double best = 0.0;
  const double step = 2.0 * kPi / kSamples;
  for (int s = 0; s < kSamples; ++s) {
    best = std::max(best, f[s]);
    const double fm = f[(s + kSamples - 1) % kSamples];
    const double fp = f[(s + 1) % kSamples];
    if (f[s] >= fm && f[s] >= fp) {
      // One parabolic refinement around the local max.
      const double denom = fm - 2.0 * f[s] + fp;
      if (denom < 0.0) {
        const double delta = 0.5 * (fm - fp) / denom;
        const double theta = 2.0 * kPi * s / kSamples + std::clamp(delta, -1.0, 1.0) * step;
        best = std::max(best, gap(theta));
      }
    }
  }
  // Exact candidates: the per-arc extremum directions (vertex minus center)
  // and the support-function kinks (edge normals).
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 d = v[i] - disc.center;
    const double nd = norm(d);
    if (nd > 0.0) best = std::max(best, gap(std::atan2(d.y, d.x)));
    best = std::max(best, gap(std::atan2(planes.normal[i].y, planes.normal[i].x)));
  }
  return best;
}

namespace {

// Nelder-Mead on a 2D objective; tolerance on the function spread.
Vec2 nelder_mead(const std::function<double(Vec2)>& fn, Vec2 start, double scale, double tol,
                 int max_iter, double* fbest) {
  struct Node {
    Vec2 x;
    double f;
  };
  std::array<Node, 3> s{Node{start, fn(start)},
                        Node{start + Vec2{scale, 0.0}, fn(start + Vec2{scale, 0.0})},
                        Node{start + Vec2{0.0, scale}, fn(start + Vec2{0.0, scale})}};
  auto by_f = [](const Node& a, const Node& b) { return a.f < b.f; };
  for (int it = 0; it < max_iter; ++it) {
    std::sort(s.begin(), s.end(), by_f);
    if (s[2].f - s[0].f < tol && norm(s[2].x - s[0].x) < tol) break;
    const Vec2 c = 0.5 * (s[0].x + s[1].x);
    const Vec2 xr = c + (c - s[2].x);
    const double fr = fn(xr);
    if (fr < s[0].f) {
      const Vec2 xe = c + 2.0 * (c - s[2].x);
      const double fe = fn(xe);
      s[2] = fe < fr ? Node{xe, fe} : Node{xr, fr};
    } else if (fr < s[1].f) {
      s[2] = {xr, fr};
    } else {
      const Vec2 xc = c + 0.5 * (s[2].x - c);
      const double fc = fn(xc);
      if (fc < s[2].f) {
        s[2] = {xc, fc};
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
          s[i].f = fn(s[i].x);
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), by_f);
  if (fbest) *fbest = s[0].f;
  return s[0].x;
}

std::pair<Vec2, double> minimize_center(const ConvexPolygon& poly, double r) {
  const auto fn = [&](Vec2 x) { return hausdorff(poly, Disc{x, r}); };
  const double rho = inradius(poly);
  const Vec2 c0 = poly.centroid();
  const Vec2 c1 = steiner_ball(poly).center;

  Vec2 best_x = c0;
  double best_f = fn(c0);
  for (const Vec2 seed : {c0, c1}) {
    double f = 0.0;
    const Vec2 x = nelder_mead(fn, seed, 0.1 * rho, 1e-10, 300, &f);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  // Grid fallback over the inball bounding box, then polish the best cell.
  Vec2 grid_best = best_x;
  double grid_f = best_f;
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 32; ++j) {
      const Vec2 x{c1.x - rho + 2.0 * rho * (i + 0.5) / 32.0,
                   c1.y - rho + 2.0 * rho * (j + 0.5) / 32.0};
      const double f = fn(x);
      if (f < grid_f) {
        grid_f = f;
        grid_best = x;
      }
    }
  }
  if (grid_f < best_f) {
    double f = 0.0;
    const Vec2 x = nelder_mead(fn, grid_best, rho / 16.0, 1e-10, 300, &f);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
    if (grid_f < best_f) {
      best_f = grid_f;
      best_x = grid_best;
    }
  }
  return {best_x, best_f};
}

}  // namespace

AsymmetryIndices asymmetry_indices(const ConvexPolygon& poly) {
  AsymmetryIndices out;
  const double r_star = poly.perimeter() / (2.0 * kPi);
  const double r_sharp = std::sqrt(poly.area() / kPi);
  auto [xs, fs] = minimize_center(poly, r_star);
  out.star = fs;
  out.star_center = xs;
  auto [xh, fh] = minimize_center(poly, r_sharp);
  out.sharp = fh;
  out.sharp_center = xh;
  return out;
}

double g_modulus(int d, double s) {
  if (d < 2) throw std::invalid_argument("g_modulus: dimension must be >= 2");
  if (s < 0.0) throw std::invalid_argument("g_modulus: argument must be nonnegative");
  if (d == 2) return s * s;
  if (d >= 4) return std::pow(s, 0.5 * (d + 1));
  // d = 3: invert f(t) = sqrt(t log(1/t)) on (0, 1/e], where f increases up
  // to f(1/e) = e^{-1/2}.
  const double y = s * s;
  const double ymax = std::exp(-0.5);
  if (y > ymax * (1.0 + 1e-12)) {
    throw std::domain_error("g_modulus: s^2 exceeds the range of f for d = 3");
  }
  if (y <= 0.0) return 0.0;
  if (y >= ymax) return std::exp(-1.0);
  const auto f = [](double t) { return std::sqrt(t * std::log(1.0 / t)); };
  double lo = 1e-300, hi = std::exp(-1.0);
  for (int i = 0; i < 2000 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

RadialGraphCheck radial_graph_check(const ConvexPolygon& poly, Vec2 center, double R,
                                    double bound, bool strict) {
  RadialGraphCheck out;
  out.center = center;
  if (poly.inner_distance(center) <= 0.0) {
    out.nearly_spherical = false;
    out.diagnostic = "center not strictly inside the polygon; boundary is not a radial graph";
    return out;
  }
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  double sup_u = 0.0;
  double lip = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = v[i] - center;
    const Vec2 b = v[(i + 1) % n] - center;
    sup_u = std::max(sup_u, std::abs(norm(a) - R));
    // Foot of the perpendicular from the center onto the edge line.
    const Vec2 e = b - a;
    const double len2 = dot(e, e);
    const double s = -dot(a, e) / len2;
    if (s > 0.0 && s < 1.0) {
      const double ell = norm(a + s * e);
      sup_u = std::max(sup_u, std::abs(ell - R));
    }
    // d(radius)/d(angle) at a vertex seen from this edge: |v| * |tan(phi)|
    // with cos(phi) = ell / |v|.
    const double ell = std::abs(cross(a, e)) / std::sqrt(len2);
    if (ell > 0.0) {
      const auto slope = [&](Vec2 w) {
        const double tangential = std::sqrt(std::max(0.0, dot(w, w) - ell * ell));
        return norm(w) * tangential / ell;
      };
      lip = std::max(lip, std::max(slope(a), slope(b)));
    }
  }
  out.sup_u = sup_u;
  out.lip_u = lip;
  const double norm_w1inf = std::max(sup_u, lip);
  out.nearly_spherical = strict ? (norm_w1inf < bound) : (norm_w1inf <= bound);
  if (!out.nearly_spherical) {
    std::ostringstream os;
    os << "W^{1,inf} norm " << norm_w1inf << " exceeds bound " << bound;
    out.diagnostic = os.str();
  }
  return out;
}

RadialGraphCheck nearly_spherical_check(const ConvexPolygon& poly, double R) {
  return radial_graph_check(poly, steiner_ball(poly).center, R, 0.5 * R, false);
}

ConvexPolygon regular_polygon(int n, double circumradius, Vec2 center) {
  std::vector<Vec2> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * kPi * i / n;
    v.push_back(center + circumradius * Vec2{std::cos(a), std::sin(a)});
  }
  return ConvexPolygon(std::move(v));
}

ConvexPolygon random_convex_polygon(int n, std::uint64_t seed, double target_perimeter) {
  if (n < 3) throw std::invalid_argument("random_convex_polygon: need n >= 3");
  if (!(target_perimeter > 0.0)) {
    throw std::invalid_argument("random_convex_polygon: perimeter must be positive");
  }
  std::mt19937_64 gen(seed);
  for (int attempt = 0; attempt < 256; ++attempt) {
    const double b = 0.45 + 0.5 * uniform01(gen);  // ellipse minor axis
    std::vector<double> ang(n);
    for (double& a : ang) a = 2.0 * kPi * uniform01(gen);
    std::sort(ang.begin(), ang.end());
    std::vector<Vec2> pts(n);
    for (int i = 0; i < n; ++i) {
      const double jitter = 0.85 + 0.3 * uniform01(gen);
      pts[i] = {jitter * std::cos(ang[i]), jitter * b * std::sin(ang[i])};
    }
    // Andrew monotone chain hull.
    std::sort(pts.begin(), pts.end(), [](Vec2 p, Vec2 q) {
      return p.x < q.x || (p.x == q.x && p.y < q.y);
    });
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Vec2& p : pts) {
      while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
      hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
      while (k >= lower && cross(hull[k - 1] - hull[k - 2], *it - hull[k - 2]) <= 0.0) --k;
      hull[k++] = *it;
    }
    hull.resize(k - 1);
    if (static_cast<int>(hull.size()) != n) continue;
    try {
      ConvexPolygon poly(std::move(hull));
      if (static_cast<int>(poly.size()) != n) continue;
      const Vec2 c = poly.centroid();
      poly = poly.translated(-c).scaled(target_perimeter / poly.perimeter());
      return poly;
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
  throw std::runtime_error("random_convex_polygon: generation failed after bounded retries, seed " +
                           std::to_string(seed));
}

InnerParallelSweep::InnerParallelSweep(const ConvexPolygon& poly) {
  const double rho = geo::inradius(poly);
  const auto perim = [&](double t) {
    const auto p = inner_parallel(poly, t);
    return p ? p->perimeter() : 0.0;
  };
  const auto count = [&](double t) {
    const auto p = inner_parallel(poly, t);
    return p ? p->size() : std::size_t{0};
  };

  // Locate edge-vanishing events: scan cells, bisect on vertex-count change.
  const int cells = std::max<int>(16, 4 * static_cast<int>(poly.size()));
  std::vector<double> events{0.0, rho};
  double a = 0.0;
  std::size_t ca = count(0.0);
  for (int i = 1; i <= cells; ++i) {
    const double bnd = rho * i / cells;
    std::size_t cb = count(std::min(bnd, rho * (1.0 - 1e-13)));
    double lo = a, hi = bnd;
    std::size_t clo = ca;
    while (clo != cb) {
      // Bisect for the next change in [lo, hi]; there may be several.
      double l = lo, h = hi;
      std::size_t ch = cb;
      while (h - l > 1e-13 * std::max(1.0, rho)) {
        const double m = 0.5 * (l + h);
        const std::size_t cm = count(m);
        if (cm == clo) {
          l = m;
        } else {
          h = m;
          ch = cm;
        }
      }
      events.push_back(0.5 * (l + h));
      lo = h;
      clo = ch;
    }
    a = bnd;
    ca = cb;
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end(),
                           [&](double x, double y) { return y - x < 1e-12 * std::max(1.0, rho); }),
               events.end());
  if (events.back() < rho) events.push_back(rho);

  // P is linear between events; accumulate areas exactly per segment.
  t_ = events;
  perim_.resize(t_.size());
  area_.resize(t_.size());
  for (std::size_t i = 0; i < t_.size(); ++i) {
    double t = t_[i];
    if (i + 1 == t_.size()) t = std::min(t, rho * (1.0 - 1e-13));
    perim_[i] = perim(t);
  }
  area_[0] = poly.area();
  for (std::size_t i = 1; i < t_.size(); ++i) {
    area_[i] = area_[i - 1] - 0.5 * (perim_[i - 1] + perim_[i]) * (t_[i] - t_[i - 1]);
  }
}

double InnerParallelSweep::perimeter_at(double t) const {
  if (t <= 0.0) return perim_.front();
  if (t >= t_.back()) return 0.0;
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin());
  const double w = (t - t_[i - 1]) / (t_[i] - t_[i - 1]);
  return perim_[i - 1] + w * (perim_[i] - perim_[i - 1]);
}

double InnerParallelSweep::area_at(double t) const {
  if (t <= 0.0) return area_.front();
  if (t >= t_.back()) return 0.0;
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin());
  const double dt = t - t_[i - 1];
  const double slope = (perim_[i] - perim_[i - 1]) / (t_[i] - t_[i - 1]);
  return area_[i - 1] - perim_[i - 1] * dt - 0.5 * slope * dt * dt;
}

// --- JSON ------------------------------------------------------------------

ConvexPolygon parse_polygon_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("polygon JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array()) {
    throw std::invalid_argument("polygon JSON: expected an object with a \"vertices\" array");
  }
  std::vector<Vec2> v;
  std::size_t idx = 0;
  for (const auto& entry : j["vertices"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
      throw std::invalid_argument("polygon JSON: vertex " + std::to_string(idx) +
                                  " is not a [x, y] number pair");
    }
    v.push_back({entry[0].get<double>(), entry[1].get<double>()});
    ++idx;
  }
  try {
    return ConvexPolygon(std::move(v));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("polygon JSON: ") + e.what() +
                                " (vertices must be strictly convex, CCW)");
  }
}

ConvexPolygon read_polygon_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open polygon file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_polygon_json(ss.str());
}

std::string polygon_to_json(const ConvexPolygon& poly) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"vertices\": [";
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << "[" << v[i].x << ", " << v[i].y << "]";
  }
  os << "]}";
  return os.str();
}

void write_polygon_json(const ConvexPolygon& poly, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write polygon file: " + path);
  out << polygon_to_json(poly) << "\n";
}

}  // namespace sobtrace::geo
