#include "sobtrace/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sobtrace::radial {

namespace {

constexpr double kPi = std::numbers::pi;

double phi_p(double s, double p) { return std::pow(s, p - 1.0); }  // s >= 0 here

/// Geometric spacing in (r - origin) from r0 towards the start of the
/// uniform part, then uniform up to r1; dense near the singular start at
/// `origin` (the center for balls, the inner sphere for shells).
std::vector<double> make_grid(double origin, double r0, double r1, int n) {
  const int n_geo = std::max(n / 8, 16);
  const int n_uni = n - n_geo;
  const double u0 = r0 - origin;
  const double split = u0 + 0.02 * (r1 - r0);
  std::vector<double> g;
  g.reserve(n + 2);
  const double ratio = std::pow(split / u0, 1.0 / n_geo);
  double u = u0;
  for (int i = 0; i < n_geo; ++i) {
    g.push_back(origin + u);
    u *= ratio;
  }
  for (int i = 0; i <= n_uni; ++i) {
    g.push_back(origin + split + (r1 - origin - split) * i / n_uni);
  }
  return g;
}

struct State {
  double psi;   // Psi
  double m;     // flux r^{d-1} phi_p(Psi')
  double eg;    // int r^{d-1} Psi'^p dr
  double ev;    // int r^{d-1} Psi^p dr
};

State operator+(State a, State b) { return {a.psi + b.psi, a.m + b.m, a.eg + b.eg, a.ev + b.ev}; }
State operator*(double s, State a) { return {s * a.psi, s * a.m, s * a.eg, s * a.ev}; }

struct Trace {
  std::vector<double> r, psi, dpsi;
  State end;
};

Trace integrate_trace(State y, const std::vector<double>& grid, double p, int d, double c) {
  Trace tr;
  tr.r.reserve(grid.size());
  tr.psi.reserve(grid.size());
  tr.dpsi.reserve(grid.size());
  const double pinv = 1.0 / (p - 1.0);
  const auto rhs = [&](double r, const State& s) -> State {
    const double rd = std::pow(r, d - 1.0);
    const double dpsi = std::pow(std::max(s.m, 0.0) / rd, pinv);
    return {dpsi, c * rd * std::pow(s.psi, p - 1.0), rd * std::pow(dpsi, p),
            rd * std::pow(s.psi, p)};
  };
  const auto record = [&](double r, const State& s) {
    const double rd = std::pow(r, d - 1.0);
    tr.r.push_back(r);
    tr.psi.push_back(s.psi);
    tr.dpsi.push_back(std::pow(std::max(s.m, 0.0) / rd, pinv));
  };
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double r = grid[i];
    const double h = grid[i + 1] - r;
    record(r, y);
    const State k1 = rhs(r, y);
    const State k2 = rhs(r + 0.5 * h, y + (0.5 * h) * k1);
    const State k3 = rhs(r + 0.5 * h, y + (0.5 * h) * k2);
    const State k4 = rhs(r + h, y + h * k3);
    y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(y.psi) || !std::isfinite(y.m)) {
      throw std::runtime_error("radial solver diverged during integration");
    }
  }
  record(grid.back(), y);
  tr.end = y;
  return tr;
}

}  // namespace

void ProblemParams::validate() const {
  if (!(p > 1.0)) throw std::invalid_argument("ProblemParams: need p > 1");
  if (!(q >= 1.0 && q <= p)) {
    throw std::invalid_argument("ProblemParams: need 1 <= q <= p (radial regime)");
  }
  if (d < 2) throw std::invalid_argument("ProblemParams: need d >= 2");
  if (p < d) {
    const double pstar = p * (d - 1.0) / (d - p);
    if (!(q < pstar)) {
      throw std::invalid_argument("ProblemParams: q must be below the critical trace exponent");
    }
  }
  if (is_shell()) {
    const auto& s = std::get<Shell>(geometry);
    if (!(0.0 < s.R1 && s.R1 < s.R2)) {
      throw std::invalid_argument("ProblemParams: shell needs 0 < R1 < R2");
    }
  } else {
    if (!(std::get<Ball>(geometry).R > 0.0)) {
      throw std::invalid_argument("ProblemParams: ball needs R > 0");
    }
  }
}

double ProblemParams::inner_radius() const {
  return is_shell() ? std::get<Shell>(geometry).R1 : 0.0;
}

double ProblemParams::outer_radius() const {
  return is_shell() ? std::get<Shell>(geometry).R2 : std::get<Ball>(geometry).R;
}

double unit_ball_volume(int d) {
  return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double sphere_area(int d, double r) { return d * unit_ball_volume(d) * std::pow(r, d - 1.0); }

double ball_volume(int d, double r) { return unit_ball_volume(d) * std::pow(r, d); }

double RadialProfile::outer_perimeter() const {
  return sphere_area(params.d, params.outer_radius());
}

double RadialProfile::domain_volume() const {
  const double vol_out = ball_volume(params.d, params.outer_radius());
  return params.is_shell() ? vol_out - ball_volume(params.d, params.inner_radius()) : vol_out;
}

double RadialProfile::boundary_qnorm_pow_q() const {
  return std::pow(z_M, params.q) * outer_perimeter();
}

double RadialProfile::boundary_residual() const {
  const double p = params.p, q = params.q;
  const double lhs = phi_p(dpsi.back(), p);
  const double s_q = boundary_qnorm_pow_q();
  const double rhs = std::pow(sigma, p) * std::pow(s_q, (p - q) / q) * std::pow(z_M, q - 1.0);
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

RadialProfile RadialProfile::scaled(double c) const {
  if (!(c > 0.0)) throw std::invalid_argument("RadialProfile::scaled: factor must be positive");
  RadialProfile out = *this;
  for (double& v : out.psi) v *= c;
  for (double& v : out.dpsi) v *= c;
  out.z_m *= c;
  out.z_M *= c;
  out.grad_energy *= std::pow(c, params.p);
  out.mass_energy *= std::pow(c, params.p);
  return out;
}

RadialProfile RadialProfile::normalized_boundary_q() const {
  const double c = std::pow(boundary_qnorm_pow_q(), -1.0 / params.q);
  RadialProfile out = scaled(c);
  out.normalization = Normalization::BoundaryQNorm;
  return out;
}

namespace {

RadialProfile finish_profile(const ProblemParams& params, Trace tr, double r_inner,
                             double psi_inner) {
  RadialProfile prof;
  prof.params = params;
  prof.grid = std::move(tr.r);
  prof.psi = std::move(tr.psi);
  prof.dpsi = std::move(tr.dpsi);
  // Prepend the exact inner endpoint (regular center / Neumann hole).
  prof.grid.insert(prof.grid.begin(), r_inner);
  prof.psi.insert(prof.psi.begin(), psi_inner);
  prof.dpsi.insert(prof.dpsi.begin(), 0.0);
  prof.z_m = prof.psi.front();
  prof.z_M = prof.psi.back();

  const double dwd = params.d * unit_ball_volume(params.d);
  prof.grad_energy = dwd * tr.end.eg;
  prof.mass_energy = dwd * tr.end.ev;
  const double energy = prof.grad_energy + prof.mass_energy;
  prof.sigma = std::pow(energy, 1.0 / params.p) /
               std::pow(prof.boundary_qnorm_pow_q(), 1.0 / params.q);
  prof.normalization = Normalization::Shooting;
  return prof;
}

}  // namespace

RadialProfile solve_ball(const ProblemParams& params, int grid_n) {
  params.validate();
  if (params.is_shell()) throw std::invalid_argument("solve_ball: shell geometry given");
  if (grid_n < 64) throw std::invalid_argument("solve_ball: need grid_n >= 64");
  const double R = params.outer_radius();
  const double p = params.p;
  const int d = params.d;

  // Series start at eps: m ~ r^d/d, Psi ~ 1 + ((p-1)/p) d^{-1/(p-1)} r^{p/(p-1)}.
  const double eps = 1e-6 * R;
  State y;
  y.psi = 1.0 + (p - 1.0) / p * std::pow(1.0 / d, 1.0 / (p - 1.0)) * std::pow(eps, p / (p - 1.0));
  y.m = std::pow(eps, d) / d;
  y.ev = std::pow(eps, d) / d;
  const double expo = d + p / (p - 1.0);
  y.eg = std::pow(1.0 / d, p / (p - 1.0)) * std::pow(eps, expo) / expo;

  Trace tr = integrate_trace(y, make_grid(0.0, eps, R, grid_n), p, d, 1.0);
  return finish_profile(params, std::move(tr), 0.0, 1.0);
}

RadialProfile solve_shell(const ProblemParams& params, int grid_n) {
  params.validate();
  if (!params.is_shell()) throw std::invalid_argument("solve_shell: ball geometry given");
  if (grid_n < 64) throw std::invalid_argument("solve_shell: need grid_n >= 64");
  const auto& shell = std::get<Shell>(params.geometry);
  const double p = params.p;
  const int d = params.d;

  // Start just past R1 where m ~ R1^{d-1} (r - R1) and the gradient exponent
  // 1/(p-1) may be fractional.
  const double delta = 1e-6 * (shell.R2 - shell.R1);
  const double r0 = shell.R1 + delta;
  State y;
  y.psi = 1.0 + (p - 1.0) / p * std::pow(delta, p / (p - 1.0));
  y.m = std::pow(shell.R1, d - 1.0) * delta;
  y.ev = std::pow(shell.R1, d - 1.0) * delta;
  y.eg = std::pow(shell.R1, d - 1.0) * std::pow(delta, p / (p - 1.0) + 1.0) /
         (p / (p - 1.0) + 1.0);

  Trace tr = integrate_trace(y, make_grid(shell.R1, r0, shell.R2, grid_n), p, d, 1.0);
  return finish_profile(params, std::move(tr), shell.R1, 1.0);
}

std::string RadialProfile::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"params\": {\"p\": " << params.p << ", \"q\": " << params.q << ", \"d\": " << params.d;
  if (params.is_shell()) {
    const auto& s = std::get<Shell>(params.geometry);
    os << ", \"geometry\": \"shell\", \"R1\": " << s.R1 << ", \"R2\": " << s.R2;
  } else {
    os << ", \"geometry\": \"ball\", \"R\": " << std::get<Ball>(params.geometry).R;
  }
  os << "}, \"sigma\": " << sigma << ", \"z_m\": " << z_m << ", \"z_M\": " << z_M
     << ", \"normalization\": \""
     << (normalization == Normalization::Shooting ? "shooting" : "boundary_qnorm") << "\"";
  const auto dump = [&os](const char* name, const std::vector<double>& v) {
    os << ", \"" << name << "\": [";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ", ";
      os << v[i];
    }
    os << "]";
  };
  dump("grid", grid);
  dump("psi", psi);
  dump("dpsi", dpsi);
  os << "}";
  return os.str();
}

// --- LevelFunctions ----------------------------------------------------------

namespace {

/// Fritsch-Carlson monotone cubic slopes.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  m[0] = delta[0];
  m[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  return m;
}

double hermite(double x, double x0, double x1, double y0, double y1, double m0, double m1) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  return y0 * (2 * t3 - 3 * t2 + 1) + h * m0 * (t3 - 2 * t2 + t) + y1 * (-2 * t3 + 3 * t2) +
         h * m1 * (t3 - t2);
}

double hermite_deriv(double x, double x0, double x1, double y0, double y1, double m0, double m1) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  return (y0 * (6 * t2 - 6 * t) / h + m0 * (3 * t2 - 4 * t + 1) + y1 * (6 * t - 6 * t2) / h +
          m1 * (3 * t2 - 2 * t));
}

}  // namespace

LevelFunctions::LevelFunctions(const RadialProfile& profile) {
  if (profile.grid.size() < 4) throw std::invalid_argument("LevelFunctions: profile too coarse");
  r_ = profile.grid;
  v_ = profile.psi;
  dv_ = profile.dpsi;
  m_ = pchip_slopes(r_, v_);
  dm_ = pchip_slopes(r_, dv_);
  zm_ = profile.z_m;
  zM_ = profile.z_M;
}

double LevelFunctions::value_at(double r) const {
  if (r <= r_.front()) return v_.front();
  if (r >= r_.back()) return v_.back();
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - r_.begin()) - 1;
  return hermite(r, r_[i], r_[i + 1], v_[i], v_[i + 1], m_[i], m_[i + 1]);
}

double LevelFunctions::slope_at(double r) const {
  if (r <= r_.front()) return dv_.front();
  if (r >= r_.back()) return dv_.back();
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - r_.begin()) - 1;
  return hermite(r, r_[i], r_[i + 1], dv_[i], dv_[i + 1], dm_[i], dm_[i + 1]);
}

double LevelFunctions::psi_inverse(double t) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(zM_));
  if (t < zm_ - tol || t > zM_ + tol) {
    throw std::domain_error("LevelFunctions: level outside [z_m, z_M]");
  }
  if (t <= v_.front()) return r_.front();
  if (t >= v_.back()) return r_.back();
  // Locate the bracketing grid cell, then Newton with bisection fallback.
  const auto it = std::upper_bound(v_.begin(), v_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - v_.begin());
  i = std::min(std::max<std::size_t>(i, 1), v_.size() - 1) - 1;
  double lo = r_[i], hi = r_[i + 1];
  double x = 0.5 * (lo + hi);
  for (int k = 0; k < 100; ++k) {
    const double fx = hermite(x, r_[i], r_[i + 1], v_[i], v_[i + 1], m_[i], m_[i + 1]) - t;
    if (std::abs(fx) < 1e-15 * std::max(1.0, std::abs(t))) break;
    (fx > 0.0 ? hi : lo) = x;
    const double dfx = hermite_deriv(x, r_[i], r_[i + 1], v_[i], v_[i + 1], m_[i], m_[i + 1]);
    double next = dfx != 0.0 ? x - fx / dfx : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-16 * std::max(1.0, std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

double LevelFunctions::ell(double t) const { return std::max(0.0, slope_at(psi_inverse(t))); }

double LevelFunctions::g_inv(double t) const { return r_.back() - psi_inverse(t); }

double LevelFunctions::level_at_distance(double dist) const {
  if (dist <= 0.0) return zM_;
  const double span = r_.back() - r_.front();
  if (dist >= span) return zm_;
  return value_at(r_.back() - dist);
}

double LevelFunctions::slope_at_distance(double dist) const {
  if (dist < 0.0) dist = 0.0;
  const double span = r_.back() - r_.front();
  if (dist >= span) return 0.0;
  return std::max(0.0, slope_at(r_.back() - dist));
}

// --- Robin-Neumann ------------------------------------------------------------

RadialProfile robin_shell_profile(double p, int d, double lambda, double R1, double R2,
                                  int grid_n) {
  if (!(p > 1.0)) throw std::invalid_argument("robin_shell_profile: need p > 1");
  if (!(lambda < 0.0)) throw std::invalid_argument("robin_shell_profile: need lambda < 0");
  if (!(0.0 < R1 && R1 < R2)) throw std::invalid_argument("robin_shell_profile: need 0 < R1 < R2");
  const double c = -lambda;
  const double delta = 1e-6 * (R2 - R1);
  State y;
  y.psi = 1.0 + (p - 1.0) / p * std::pow(c, 1.0 / (p - 1.0)) * std::pow(delta, p / (p - 1.0));
  y.m = c * std::pow(R1, d - 1.0) * delta;
  y.ev = std::pow(R1, d - 1.0) * delta;
  y.eg = 0.0;

  Trace tr = integrate_trace(y, make_grid(R1, R1 + delta, R2, grid_n), p, d, c);
  RadialProfile prof;
  prof.params = ProblemParams{p, p, d, Shell{R1, R2}};
  prof.grid = std::move(tr.r);
  prof.psi = std::move(tr.psi);
  prof.dpsi = std::move(tr.dpsi);
  prof.grid.insert(prof.grid.begin(), R1);
  prof.psi.insert(prof.psi.begin(), 1.0);
  prof.dpsi.insert(prof.dpsi.begin(), 0.0);
  prof.z_m = prof.psi.front();
  prof.z_M = prof.psi.back();
  const double dwd = d * unit_ball_volume(d);
  prof.grad_energy = dwd * tr.end.eg;
  prof.mass_energy = dwd * tr.end.ev;
  prof.sigma = lambda;  // stores the trial eigenvalue for Robin profiles
  prof.normalization = Normalization::Shooting;
  return prof;
}

double robin_neumann_shell(double p, int d, double beta, double R1, double R2, int grid_n) {
  if (!(beta < 0.0)) throw std::invalid_argument("robin_neumann_shell: need beta < 0");
  if (!(p > 1.0)) throw std::invalid_argument("robin_neumann_shell: need p > 1");
  if (!(0.0 < R1 && R1 < R2)) throw std::invalid_argument("robin_neumann_shell: need 0 < R1 < R2");

  // residual(s) = phi_p(Psi'(R2)) + beta Psi(R2)^{p-1} at lambda = -s;
  // negative for s -> 0+, increasing in s.
  const auto residual = [&](double s) {
    const RadialProfile prof = robin_shell_profile(p, d, -s, R1, R2, grid_n);
    return phi_p(prof.dpsi.back(), p) + beta * std::pow(prof.z_M, p - 1.0);
  };

  const double shell_vol = ball_volume(d, R2) - ball_volume(d, R1);
  const double s_trivial = -beta * sphere_area(d, R2) / shell_vol;  // quotient of u == 1
  double lo = 1e-12;
  double hi = std::max({2.0 * s_trivial, (p - 1.0) * std::pow(std::abs(beta), p / (p - 1.0)), 1.0});
  int guard = 0;
  while (residual(hi) <= 0.0) {
    hi *= 2.0;
    if (++guard > 60) {
      std::ostringstream os;
      os << "robin_neumann_shell: root not bracketed in [-" << hi << ", -" << lo << "]";
      throw std::runtime_error(os.str());
    }
  }
  if (residual(lo) >= 0.0) {
    throw std::runtime_error("robin_neumann_shell: residual not negative near lambda = 0-");
  }
  // Monotonicity of the residual is assumed; spot-check it on a few samples.
  {
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 5; ++i) {
      const double s = lo + (hi - lo) * i / 6.0;
      const double r = residual(s);
      if (r < prev - 1e-9 * (1.0 + std::abs(r))) {
        throw std::runtime_error("robin_neumann_shell: residual not monotone on the bracket");
      }
      prev = r;
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) < 0.0 ? lo : hi) = mid;
  }
  return -0.5 * (lo + hi);
}

}  // namespace sobtrace::radial
