#pragma once

#include <string>
#include <variant>
#include <vector>

namespace sobtrace::radial {

struct Ball {
  double R = 1.0;
};

struct Shell {
  double R1 = 1.0;
  double R2 = 2.0;
};

/// Parameters of the trace-constant problem. The solvers cover the radial
/// regime 1 < p, 1 <= q <= p (and q below the critical trace exponent).
struct ProblemParams {
  double p = 2.0;
  double q = 2.0;
  int d = 2;
  std::variant<Ball, Shell> geometry = Ball{};

  void validate() const;
  bool is_shell() const { return std::holds_alternative<Shell>(geometry); }
  double inner_radius() const;
  double outer_radius() const;
};

/// Volume of the unit ball in dimension d.
double unit_ball_volume(int d);
/// Surface measure of the sphere of radius r in dimension d.
double sphere_area(int d, double r);
/// Volume of the ball of radius r in dimension d.
double ball_volume(int d, double r);

enum class Normalization { Shooting, BoundaryQNorm };

/// Radial minimizer profile Psi on [r0, R_out], increasing with Psi'(r0) = 0.
///
/// grad_energy and mass_energy are the full-dimensional integrals of
/// |grad z|^p and z^p over the domain; sigma is the (scale-invariant)
/// variational quotient.
struct RadialProfile {
  ProblemParams params;
  std::vector<double> grid;
  std::vector<double> psi;
  std::vector<double> dpsi;
  double z_m = 0.0;
  double z_M = 0.0;
  double sigma = 0.0;
  double grad_energy = 0.0;
  double mass_energy = 0.0;
  Normalization normalization = Normalization::Shooting;

  double inner_radius() const { return grid.front(); }
  double outer_radius() const { return grid.back(); }
  double outer_perimeter() const;
  double domain_volume() const;
  /// Boundary integral of psi^q over the outer sphere.
  double boundary_qnorm_pow_q() const;
  /// Residual of the natural boundary condition in scale-invariant form.
  double boundary_residual() const;
  /// Profile rescaled so that the outer boundary L^q norm is 1.
  RadialProfile normalized_boundary_q() const;
  RadialProfile scaled(double c) const;

  std::string to_json() const;
};

RadialProfile solve_ball(const ProblemParams& params, int grid_n = 4096);
RadialProfile solve_shell(const ProblemParams& params, int grid_n = 4096);

/// Monotone interpolation of a profile: level-gradient ell(t) = |grad z| on
/// {z = t} and the level-to-distance map g_inv(t) = R_out - Psi^{-1}(t).
class LevelFunctions {
 public:
  explicit LevelFunctions(const RadialProfile& profile);

  double z_m() const { return zm_; }
  double z_M() const { return zM_; }
  double ell(double t) const;
  double g_inv(double t) const;
  /// Psi(R_out - dist): the web-function level at distance dist from the
  /// outer boundary, clamped to z_m past the plateau.
  double level_at_distance(double dist) const;
  double slope_at_distance(double dist) const;
  double psi_inverse(double t) const;

 private:
  double value_at(double r) const;
  double slope_at(double r) const;

  std::vector<double> r_, v_, m_;   // grid, values, pchip slopes of Psi
  std::vector<double> dv_, dm_;     // values and pchip slopes of Psi'
  double zm_ = 0.0, zM_ = 0.0;
};

/// First Robin-Neumann eigenvalue of the p-Laplacian on the shell
/// A_{R1,R2}, Robin parameter beta < 0 on the outer sphere, Neumann on the
/// inner one; negative, found by shooting plus bisection in lambda.
double robin_neumann_shell(double p, int d, double beta, double R1, double R2,
                           int grid_n = 4096);

/// Robin minimizer profile for a given trial lambda (used by the oracle
/// tests and by the hybrid-asymmetry construction for the Robin problem).
RadialProfile robin_shell_profile(double p, int d, double lambda, double R1, double R2,
                                  int grid_n = 4096);

}  // namespace sobtrace::radial
