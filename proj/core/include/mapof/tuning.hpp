#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mapof/control.hpp"
#include "mapof/geometry.hpp"

namespace mapof {

/// Decay rates of the stable blocks and growth rate of the repulsion block.
struct EigenRates {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  double alpha4 = 0.0;               // max |Re lambda| of the repulsion block
  double repulsion_positive = 0.0;   // its positive eigenvalue
  std::array<bool, 3> hurwitz{};     // modes 1..3
  bool repulsion_saddle = false;     // one positive, one negative real eigenvalue
};

EigenRates mode_eigenrates(const Gains& gains);

/// Matrix exponential of a 2x2 block by eigendecomposition.
/// Throws RepeatedEigenvalueError when the discriminant is below 1e-9.
Eigen::Matrix2d expm2(const Eigen::Matrix2d& m, double t);

/// Largest singular value of a 2x2 matrix, in closed form.
double spectral_norm2(const Eigen::Matrix2d& m);

/// a = ln kappa_2(V) for the unit-column eigenvector matrix V of `m`, so that
/// ||exp(m t)||_2 <= e^a e^{Re(lambda_max) t}. Complex pairs are supported.
/// Throws RepeatedEigenvalueError when |tr^2 - 4 det| < 1e-9.
double exp_bound_offset(const Eigen::Matrix2d& m);

/// Upper bound on the time spent in the repulsion zone.
/// Throws InvalidBoundError unless 0 < mu_min < r_m, alpha_plus > 0 and ln(r_m/mu_min) > a.
double escape_time(double r_m, double mu_min, double a, double alpha_plus);

struct DwellPair {
  double t_d1 = 0.0;
  double t_d2 = 0.0;
};

/// Minimal dwell-times of the stable-switching theorem:
/// T_D1 = (a + rho)/alpha_minus, T_D2 = (2a + alpha_plus T_t + rho)/alpha_minus.
DwellPair dwell_times(double a, double rho, double alpha_minus, double alpha_plus, double t_t);

/// Relaxed T_D2 = (3a + alpha_plus T_t + rho)/alpha_minus when repulsion is
/// entered without waiting. Throws RhoRangeError unless 0 < rho < a.
double relaxed_dwell_time(double a, double rho, double alpha_minus, double alpha_plus, double t_t);

/// Time to cross the repulsion zone while attracted to a virtual target at
/// `dist_to_virtual`. Throws GeometryError unless 0 < d_in < dist_to_virtual.
double crossing_time(double dist_to_virtual, double d_in, double a, double alpha_minus);

struct TuningOptions {
  double rho = 0.1;
  double mu_min = 0.05;
  double r_m = 3.0;
  std::optional<double> a_override;
  std::optional<double> t_t_override;
  /// Both set: report the crossing time T_in.
  std::optional<double> d_in;
  std::optional<double> dist_to_virtual;
};

struct ModeBound {
  double alpha = 0.0;   // decay (modes 1-3) or growth (mode 4) rate used in the bound
  double offset = 0.0;  // a_i
};

struct TuningReport {
  Gains gains;
  std::array<ModeBound, 4> modes{};  // indexed by mode - 1
  double alpha1 = 0.0, alpha2 = 0.0, alpha3 = 0.0, alpha4 = 0.0;
  double alpha_plus_eig = 0.0;  // positive eigenvalue of the repulsion block
  double a_computed = 0.0;      // max_i a_i
  double a = 0.0;               // value used below (override or computed)
  double alpha_minus = 0.0;
  double alpha_plus = 0.0;
  double rho = 0.0;
  double mu_min = 0.0;
  double r_m = 0.0;
  double T_t = 0.0;
  double T_t_eig = 0.0;
  double T_D1 = 0.0;
  double T_D2_theorem = 0.0;
  double T_D2_theorem_eig = 0.0;
  std::optional<double> T_D2_corollary;
  std::optional<double> T_D2_corollary_eig;
  std::optional<double> T_in;
  std::vector<std::string> notes;
};

TuningReport tune(const Gains& gains, const TuningOptions& options = {});

/// Notes relating hand-picked dwell-times to the offsets they imply.
std::vector<std::string> explain_dwell_times(const TuningReport& report, double t_d1, double t_d2);

}  // namespace mapof
