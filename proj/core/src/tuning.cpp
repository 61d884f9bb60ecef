#include "mapof/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include <Eigen/LU>

#include "mapof/dynamics.hpp"
#include "mapof/errors.hpp"

namespace mapof {

namespace {

using cd = std::complex<double>;

constexpr double kRepeatedTol = 1e-9;

struct Eigen2 {
  std::array<cd, 2> values;
  std::array<std::array<cd, 2>, 2> vectors;  // vectors[j] = unit eigenvector j
};

double stable_rate(double k, double k_d) {
  const double disc = k_d * k_d - 4.0 * k;
  if (disc < 0.0) return k_d / 2.0;
  return (k_d - std::sqrt(disc)) / 2.0;
}

Eigen2 eigen_decompose(const Eigen::Matrix2d& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double tr = a + d;
  const double det = a * d - b * c;
  const double disc = tr * tr - 4.0 * det;
  if (std::abs(disc) < kRepeatedTol) {
    std::ostringstream msg;
    msg << "repeated eigenvalue " << tr / 2.0 << " (discriminant " << disc
        << "); the exponential bound needs two distinct eigenvalues";
    throw RepeatedEigenvalueError(msg.str());
  }
  const cd root = std::sqrt(cd(disc, 0.0));
  Eigen2 out;
  out.values = {(tr + root) / 2.0, (tr - root) / 2.0};
  for (int j = 0; j < 2; ++j) {
    const cd lambda = out.values[j];
    std::array<cd, 2> v;
    if (b != 0.0 && std::abs(b) >= std::abs(c)) {
      v = {cd(b), lambda - a};
    } else if (c != 0.0) {
      v = {lambda - d, cd(c)};
    } else {
      // Diagonal: lambda is one of the diagonal entries.
      v = std::abs(lambda - a) <= std::abs(lambda - d) ? std::array<cd, 2>{1.0, 0.0}
                                                       : std::array<cd, 2>{0.0, 1.0};
    }
    const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    out.vectors[j] = {v[0] / n, v[1] / n};
  }
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

EigenRates mode_eigenrates(const Gains& gains) {
  require(gains.valid(), "gains must be positive");
  EigenRates r;
  r.alpha1 = stable_rate(gains.k_eta, gains.k_d);
  r.alpha2 = stable_rate(gains.k_g, gains.k_d);
  r.alpha3 = r.alpha2;
  const double root = std::sqrt(gains.k_d * gains.k_d + 4.0 * gains.k_zeta);
  r.alpha4 = (gains.k_d + root) / 2.0;
  r.repulsion_positive = (-gains.k_d + root) / 2.0;

  const auto hurwitz = [&](double k) {
    // Re of both roots of l^2 + k_d l + k
    const double disc = gains.k_d * gains.k_d - 4.0 * k;
    const double worst = disc < 0.0 ? -gains.k_d / 2.0 : (-gains.k_d + std::sqrt(disc)) / 2.0;
    return worst < 0.0;
  };
  r.hurwitz = {hurwitz(gains.k_eta), hurwitz(gains.k_g), hurwitz(gains.k_g)};
  r.repulsion_saddle = r.repulsion_positive > 0.0 && -r.alpha4 < 0.0;
  return r;
}

Eigen::Matrix2d expm2(const Eigen::Matrix2d& m, double t) {
  const Eigen2 e = eigen_decompose(m);
  const auto& v = e.vectors;
  // V = [v0 v1], V^{-1} = adj(V)/det(V)
  const cd det = v[0][0] * v[1][1] - v[1][0] * v[0][1];
  const cd e0 = std::exp(e.values[0] * t);
  const cd e1 = std::exp(e.values[1] * t);
  const std::array<std::array<cd, 2>, 2> inv = {{{v[1][1] / det, -v[1][0] / det},
                                                 {-v[0][1] / det, v[0][0] / det}}};
  Eigen::Matrix2d out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out(r, c) = (v[0][r] * e0 * inv[0][c] + v[1][r] * e1 * inv[1][c]).real();
    }
  }
  return out;
}

double spectral_norm2(const Eigen::Matrix2d& m) {
  const double s = m.squaredNorm();
  const double det = m.determinant();
  const double gap = std::sqrt(std::max(0.0, s * s - 4.0 * det * det));
  return std::sqrt((s + gap) / 2.0);
}

double exp_bound_offset(const Eigen::Matrix2d& m) {
  const Eigen2 e = eigen_decompose(m);
  // Unit columns: V^H V = [[1, c], [conj c, 1]], singular values^2 = 1 +/- |c|.
  const cd c = std::conj(e.vectors[0][0]) * e.vectors[1][0] + std::conj(e.vectors[0][1]) * e.vectors[1][1];
  const double overlap = std::min(std::abs(c), 1.0);
  if (overlap >= 1.0 - 1e-15) {
    throw RepeatedEigenvalueError("eigenvectors are numerically parallel");
  }
  return 0.5 * std::log((1.0 + overlap) / (1.0 - overlap));
}

double escape_time(double r_m, double mu_min, double a, double alpha_plus) {
  if (!(mu_min > 0.0) || !(mu_min < r_m)) {
    throw InvalidBoundError("escape time needs 0 < mu_min < r_m");
  }
  if (!(alpha_plus > 0.0)) throw InvalidBoundError("escape time needs a positive growth rate");
  const double log_ratio = std::log(r_m / mu_min);
  if (!(log_ratio > a)) {
    std::ostringstream msg;
    msg << "escape-time bound is vacuous: ln(r_m/mu_min) = " << log_ratio << " <= a = " << a;
    throw InvalidBoundError(msg.str());
  }
  return (log_ratio - a) / alpha_plus;
}

DwellPair dwell_times(double a, double rho, double alpha_minus, double alpha_plus, double t_t) {
  require(rho > 0.0, "rho must be positive");
  require(alpha_minus > 0.0, "alpha_minus must be positive");
  return {(a + rho) / alpha_minus, (2.0 * a + alpha_plus * t_t + rho) / alpha_minus};
}

double relaxed_dwell_time(double a, double rho, double alpha_minus, double alpha_plus, double t_t) {
  if (!(rho > 0.0) || !(rho < a)) {
    std::ostringstream msg;
    msg << "relaxed dwell-time needs 0 < rho < a (rho = " << rho << ", a = " << a << ")";
    throw RhoRangeError(msg.str());
  }
  require(alpha_minus > 0.0, "alpha_minus must be positive");
  return (3.0 * a + alpha_plus * t_t + rho) / alpha_minus;
}

double crossing_time(double dist_to_virtual, double d_in, double a, double alpha_minus) {
  if (!(d_in >= 0.0) || !(d_in < dist_to_virtual)) {
    throw GeometryError("crossing time needs 0 <= d_in < distance to the virtual target");
  }
  require(alpha_minus > 0.0, "alpha_minus must be positive");
  return (a - std::log(1.0 - d_in / dist_to_virtual)) / alpha_minus;
}

TuningReport tune(const Gains& gains, const TuningOptions& options) {
  const EigenRates rates = mode_eigenrates(gains);

  TuningReport rep;
  rep.gains = gains;
  rep.alpha1 = rates.alpha1;
  rep.alpha2 = rates.alpha2;
  rep.alpha3 = rates.alpha3;
  rep.alpha4 = rates.alpha4;
  rep.alpha_plus_eig = rates.repulsion_positive;
  const std::array<double, 4> alphas = {rates.alpha1, rates.alpha2, rates.alpha3, rates.alpha4};
  for (int i = 0; i < 4; ++i) {
    const Mode mode = mode_from_int(i + 1);
    rep.modes[i] = {alphas[i], exp_bound_offset(mode_block(mode, gains))};
    rep.a_computed = std::max(rep.a_computed, rep.modes[i].offset);
  }
  rep.a = options.a_override.value_or(rep.a_computed);
  rep.alpha_minus = std::min({rates.alpha1, rates.alpha2, rates.alpha3});
  rep.alpha_plus = rates.alpha4;
  rep.rho = options.rho;
  rep.mu_min = options.mu_min;
  rep.r_m = options.r_m;

  if (options.t_t_override) {
    rep.T_t = rep.T_t_eig = *options.t_t_override;
  } else {
    rep.T_t = escape_time(options.r_m, options.mu_min, rep.a, rep.alpha_plus);
    rep.T_t_eig = escape_time(options.r_m, options.mu_min, rep.a, rep.alpha_plus_eig);
  }

  const DwellPair pair = dwell_times(rep.a, rep.rho, rep.alpha_minus, rep.alpha_plus, rep.T_t);
  rep.T_D1 = pair.t_d1;
  rep.T_D2_theorem = pair.t_d2;
  rep.T_D2_theorem_eig = dwell_times(rep.a, rep.rho, rep.alpha_minus, rep.alpha_plus_eig, rep.T_t_eig).t_d2;

  if (rep.rho > 0.0 && rep.rho < rep.a) {
    rep.T_D2_corollary = relaxed_dwell_time(rep.a, rep.rho, rep.alpha_minus, rep.alpha_plus, rep.T_t);
    rep.T_D2_corollary_eig = relaxed_dwell_time(rep.a, rep.rho, rep.alpha_minus, rep.alpha_plus_eig, rep.T_t_eig);
  } else {
    rep.notes.push_back("relaxed T_D2 unavailable: it requires 0 < rho < a");
  }

  if (options.d_in && options.dist_to_virtual) {
    rep.T_in = crossing_time(*options.dist_to_virtual, *options.d_in, rep.a, rep.alpha_minus);
    if (!(rep.T_D2_theorem > *rep.T_in)) {
      rep.notes.push_back("T_D2 does not exceed the crossing time T_in");
    }
  }

  std::ostringstream growth;
  growth << "alpha_plus = " << rep.alpha_plus << " 1/s is max|Re lambda| of the repulsion block; its positive "
         << "eigenvalue is " << rep.alpha_plus_eig << " 1/s. The *_eig fields use the tighter rate.";
  rep.notes.push_back(growth.str());
  if (options.a_override) {
    std::ostringstream o;
    o << "a = " << rep.a << " supplied by the caller; eigenvector conditioning gives a = " << rep.a_computed;
    rep.notes.push_back(o.str());
  }
  return rep;
}

std::vector<std::string> explain_dwell_times(const TuningReport& rep, double t_d1, double t_d2) {
  std::vector<std::string> notes;
  const double log_ratio = std::log(rep.r_m / rep.mu_min);
  std::ostringstream n1;
  n1 << "T_D1 = " << t_d1 << " s corresponds to a = " << t_d1 * rep.alpha_minus - rep.rho
     << " (a in use: " << rep.a << ", minimal T_D1 " << rep.T_D1 << " s)";
  notes.push_back(n1.str());

  // With T_t taken from the escape-time bound, alpha_plus T_t = ln(r_m/mu_min) - a,
  // so the growth rate drops out of both T_D2 formulas.
  const double a_theorem = t_d2 * rep.alpha_minus - log_ratio - rep.rho;
  const double a_relaxed = (t_d2 * rep.alpha_minus - log_ratio - rep.rho) / 2.0;
  std::ostringstream n2;
  n2 << "T_D2 = " << t_d2 << " s with T_t from the escape bound needs a = " << a_theorem
     << " (theorem form) or a = " << a_relaxed << " (relaxed form)";
  if (a_theorem < 0.0) n2 << "; no admissible a >= 0 reproduces it";
  notes.push_back(n2.str());

  if (t_d1 < rep.T_D1) {
    std::ostringstream n3;
    n3 << "T_D1 = " << t_d1 << " s is below the minimal " << rep.T_D1 << " s for a = " << rep.a;
    notes.push_back(n3.str());
  }
  return notes;
}

}  // namespace mapof
