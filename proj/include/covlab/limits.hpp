#pragma once

#include <optional>

namespace covlab {

/// Volume of the unit ball in R^d; theta(0) = 1.
double theta(int d);

/// c_d = (1/d!) (sqrt(pi) Gamma(1 + d/2) / Gamma((d + 1)/2))^(d - 1), d >= 1.
double c_d(int d);

/// Boundary constant c_{d,k} of the weak coverage law, d >= 2, k >= 1.
double c_dk(int d, int k);

/// H(t) = 1 - t + t log t for t > 0, H(0) = 1. Throws Error for t < 0.
double H(double t);

/// The root y >= a of y H(a/y) = x. hatH(0, x) = x exactly.
double hatH(double a, double x);

/// Centred and scaled statistic of the boundary weak law:
///   n theta_d f0 R^d / 2 - ((d-1)/d) log(n f0) - (d + k - 3 + 1/d) log log n.
/// Requires n > e.
double weak_transform(double R, double n, int d, int k, double f0);

/// Interior weak-law statistic:
///   n theta_d f0 R^d - log(n f0) - (d + k - 2) log log n.
double interior_transform(double R, double n, int d, int k, double f0);

/// d/dR of weak_transform, evaluated at R.
double weak_transform_slope(double R, double n, int d, double f0);
/// d/dR of interior_transform, evaluated at R.
double interior_transform_slope(double R, double n, int d, double f0);

enum class Regime { WeakBoundary, WeakInterior, Slln };

/// Limit exponent lim k(n)/log n; infinity is a separate state.
struct Beta {
  bool infinite = false;
  double value = 0.0;

  static Beta finite(double b) { return {false, b}; }
  static Beta infinity() { return {true, 0.0}; }
  friend bool operator==(const Beta&, const Beta&) = default;
};

struct LimitLaw {
  int d = 2;
  int k = 1;
  double f0 = 1.0;
  std::optional<double> f1;  // nullopt when B misses the boundary of A
  double vB = 1.0;
  double svB = 0.0;
  Regime regime = Regime::WeakBoundary;
  Beta beta;
  /// Whether B touches the boundary of A. With svB == 0 and (d,k) != (2,1)
  /// the boundary law is only known when B stays away from the boundary.
  bool touches_boundary = false;

  void validate() const;
};

/// Limiting CDF of weak_transform(R_{n,k}). Throws Refusal when svB = 0,
/// (d,k) != (2,1) and B touches the boundary.
double weak_limit_cdf(const LimitLaw& law, double zeta);

/// exp(-(c_d / (k-1)!) vB e^(-beta)).
double interior_limit_cdf(const LimitLaw& law, double beta);

enum class SllnMode { Boundary, Interior };

/// Almost-sure limit of n theta_d R^d / k(n) (beta infinite) or
/// n theta_d R^d / log n (beta finite). f1 = nullopt means 1/f1 = 0.
double slln_limit(int d, Beta beta, double f0, std::optional<double> f1, SllnMode mode);

}  // namespace covlab
