#include "covlab/limits.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "covlab/manifold.hpp"

namespace covlab {

namespace {

constexpr double kLogPi = 1.1447298858494002;  // log(pi)

double log_theta(int d) {
  if (d == 0) return 0.0;
  return 0.5 * d * kLogPi - std::lgamma(1.0 + 0.5 * d);
}

double log_c_d(int d) {
  const double ratio =
      0.5 * kLogPi + std::lgamma(1.0 + 0.5 * d) - std::lgamma(0.5 * (d + 1.0));
  return (d - 1) * ratio - std::lgamma(d + 1.0);
}

double log_factorial(int k) { return std::lgamma(k + 1.0); }

void require_loglog(double n) {
  if (!(n > std::numbers::e)) throw Error("transform: n must exceed e so that log log n > 0");
}

}  // namespace

double theta(int d) {
  if (d < 0) throw Error("theta: negative dimension");
  if (d == 0) return 1.0;
  return std::exp(log_theta(d));
}

double c_d(int d) {
  if (d < 1) throw Error("c_d: d must be at least 1");
  return std::exp(log_c_d(d));
}

double c_dk(int d, int k) {
  if (d < 2 || k < 1) throw Error("c_dk: need d >= 2 and k >= 1");
  const double dd = d;
  const double log_value = log_c_d(d - 1) - log_factorial(k - 1) +
                           (2.0 - dd - 1.0 / dd) * log_theta(d) +
                           (2.0 * dd - 3.0) * log_theta(d - 1) + (1.0 - dd) * log_theta(d - 2) +
                           (dd + k - 3.0 + 1.0 / dd) * std::log(1.0 - 1.0 / dd) +
                           (-1.0 + 1.0 / dd) * std::log(2.0);
  return std::exp(log_value);
}

double H(double t) {
  if (t < 0.0) throw Error("H: argument must be nonnegative");
  if (t == 0.0) return 1.0;
  return 1.0 - t + t * std::log(t);
}

double hatH(double a, double x) {
  if (a < 0.0 || x < 0.0) throw Error("hatH: arguments must be nonnegative");
  if (a == 0.0) return x;
  // g(y) = y H(a/y) = y - a + a log(a/y) increases from 0 at y = a.
  auto g = [a](double y) { return y * H(a / y); };
  double lo = a;
  double hi = a + x + 1.0;
  while (g(hi) < x) hi = a + 2.0 * (hi - a);
  for (int iter = 0; iter < 200; ++iter) {
    if (hi - lo <= 1e-12) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < x)
      lo = mid;
    else
      hi = mid;
  }
  if (hi - lo <= 1e-12 * std::max(1.0, hi)) return 0.5 * (lo + hi);
  throw Error("hatH: bisection did not converge");
}

double weak_transform(double R, double n, int d, int k, double f0) {
  require_loglog(n);
  const double dd = d;
  return n * theta(d) * f0 * std::pow(R, d) / 2.0 - (dd - 1.0) / dd * std::log(n * f0) -
         (dd + k - 3.0 + 1.0 / dd) * std::log(std::log(n));
}

double interior_transform(double R, double n, int d, int k, double f0) {
  require_loglog(n);
  return n * theta(d) * f0 * std::pow(R, d) - std::log(n * f0) -
         (d + k - 2.0) * std::log(std::log(n));
}

double weak_transform_slope(double R, double n, int d, double f0) {
  return n * theta(d) * f0 * d * std::pow(R, d - 1) / 2.0;
}

double interior_transform_slope(double R, double n, int d, double f0) {
  return n * theta(d) * f0 * d * std::pow(R, d - 1);
}

void LimitLaw::validate() const {
  if (d < 2) throw Error("LimitLaw: d must be at least 2");
  if (k < 1) throw Error("LimitLaw: k must be at least 1");
  if (!(f0 > 0.0)) throw Error("LimitLaw: f0 must be positive");
  if (f1 && !(*f1 > 0.0)) throw Error("LimitLaw: f1 must be positive");
  if (!(vB > 0.0)) throw Error("LimitLaw: v(B) must be positive");
  if (svB < 0.0) throw Error("LimitLaw: boundary measure must be nonnegative");
  if (!beta.infinite && beta.value < 0.0) throw Error("LimitLaw: beta must be nonnegative");
}

double weak_limit_cdf(const LimitLaw& law, double zeta) {
  law.validate();
  if (law.d == 2 && law.k == 1) {
    return std::exp(-law.vB * std::exp(-2.0 * zeta) - c_dk(2, 1) * law.svB * std::exp(-zeta));
  }
  if (law.svB == 0.0) {
    if (law.touches_boundary)
      throw Refusal("weak_limit_cdf: B touches the boundary with zero boundary measure; "
                    "no limit law is known for (d,k) = (" +
                    std::to_string(law.d) + "," + std::to_string(law.k) + ")");
    return 1.0;
  }
  return std::exp(-c_dk(law.d, law.k) * law.svB * std::exp(-zeta));
}

double interior_limit_cdf(const LimitLaw& law, double beta) {
  law.validate();
  return std::exp(-std::exp(log_c_d(law.d) - log_factorial(law.k - 1)) * law.vB *
                  std::exp(-beta));
}

double slln_limit(int d, Beta beta, double f0, std::optional<double> f1, SllnMode mode) {
  if (d < 2) throw Error("slln_limit: d must be at least 2");
  if (!(f0 > 0.0)) throw Error("slln_limit: f0 must be positive");
  if (f1 && !(*f1 > 0.0)) throw Error("slln_limit: f1 must be positive");
  const double inv_f1 = f1 ? 1.0 / *f1 : 0.0;
  if (beta.infinite) {
    if (mode == SllnMode::Interior) return 1.0 / f0;
    return std::max(1.0 / f0, 2.0 * inv_f1);
  }
  if (beta.value < 0.0) throw Error("slln_limit: beta must be nonnegative");
  const double interior = hatH(beta.value, 1.0) / f0;
  if (mode == SllnMode::Interior) return interior;
  return std::max(interior, 2.0 * hatH(beta.value, 1.0 - 1.0 / d) * inv_f1);
}

}  // namespace covlab
