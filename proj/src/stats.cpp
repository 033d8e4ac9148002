#include "covlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "covlab/manifold.hpp"

namespace covlab {

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error("ks_distance: no samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, std::fabs(above), std::fabs(below)});
  }
  return std::min(1.0, d);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double quantile(std::vector<double> data, double q) {
  if (data.empty()) throw Error("quantile: no data");
  std::sort(data.begin(), data.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(data.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, data.size() - 1);
  return data[lo] + (pos - static_cast<double>(lo)) * (data[hi] - data[lo]);
}

double cdf_modulus(const std::function<double(double)>& cdf, double delta, double z_min,
                   double z_max) {
  if (delta <= 0.0) return 0.0;
  const double step = std::min(delta, 0.01);
  // For z in [z_j, z_j + step]: F(z + delta) - F(z) <= F(z_j + step + delta) - F(z_j).
  double worst = cdf(z_min + delta);  // covers z < z_min
  for (double z = z_min; z <= z_max; z += step)
    worst = std::max(worst, cdf(z + step + delta) - cdf(z));
  worst = std::max(worst, 1.0 - cdf(z_max));  // covers z > z_max
  return std::min(1.0, worst);
}

}  // namespace covlab
