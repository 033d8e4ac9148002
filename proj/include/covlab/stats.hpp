#pragma once

#include <functional>
#include <span>
#include <vector>

namespace covlab {

/// One-sample Kolmogorov-Smirnov distance between the empirical CDF of
/// `samples` and `cdf`: max over sorted x_i of
/// max(|i/N - F(x_i)|, |(i-1)/N - F(x_i)|).
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Linear-interpolation quantile (type 7) of unsorted data, q in [0, 1].
double quantile(std::vector<double> data, double q);

/// Upper bound on sup_z F(z + delta) - F(z) for a nondecreasing F, from a
/// lattice on [z_min, z_max] plus the tails outside it.
double cdf_modulus(const std::function<double(double)>& cdf, double delta, double z_min = -40.0,
                   double z_max = 60.0);

}  // namespace covlab
