#ifndef SEQAR_STATS_HPP
#define SEQAR_STATS_HPP

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace seqar {

/// Probability levels reported by every distribution summary.
inline constexpr std::array<double, 7> kReportLevels = {0.01, 0.05, 0.25, 0.50,
                                                        0.75, 0.95, 0.99};

double normal_cdf(double x);

/// sup_x |F_n(x) - F(x)|, evaluated on both sides of every jump of F_n.
double ks_one_sample(std::span<const double> samples,
                     const std::function<double(double)>& cdf);

/// sup_x |F_a(x) - F_b(x)| by a merge over the sorted samples; ties are
/// stepped over together.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Linear interpolation between order statistics at (n - 1) q (type 7).
double quantile(std::span<const double> samples, double q);
std::vector<double> quantiles(std::span<const double> samples,
                              std::span<const double> levels);
inline double median(std::span<const double> samples) {
  return quantile(samples, 0.5);
}

}  // namespace seqar

#endif  // SEQAR_STATS_HPP
