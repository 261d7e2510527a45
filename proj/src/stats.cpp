#include "seqar/stats.hpp"

#include <algorithm>
#include <cmath>

#include "seqar/errors.hpp"

namespace seqar {

namespace {

std::vector<double> sorted_copy(std::span<const double> v, const char* what) {
  if (v.empty()) throw InvalidArgument(std::string(what) + ": empty sample");
  std::vector<double> out(v.begin(), v.end());
  for (double x : out)
    if (std::isnan(x)) throw InvalidArgument(std::string(what) + ": NaN in sample");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_one_sample(std::span<const double> samples,
                     const std::function<double(double)>& cdf) {
  const std::vector<double> s = sorted_copy(samples, "ks_one_sample");
  const double n = static_cast<double>(s.size());
  double d = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f,
                  f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  const std::vector<double> x = sorted_copy(a, "ks_two_sample");
  const std::vector<double> y = sorted_copy(b, "ks_two_sample");
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

double quantile(std::span<const double> samples, double q) {
  if (!(q >= 0 && q <= 1)) throw InvalidArgument("quantile level must be in [0, 1]");
  const std::vector<double> s = sorted_copy(samples, "quantile");
  const double pos = static_cast<double>(s.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

std::vector<double> quantiles(std::span<const double> samples,
                              std::span<const double> levels) {
  std::vector<double> out;
  out.reserve(levels.size());
  for (double q : levels) out.push_back(quantile(samples, q));
  return out;
}

}  // namespace seqar
