#ifndef SEQAR_PROCESS_HPP
#define SEQAR_PROCESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqar/types.hpp"

namespace seqar {

enum class NoiseLaw { Gaussian, Rademacher, Uniform, Table };

/// Zero-mean i.i.d. noise with known variance sigma2.
///
/// Gaussian is N(0, sigma2), Rademacher is +-sigma with probability 1/2 and
/// Uniform is U[-sigma sqrt 3, sigma sqrt 3]. Table replays fixed values,
/// either cyclically or once followed by zeros; sigma2 is then only the
/// nominal variance handed to estimators.
struct NoiseSpec {
  NoiseLaw law = NoiseLaw::Gaussian;
  double sigma2 = 1.0;
  std::vector<double> table;
  bool cyclic = true;

  static NoiseSpec gaussian(double sigma2);
  static NoiseSpec rademacher(double sigma2);
  static NoiseSpec uniform(double sigma2);
  static NoiseSpec cycle(std::vector<double> values, double sigma2 = 1.0);
  static NoiseSpec impulse(std::vector<double> values, double sigma2 = 1.0);

  /// Accepts "gaussian", "rademacher", "uniform", "table:v1,v2,..." (cyclic)
  /// and "impulse:v1,v2,..." (values then zeros).
  static NoiseSpec parse(std::string_view text, double sigma2);

  bool stochastic() const { return law != NoiseLaw::Table; }
  std::string describe() const;
};

/// Draws eps_1, eps_2, ... for one noise law from a std::mt19937_64 stream.
class NoiseSource {
 public:
  NoiseSource(const NoiseSpec& spec, std::uint64_t seed);
  double next();

 private:
  NoiseSpec spec_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
  double sigma_;
  std::size_t index_ = 0;
};

/// Observations x_{1-p}, ..., x_0, x_1, ..., x_n with a zero presample.
struct SeriesBuffer {
  int p = 1;
  std::vector<double> values;

  std::size_t n() const { return values.size() - static_cast<std::size_t>(p); }
  /// x_k for 1 - p <= k <= n.
  double x(long k) const { return values[static_cast<std::size_t>(k + p - 1)]; }
  /// x_1, ..., x_n.
  std::span<const double> observed() const {
    return std::span<const double>(values).subspan(static_cast<std::size_t>(p));
  }
};

/// Unbounded generator of x_1, x_2, ... from the AR recursion with zero
/// presample. Single consumer.
class ArStream {
 public:
  ArStream(ParamVector theta, NoiseSpec noise, std::uint64_t seed);

  /// Next observation; throws OverflowDetected on a non-finite value.
  double next();
  std::optional<double> operator()() { return next(); }
  /// Number of observations emitted so far.
  std::size_t count() const { return count_; }
  void restart();

  int order() const { return theta_.order(); }

 private:
  ParamVector theta_;
  NoiseSpec noise_spec_;
  std::uint64_t seed_;
  NoiseSource noise_;
  std::vector<double> lags_;  // x_{k-1}, ..., x_{k-p}
  std::size_t count_ = 0;
};

SeriesBuffer simulate(const ParamVector& theta, const NoiseSpec& noise,
                      std::size_t n, std::uint64_t seed);

/// Per-replication stream seed.
inline std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t index) {
  return seed ^ index;
}

/// Writes header "k,x" and one row per observation, presample omitted. Values
/// use the shortest representation that reads back bit-identical.
void write_series_csv(std::ostream& os, std::span<const double> observed);
/// Reads the format written by write_series_csv; throws ParseError.
std::vector<double> read_series_csv(std::istream& is);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace seqar

#endif  // SEQAR_PROCESS_HPP
