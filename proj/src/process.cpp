#include "seqar/process.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "seqar/errors.hpp"

namespace seqar {

namespace {

void require_positive(double sigma2) {
  if (!(sigma2 > 0) || !std::isfinite(sigma2))
    throw InvalidArgument("sigma2 must be positive and finite");
}

std::optional<double> parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    return std::nullopt;
  return v;
}

std::vector<double> parse_values(std::string_view list) {
  std::vector<double> out;
  while (true) {
    const auto comma = list.find(',');
    const auto v = parse_number(list.substr(0, comma));
    if (!v || !std::isfinite(*v))
      throw InvalidArgument("malformed noise table value in '" +
                            std::string(list) + "'");
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

NoiseSpec NoiseSpec::gaussian(double sigma2) {
  require_positive(sigma2);
  return {NoiseLaw::Gaussian, sigma2, {}, true};
}

NoiseSpec NoiseSpec::rademacher(double sigma2) {
  require_positive(sigma2);
  return {NoiseLaw::Rademacher, sigma2, {}, true};
}

NoiseSpec NoiseSpec::uniform(double sigma2) {
  require_positive(sigma2);
  return {NoiseLaw::Uniform, sigma2, {}, true};
}

NoiseSpec NoiseSpec::cycle(std::vector<double> values, double sigma2) {
  require_positive(sigma2);
  if (values.empty()) throw InvalidArgument("noise table must not be empty");
  return {NoiseLaw::Table, sigma2, std::move(values), true};
}

NoiseSpec NoiseSpec::impulse(std::vector<double> values, double sigma2) {
  require_positive(sigma2);
  if (values.empty()) throw InvalidArgument("noise table must not be empty");
  return {NoiseLaw::Table, sigma2, std::move(values), false};
}

NoiseSpec NoiseSpec::parse(std::string_view text, double sigma2) {
  if (text == "gaussian") return gaussian(sigma2);
  if (text == "rademacher") return rademacher(sigma2);
  if (text == "uniform") return uniform(sigma2);
  if (text.starts_with("table:")) return cycle(parse_values(text.substr(6)), sigma2);
  if (text.starts_with("impulse:"))
    return impulse(parse_values(text.substr(8)), sigma2);
  throw InvalidArgument("unknown noise law '" + std::string(text) +
                        "' (gaussian|rademacher|uniform|table:..|impulse:..)");
}

std::string NoiseSpec::describe() const {
  switch (law) {
    case NoiseLaw::Gaussian: return "gaussian";
    case NoiseLaw::Rademacher: return "rademacher";
    case NoiseLaw::Uniform: return "uniform";
    case NoiseLaw::Table: break;
  }
  std::string out = cyclic ? "table:" : "impulse:";
  for (std::size_t i = 0; i < table.size(); ++i)
    out += (i ? "," : "") + format_double(table[i]);
  return out;
}

NoiseSource::NoiseSource(const NoiseSpec& spec, std::uint64_t seed)
    : spec_(spec),
      engine_(seed),
      normal_(0.0, std::sqrt(spec.sigma2)),
      uniform_(-std::sqrt(3.0 * spec.sigma2), std::sqrt(3.0 * spec.sigma2)),
      sigma_(std::sqrt(spec.sigma2)) {}

double NoiseSource::next() {
  switch (spec_.law) {
    case NoiseLaw::Gaussian:
      return normal_(engine_);
    case NoiseLaw::Rademacher:
      return (engine_() >> 63) ? sigma_ : -sigma_;
    case NoiseLaw::Uniform:
      return uniform_(engine_);
    case NoiseLaw::Table: {
      const std::size_t i = index_++;
      if (spec_.cyclic) return spec_.table[i % spec_.table.size()];
      return i < spec_.table.size() ? spec_.table[i] : 0.0;
    }
  }
  return 0.0;
}

ArStream::ArStream(ParamVector theta, NoiseSpec noise, std::uint64_t seed)
    : theta_(std::move(theta)),
      noise_spec_(std::move(noise)),
      seed_(seed),
      noise_(noise_spec_, seed_),
      lags_(static_cast<std::size_t>(theta_.order()), 0.0) {}

double ArStream::next() {
  const int p = theta_.order();
  double x = noise_.next();
  for (int i = 0; i < p; ++i) x += theta_[i] * lags_[static_cast<std::size_t>(i)];
  ++count_;
  if (!std::isfinite(x))
    throw OverflowDetected(count_, "non-finite observation at k = " +
                                       std::to_string(count_));
  for (std::size_t i = lags_.size() - 1; i > 0; --i) lags_[i] = lags_[i - 1];
  lags_[0] = x;
  return x;
}

void ArStream::restart() {
  noise_ = NoiseSource(noise_spec_, seed_);
  std::fill(lags_.begin(), lags_.end(), 0.0);
  count_ = 0;
}

SeriesBuffer simulate(const ParamVector& theta, const NoiseSpec& noise,
                      std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  SeriesBuffer buf;
  buf.p = theta.order();
  buf.values.assign(static_cast<std::size_t>(buf.p), 0.0);
  buf.values.reserve(buf.values.size() + n);
  ArStream stream(theta, noise, seed);
  for (std::size_t k = 0; k < n; ++k) buf.values.push_back(stream.next());
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_series_csv(std::ostream& os, std::span<const double> observed) {
  os << "k,x\n";
  for (std::size_t k = 0; k < observed.size(); ++k)
    os << (k + 1) << ',' << format_double(observed[k]) << '\n';
}

std::vector<double> read_series_csv(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(is, line)) throw ParseError(1, "missing header 'k,x'");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "k,x") throw ParseError(lineno, "expected header 'k,x'");

  std::vector<double> out;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(lineno, "expected 'k,x'");
    const std::string_view sv(line);
    const auto k = parse_number(sv.substr(0, comma));
    const auto x = parse_number(sv.substr(comma + 1));
    if (!k || *k != double(out.size() + 1))
      throw ParseError(lineno, "expected k = " + std::to_string(out.size() + 1));
    if (!x || !std::isfinite(*x)) throw ParseError(lineno, "malformed value");
    out.push_back(*x);
  }
  return out;
}

}  // namespace seqar
