#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "seqar/errors.hpp"
#include "seqar/process.hpp"

using namespace seqar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("white noise passes straight through", "[process]") {
  const SeriesBuffer buf = simulate(ParamVector{0.0}, NoiseSpec::cycle({1.5, -2.0, 0.25}), 6, 0);
  const std::vector<double> expected = {1.5, -2.0, 0.25, 1.5, -2.0, 0.25};
  CHECK(std::vector<double>(buf.observed().begin(), buf.observed().end()) == expected);

  const SeriesBuffer g = simulate(ParamVector{0.0}, NoiseSpec::gaussian(1.0), 50, 4);
  NoiseSource src(NoiseSpec::gaussian(1.0), 4);
  for (double x : g.observed()) CHECK(x == src.next());
}

TEST_CASE("unit root with unit noise counts up", "[process]") {
  const SeriesBuffer buf = simulate(ParamVector{1.0}, NoiseSpec::cycle({1.0}), 5, 0);
  for (long k = 1; k <= 5; ++k) CHECK(buf.x(k) == static_cast<double>(k));
  CHECK(buf.x(0) == 0.0);
  CHECK(buf.n() == 5);
}

TEST_CASE("presample is zero", "[process]") {
  const SeriesBuffer buf = simulate(ParamVector{0.2, 0.1, 0.3}, NoiseSpec::gaussian(1.0), 10, 1);
  CHECK(buf.values.size() == 13);
  for (long k = -2; k <= 0; ++k) CHECK(buf.x(k) == 0.0);
}

TEST_CASE("recursion holds exactly", "[process]") {
  const ParamVector theta{0.5, -0.25};
  NoiseSource eps(NoiseSpec::rademacher(2.0), 9);
  const SeriesBuffer buf = simulate(theta, NoiseSpec::rademacher(2.0), 100, 9);
  for (long k = 1; k <= 100; ++k) {
    const double e = eps.next();
    CHECK(buf.x(k) == e + 0.5 * buf.x(k - 1) + -0.25 * buf.x(k - 2));
  }
}

TEST_CASE("same seed reproduces the series", "[process]") {
  for (const char* law : {"gaussian", "rademacher", "uniform"}) {
    const NoiseSpec spec = NoiseSpec::parse(law, 1.3);
    const SeriesBuffer a = simulate(ParamVector{0.9, -0.2}, spec, 500, 77);
    const SeriesBuffer b = simulate(ParamVector{0.9, -0.2}, spec, 500, 77);
    const SeriesBuffer c = simulate(ParamVector{0.9, -0.2}, spec, 500, 78);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
  }
}

TEST_CASE("stream agrees with simulate and restarts", "[process]") {
  const ParamVector theta{1.0, -1.0};
  const NoiseSpec noise = NoiseSpec::gaussian(1.0);
  const SeriesBuffer buf = simulate(theta, noise, 200, 12);
  ArStream stream(theta, noise, 12);
  for (double x : buf.observed()) CHECK(stream.next() == x);
  CHECK(stream.count() == 200);
  stream.restart();
  CHECK(stream.count() == 0);
  for (double x : buf.observed()) CHECK(stream.next() == x);
}

TEST_CASE("explosive impulse response", "[process]") {
  ArStream stream(ParamVector{2.0}, NoiseSpec::impulse({1.0}), 0);
  CHECK(stream.next() == 1.0);
  CHECK(stream.next() == 2.0);
  CHECK(stream.next() == 4.0);
  CHECK(stream.next() == 8.0);
}

TEST_CASE("overflow names the first non-finite index", "[process]") {
  // x_k = 10^{k-1}, which leaves the double range at k = 310.
  try {
    simulate(ParamVector{10.0}, NoiseSpec::impulse({1.0}), 400, 0);
    FAIL("expected OverflowDetected");
  } catch (const OverflowDetected& e) {
    CHECK(e.index() == 310);
  }
}

TEST_CASE("noise laws have mean zero and variance sigma2", "[process]") {
  constexpr std::size_t n = 1'000'000;
  for (const char* law : {"gaussian", "rademacher", "uniform"}) {
    for (double sigma2 : {1.0, 2.5}) {
      NoiseSource src(NoiseSpec::parse(law, sigma2), 2023);
      double sum = 0, sumsq = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double e = src.next();
        sum += e;
        sumsq += e * e;
      }
      const double mean = sum / n;
      const double var = sumsq / n - mean * mean;
      INFO(law << " sigma2=" << sigma2);
      CHECK(std::abs(mean) <= 4 * std::sqrt(sigma2) / 1e3);
      CHECK_THAT(var, WithinRel(sigma2, 0.01));
    }
  }
}

TEST_CASE("rademacher and uniform supports", "[process]") {
  NoiseSource r(NoiseSpec::rademacher(4.0), 1);
  NoiseSource u(NoiseSpec::uniform(4.0), 1);
  const double edge = 2.0 * std::sqrt(3.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = r.next();
    CHECK((x == 2.0 || x == -2.0));
    const double y = u.next();
    CHECK(std::abs(y) <= edge);
  }
}

TEST_CASE("lag-energy identity", "[process]") {
  for (int p = 1; p <= 5; ++p) {
    const ParamVector theta(Eigen::VectorXd::Constant(p, 0.9 / p));
    const std::size_t n = 777;
    const SeriesBuffer buf = simulate(theta, NoiseSpec::gaussian(1.0), n, 100 + p);
    const long N = static_cast<long>(n);
    double lhs = 0, lag_norms = 0, tail = 0;
    for (long k = 1; k <= N; ++k) {
      lhs += buf.x(k - 1) * buf.x(k - 1);
      for (int i = 1; i <= p; ++i) lag_norms += buf.x(k - i) * buf.x(k - i);
    }
    for (int i = 2; i <= p; ++i)
      for (long l = N - i + 2; l <= N; ++l) tail += buf.x(l - 1) * buf.x(l - 1);
    CHECK_THAT(lag_norms / p + tail / p, WithinRel(lhs, 1e-9));
  }
}

TEST_CASE("noise spec parsing", "[process]") {
  CHECK(NoiseSpec::parse("gaussian", 1.0).law == NoiseLaw::Gaussian);
  CHECK(NoiseSpec::parse("rademacher", 1.0).law == NoiseLaw::Rademacher);
  CHECK(NoiseSpec::parse("uniform", 1.0).law == NoiseLaw::Uniform);
  const NoiseSpec t = NoiseSpec::parse("table:1,-2.5, 3", 1.0);
  CHECK(t.law == NoiseLaw::Table);
  CHECK(t.cyclic);
  CHECK(t.table == std::vector<double>{1.0, -2.5, 3.0});
  CHECK_FALSE(t.stochastic());
  CHECK(t.describe() == "table:1,-2.5,3");
  const NoiseSpec imp = NoiseSpec::parse("impulse:1", 1.0);
  CHECK_FALSE(imp.cyclic);
  CHECK(imp.describe() == "impulse:1");

  CHECK_THROWS_AS(NoiseSpec::parse("cauchy", 1.0), InvalidArgument);
  CHECK_THROWS_AS(NoiseSpec::parse("table:", 1.0), InvalidArgument);
  CHECK_THROWS_AS(NoiseSpec::parse("table:1,x", 1.0), InvalidArgument);
  CHECK_THROWS_AS(NoiseSpec::parse("gaussian", 0.0), InvalidArgument);
  CHECK_THROWS_AS(NoiseSpec::parse("gaussian", -1.0), InvalidArgument);
}

TEST_CASE("replication seeds", "[process]") {
  CHECK(replication_seed(0, 5) == 5);
  CHECK(replication_seed(12, 5) == (12u ^ 5u));
  CHECK(replication_seed(7, 0) == 7);
}

TEST_CASE("CSV round trip is bit exact", "[process]") {
  const SeriesBuffer buf = simulate(ParamVector{0.95}, NoiseSpec::gaussian(0.7), 300, 5);
  std::stringstream ss;
  write_series_csv(ss, buf.observed());
  const std::vector<double> back = read_series_csv(ss);
  CHECK(back == std::vector<double>(buf.observed().begin(), buf.observed().end()));

  std::stringstream small;
  write_series_csv(small, std::vector<double>{1.0, 0.1, -3e-300});
  CHECK(small.str() == "k,x\n1,1\n2,0.1\n3,-3e-300\n");
}

TEST_CASE("CSV parse errors carry the line number", "[process]") {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream is(text);
    try {
      read_series_csv(is);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("") == 1);
  CHECK(line_of("x,k\n1,1\n") == 1);
  CHECK(line_of("k,x\n1,1\n2,abc\n") == 3);
  CHECK(line_of("k,x\n1,1\n3,1\n") == 3);
  CHECK(line_of("k,x\n1,1\n2\n") == 3);
  CHECK(line_of("k,x\n1,inf\n") == 2);
  CHECK(line_of("k,x\r\n1,1\r\n2,2\r\n") == 0);
}
