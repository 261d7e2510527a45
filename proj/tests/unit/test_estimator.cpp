#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "seqar/errors.hpp"
#include "seqar/estimator.hpp"
#include "seqar/process.hpp"

using namespace seqar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Fisher state from a zero presample", "[estimator]") {
  FisherState s(1);
  s.update(1.0);
  CHECK(s.M()(0, 0) == 0.0);
  CHECK(s.S()[0] == 0.0);
  CHECK(s.n() == 1);
  s.update(2.0);
  CHECK(s.M()(0, 0) == 1.0);
  CHECK(s.S()[0] == 2.0);
  CHECK(s.trace() == 1.0);

  FisherState two(2);
  two.update(1.0);
  two.update(1.0);
  Eigen::Matrix2d expected;
  expected << 1, 0, 0, 0;
  CHECK(two.M() == expected);
  CHECK(two.lag_window()[0] == 1.0);
  CHECK(two.lag_window()[1] == 1.0);
}

TEST_CASE("Fisher state rejects non-finite input", "[estimator]") {
  FisherState s(2);
  CHECK_THROWS_AS(s.update(std::nan("")), InvalidArgument);
  CHECK_THROWS_AS(s.update(INFINITY), InvalidArgument);
  CHECK_THROWS_AS(FisherState(0), InvalidArgument);
}

TEST_CASE("streaming sums equal batch sums", "[estimator]") {
  for (int p = 1; p <= 5; ++p) {
    const ParamVector theta(Eigen::VectorXd::Constant(p, 0.8 / p));
    const SeriesBuffer buf = simulate(theta, NoiseSpec::gaussian(1.0), 2000, 40 + p);
    FisherState s(p);
    for (double x : buf.observed()) s.update(x);

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd S = Eigen::VectorXd::Zero(p);
    for (long k = 1; k <= static_cast<long>(buf.n()); ++k) {
      Eigen::VectorXd lag(p);
      for (int i = 0; i < p; ++i) lag[i] = buf.x(k - 1 - i);
      M += lag * lag.transpose();
      S += lag * buf.x(k);
    }
    CHECK((s.M() - M).norm() <= 1e-10 * M.norm());
    CHECK((s.S() - S).norm() <= 1e-10 * std::max(1.0, S.norm()));
    CHECK(s.trace() == s.M().diagonal().sum());
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s.M()).eigenvalues().minCoeff() >=
          -1e-9 * M.norm());
  }
}

TEST_CASE("least squares estimate", "[estimator]") {
  FisherState one(1);
  one.update(1.0);
  CHECK(lse(one) == Eigen::VectorXd::Zero(1));
  one.update(2.0);
  CHECK_THAT(lse(one)[0], WithinAbs(2.0, 1e-15));

  // x = 1, 0.5, 0.25 from theta = 0.5 with one impulse
  FisherState s(1);
  for (double x : {1.0, 0.5, 0.25}) s.update(x);
  CHECK(lse(s)[0] == 0.5);
}

TEST_CASE("noiseless identification", "[estimator]") {
  for (const ParamVector& theta :
       {ParamVector{0.5, -0.3}, ParamVector{0.2, 0.1, -0.4}, ParamVector{1.0, -1.0},
        ParamVector{0.3, -0.2, 0.1, 0.05}}) {
    const int p = theta.order();
    const SeriesBuffer buf = simulate(theta, NoiseSpec::impulse({1.0}), 3 * p + 5, 0);
    FisherState s(p);
    for (double x : buf.observed()) s.update(x);
    CHECK((lse(s) - theta.coeffs()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("singular Fisher matrix gives the zero estimate", "[estimator]") {
  FisherState s(2);
  for (int i = 0; i < 10; ++i) s.update(0.0);
  CHECK(lse(s).isZero());
}

TEST_CASE("sequential estimate stops at the first crossing", "[estimator]") {
  const std::vector<double> ones(20, 1.0);
  const SequentialResult r = sequential_estimate(std::span<const double>(ones), 1, 2.0, 1.0);
  CHECK(r.stopped);
  CHECK(r.tau == 3);
  CHECK(r.trace == 2.0);
  CHECK(r.overshoot == 0.0);
  CHECK(r.theta_hat[0] == 1.0);

  const std::vector<double> five = {5.0, 1.0, 1.0};
  for (double h : {0.5, 10.0, 25.0}) {
    const SequentialResult f = sequential_estimate(std::span<const double>(five), 1, h, 1.0);
    CHECK(f.tau == 2);
    CHECK(f.overshoot == 25.0 - h);
  }

  // sigma2 scales the threshold
  const SequentialResult scaled =
      sequential_estimate(std::span<const double>(ones), 1, 2.0, 2.0);
  CHECK(scaled.tau == 5);
}

TEST_CASE("sources that run dry or hit max_n do not stop", "[estimator]") {
  const std::vector<double> short_series = {1.0, 1.0};
  const SequentialResult r =
      sequential_estimate(std::span<const double>(short_series), 1, 10.0, 1.0);
  CHECK_FALSE(r.stopped);
  CHECK(r.tau == 2);

  auto zeros = [] { return 0.0; };
  const SequentialResult z = sequential_estimate(zeros, 2, 1.0, 1.0, 1000);
  CHECK_FALSE(z.stopped);
  CHECK(z.tau == 1000);
  CHECK(z.theta_hat.isZero());
}

TEST_CASE("first crossing on deterministic tables", "[estimator]") {
  std::mt19937_64 eng(8);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 1 + trial % 4;
    std::vector<double> table(7);
    for (double& v : table) v = val(eng);
    const double h = 1.0 + std::abs(val(eng) * val(eng)) * 10;
    const double sigma2 = 0.5 + (trial % 3);
    ArStream stream(ParamVector(Eigen::VectorXd::Constant(p, 0.1)),
                    NoiseSpec::cycle(table, sigma2), 0);
    const SequentialResult r = sequential_estimate(stream, p, h, sigma2, 100000);
    REQUIRE(r.stopped);

    // Exhaustive replay: no earlier n reaches the threshold.
    ArStream replay(ParamVector(Eigen::VectorXd::Constant(p, 0.1)),
                    NoiseSpec::cycle(table, sigma2), 0);
    FisherState s(p);
    for (std::size_t n = 1; n < r.tau; ++n) {
      s.update(replay.next());
      CHECK(s.trace() < h * sigma2);
    }
    s.update(replay.next());
    CHECK(s.trace() >= h * sigma2);
    CHECK(r.overshoot >= 0);
    CHECK(r.M_tau == s.M());
  }
}

TEST_CASE("sequential estimate validates its arguments", "[estimator]") {
  const std::vector<double> xs = {1.0};
  CHECK_THROWS_AS(sequential_estimate(std::span<const double>(xs), 1, 0.0, 1.0),
                  InvalidArgument);
  CHECK_THROWS_AS(sequential_estimate(std::span<const double>(xs), 1, 1.0, -1.0),
                  InvalidArgument);
}

TEST_CASE("symmetric square root", "[estimator]") {
  CHECK((sym_sqrt(Eigen::Matrix3d::Identity()) - Eigen::Matrix3d::Identity()).norm() <= 1e-15);
  Eigen::Matrix2d d;
  d << 4, 0, 0, 9;
  Eigen::Matrix2d r;
  r << 2, 0, 0, 3;
  CHECK((sym_sqrt(d) - r).norm() <= 1e-14);

  std::mt19937_64 eng(1);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + trial % 6;
    Eigen::MatrixXd b(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) b(i, j) = z(eng);
    const Eigen::MatrixXd m = b * b.transpose();
    const Eigen::MatrixXd root = sym_sqrt(m);
    CHECK((root * root - m).norm() <= 1e-10 * m.norm());
    CHECK((root - root.transpose()).norm() == 0.0);
  }

  // rank-deficient input is fine
  Eigen::Matrix2d ones = Eigen::Matrix2d::Ones();
  const Eigen::MatrixXd root = sym_sqrt(ones);
  CHECK((root * root - ones).norm() <= 1e-12);

  Eigen::Matrix2d asym;
  asym << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(sym_sqrt(asym), InvalidArgument);
  Eigen::Matrix2d indef;
  indef << 1, 0, 0, -1;
  CHECK_THROWS_AS(sym_sqrt(indef), InvalidArgument);
}

TEST_CASE("normalised residual", "[estimator]") {
  SequentialResult r;
  r.stopped = true;
  r.theta_hat = Eigen::VectorXd::Constant(1, 1.5);
  r.M_tau = Eigen::MatrixXd::Constant(1, 1, 4.0);
  CHECK_THAT(normalized_residual(r, ParamVector{1.0}, 2.0)[0], WithinAbs(0.5, 1e-15));
  CHECK(normalized_residual(r, ParamVector{1.5}, 2.0).isZero());

  r.theta_hat = Eigen::Vector2d(0.3, -0.1);
  r.M_tau = Eigen::Matrix2d::Identity();
  const Eigen::VectorXd v = normalized_residual(r, ParamVector{0.1, 0.1}, 1.0);
  CHECK_THAT(v[0], WithinAbs(0.2, 1e-15));
  CHECK_THAT(v[1], WithinAbs(-0.2, 1e-15));

  r.stopped = false;
  CHECK_THROWS_AS(normalized_residual(r, ParamVector{0.1, 0.1}, 1.0), InvalidArgument);
  r.stopped = true;
  CHECK_THROWS_AS(normalized_residual(r, ParamVector{0.1, 0.1}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(normalized_residual(r, ParamVector{0.1}, 1.0), InvalidArgument);
}

TEST_CASE("Fisher ratio approaches L", "[estimator]") {
  // M_n / sum x_{k-1}^2 for theta = (0.5, -0.3); L from kappa = 0.5 / 1.3.
  const double k1 = 0.5 / 1.3;
  double prev = 1e9;
  for (std::size_t n : {1000u, 100000u}) {
    std::vector<double> devs;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      ArStream stream(ParamVector{0.5, -0.3}, NoiseSpec::gaussian(1.0), seed);
      FisherState s(2);
      for (std::size_t k = 0; k < n; ++k) s.update(stream.next());
      Eigen::Matrix2d L;
      L << 1, k1, k1, 1;
      devs.push_back((s.M() / s.lag1_energy() - L).norm());
    }
    std::sort(devs.begin(), devs.end());
    const double med = 0.5 * (devs[9] + devs[10]);
    CHECK(med < prev);
    prev = med;
  }
  CHECK(prev <= 0.03);
}
