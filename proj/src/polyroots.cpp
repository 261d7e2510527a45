#include "seqar/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace seqar {

namespace {

using Real = long double;
using Complex = std::complex<Real>;

constexpr int kMaxIterations = 2000;
// Radius for merging candidate multiple roots whose members the iteration
// leaves spread by roughly eps^(1/m).
constexpr double kLooseMergeRadius = 1e-5;

struct Evaluation {
  Complex value;
  Complex derivative;
  Real abs_bound;  // sum |a_i| |z|^(n-i)
};

Evaluation evaluate(const std::vector<Real>& a, Complex z) {
  Complex p = a[0];
  Complex dp = 0;
  const Real az = std::abs(z);
  Real bound = std::fabs(a[0]);
  for (std::size_t i = 1; i < a.size(); ++i) {
    dp = dp * z + p;
    p = p * z + a[i];
    bound = bound * az + std::fabs(a[i]);
  }
  return {p, dp, bound};
}

Real residual_limit(const std::vector<Real>& a, Real bound) {
  const Real eps = std::numeric_limits<Real>::epsilon();
  return Real(4 * a.size() + 4) * eps * bound;
}

std::string describe(const ParamVector& theta) {
  std::ostringstream os;
  os.precision(17);
  os << "theta = (";
  for (int i = 0; i < theta.order(); ++i) os << (i ? ", " : "") << theta[i];
  os << ")";
  return os.str();
}

// Simultaneous Aberth-Ehrlich iteration on a monic polynomial with a
// non-zero constant term.
std::vector<Complex> aberth(const std::vector<Real>& a,
                            const ParamVector& theta) {
  const std::size_t n = a.size() - 1;
  std::vector<Complex> z(n);
  if (n == 0) return z;
  if (n == 1) {
    z[0] = -a[1];
    return z;
  }

  Real radius = 0;
  for (std::size_t i = 1; i <= n; ++i)
    radius = std::max(radius, std::pow(std::fabs(a[i]), Real(1) / Real(i)));
  if (radius == 0) radius = 1;
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  for (std::size_t k = 0; k < n; ++k) {
    const Real angle = two_pi * Real(k) / Real(n) + Real(0.4);
    z[k] = std::polar(radius, angle);
  }

  std::vector<bool> done(n, false);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    bool all_done = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      const Evaluation e = evaluate(a, z[k]);
      if (std::abs(e.value) <= residual_limit(a, e.abs_bound)) {
        done[k] = true;
        continue;
      }
      all_done = false;
      if (e.derivative == Complex(0)) {
        z[k] *= Complex(1, Real(1e-3));
        continue;
      }
      const Complex w = e.value / e.derivative;
      Complex s = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k && z[j] != z[k]) s += Real(1) / (z[k] - z[j]);
      z[k] -= w / (Real(1) - w * s);
    }
    if (all_done) return z;
  }

  // Slow linear convergence towards multiple roots can exhaust the budget
  // while already sitting at the rounding floor.
  for (std::size_t k = 0; k < n; ++k) {
    const Evaluation e = evaluate(a, z[k]);
    if (!std::isfinite(std::abs(z[k])) ||
        std::abs(e.value) > Real(1e4) * residual_limit(a, e.abs_bound))
      throw RootFinderError("root finder did not converge for " +
                            describe(theta));
  }
  return z;
}

// Real roots stay on the axis; the rest are matched into exact conjugate
// pairs.
void symmetrize(std::vector<Complex>& z, Real tol) {
  std::vector<std::size_t> upper;
  std::vector<std::size_t> lower;
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (std::fabs(z[k].imag()) <= tol)
      z[k] = Complex(z[k].real(), 0);
    else if (z[k].imag() > 0)
      upper.push_back(k);
    else
      lower.push_back(k);
  }
  std::vector<bool> used(lower.size(), false);
  for (std::size_t u : upper) {
    std::size_t best = lower.size();
    Real best_dist = std::numeric_limits<Real>::infinity();
    for (std::size_t l = 0; l < lower.size(); ++l) {
      if (used[l]) continue;
      const Real d = std::abs(z[u] - std::conj(z[lower[l]]));
      if (d < best_dist) {
        best_dist = d;
        best = l;
      }
    }
    if (best == lower.size()) {
      z[u] = Complex(z[u].real(), 0);
      continue;
    }
    used[best] = true;
    const Complex& m = z[lower[best]];
    const Complex avg((z[u].real() + m.real()) / 2,
                      (z[u].imag() - m.imag()) / 2);
    z[u] = avg;
    z[lower[best]] = std::conj(avg);
  }
  for (std::size_t l = 0; l < lower.size(); ++l)
    if (!used[l]) z[lower[l]] = Complex(z[lower[l]].real(), 0);
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct Cluster {
  Complex mean;
  int size;
};

std::vector<Cluster> collect(const std::vector<Complex>& z, DisjointSets& ds) {
  std::vector<Cluster> out;
  std::vector<std::size_t> slot(z.size(), z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    const std::size_t r = ds.find(k);
    if (slot[r] == z.size()) {
      slot[r] = out.size();
      out.push_back({0, 0});
    }
    out[slot[r]].mean += z[k];
    out[slot[r]].size += 1;
  }
  for (Cluster& c : out) c.mean /= Real(c.size);
  return out;
}

}  // namespace

int RootSet::degree() const {
  int d = 0;
  for (const Root& r : roots) d += r.multiplicity;
  return d;
}

double RootSet::max_modulus() const {
  double m = 0;
  for (const Root& r : roots) m = std::max(m, std::abs(r.value));
  return m;
}

std::vector<std::complex<double>> RootSet::flattened() const {
  std::vector<std::complex<double>> out;
  for (const Root& r : roots)
    for (int i = 0; i < r.multiplicity; ++i) out.push_back(r.value);
  return out;
}

RootSet char_roots(const ParamVector& theta, double tol) {
  if (!(tol > 0 && tol <= 1e-3))
    throw InvalidArgument("root tolerance must lie in (0, 1e-3]");

  std::vector<Real> a(theta.order() + 1);
  a[0] = 1;
  for (int i = 0; i < theta.order(); ++i) a[i + 1] = -Real(theta[i]);

  std::vector<Complex> z;
  while (a.size() > 1 && a.back() == 0) {
    z.emplace_back(0);
    a.pop_back();
  }
  const std::vector<Complex> nonzero = aberth(a, theta);
  z.insert(z.end(), nonzero.begin(), nonzero.end());

  const Real rtol = tol;
  symmetrize(z, rtol);

  DisjointSets ds(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (std::abs(z[i] - z[j]) <= rtol) ds.unite(i, j);

  std::vector<Real> full(theta.order() + 1);
  full[0] = 1;
  for (int i = 0; i < theta.order(); ++i) full[i + 1] = -Real(theta[i]);

  // Second pass: merge nearby groups into one multiple root when the merged
  // centre is a root to working precision.
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t i = 0; i < z.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < z.size() && !merged; ++j) {
        const std::size_t ri = ds.find(i);
        const std::size_t rj = ds.find(j);
        if (ri == rj || std::abs(z[i] - z[j]) > Real(kLooseMergeRadius))
          continue;
        Complex sum = 0;
        int count = 0;
        for (std::size_t k = 0; k < z.size(); ++k) {
          const std::size_t rk = ds.find(k);
          if (rk == ri || rk == rj) {
            sum += z[k];
            ++count;
          }
        }
        const Complex centre = sum / Real(count);
        const Evaluation e = evaluate(full, centre);
        if (std::abs(e.value) <= Real(1e3) * residual_limit(full, e.abs_bound)) {
          ds.unite(ri, rj);
          merged = true;
        }
      }
    }
  }

  RootSet out;
  out.tol = tol;
  int total = 0;
  for (const Cluster& c : collect(z, ds)) {
    if (std::fabs(c.mean.imag()) <= rtol) {
      out.roots.push_back(
          {std::complex<double>(double(c.mean.real()), 0.0), c.size, false});
      total += c.size;
    } else if (c.mean.imag() > 0) {
      const std::complex<double> v(double(c.mean.real()),
                                   double(c.mean.imag()));
      out.roots.push_back({v, c.size, false});
      out.roots.push_back({std::conj(v), c.size, false});
      total += 2 * c.size;
    }
  }
  if (total != theta.order())
    throw RootFinderError("conjugate pairing of roots failed for " +
                          describe(theta));

  for (Root& r : out.roots) {
    r.on_unit_circle = std::fabs(std::abs(r.value) - 1.0) <= tol;
    if (r.on_unit_circle) out.rho = std::max(out.rho, r.multiplicity);
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const Root& x, const Root& y) {
              const double mx = std::abs(x.value);
              const double my = std::abs(y.value);
              if (mx != my) return mx > my;
              if (x.value.imag() != y.value.imag())
                return x.value.imag() > y.value.imag();
              return x.value.real() > y.value.real();
            });
  return out;
}

std::string RegionClass::name() const {
  switch (kind) {
    case Kind::Stable:
      return "Stable";
    case Kind::Boundary:
      return "Gamma" + std::to_string(gamma);
    case Kind::BoundaryOther:
      return "BoundaryOther";
    case Kind::Explosive:
      return "Explosive";
  }
  return "Unknown";
}

RegionClass classify_region(const RootSet& roots) {
  const double tol = roots.tol;
  bool all_inside = true;
  for (const Root& r : roots.roots) {
    const double m = std::abs(r.value);
    if (m > 1.0 + tol) return RegionClass::explosive();
    if (m >= 1.0 - tol) all_inside = false;
  }
  if (all_inside) return RegionClass::stable();

  int minus_one = 0;
  int plus_one = 0;
  int pairs = 0;
  std::optional<double> phi;
  for (const Root& r : roots.roots) {
    if (!r.on_unit_circle) continue;
    if (r.multiplicity > 1) return RegionClass::other();
    if (r.value.imag() == 0.0) {
      (r.value.real() < 0 ? minus_one : plus_one) += 1;
    } else if (r.value.imag() > 0) {
      ++pairs;
      phi = std::arg(r.value);
    }
  }
  if (pairs > 1) return RegionClass::other();

  // (# at -1, # at +1, # complex pairs) -> stratum index
  const int key = minus_one * 100 + plus_one * 10 + pairs;
  switch (key) {
    case 100: return RegionClass::boundary(1);
    case 10:  return RegionClass::boundary(2);
    case 1:   return RegionClass::boundary(3, phi);
    case 110: return RegionClass::boundary(4);
    case 101: return RegionClass::boundary(5, phi);
    case 11:  return RegionClass::boundary(6, phi);
    case 111: return RegionClass::boundary(7, phi);
    default:  return RegionClass::other();
  }
}

Eigen::VectorXd UnitFactorization::stable_polynomial() const {
  Eigen::VectorXd c(stable_coeffs.size() + 1);
  c[0] = 1.0;
  c.tail(stable_coeffs.size()) = stable_coeffs;
  return c;
}

Eigen::VectorXd UnitFactorization::expand() const {
  Eigen::VectorXd poly = stable_polynomial();
  if (delta1) poly = poly_multiply(poly, Eigen::Vector2d(1.0, 1.0));
  if (delta2) poly = poly_multiply(poly, Eigen::Vector2d(1.0, -1.0));
  if (delta3)
    poly = poly_multiply(poly, Eigen::Vector3d(1.0, -2.0 * std::cos(*phi), 1.0));
  return poly;
}

UnitFactorization factor_unit_roots(const ParamVector& theta, double tol) {
  const RegionClass cls = classify_region(char_roots(theta, tol));
  if (cls.kind == RegionClass::Kind::Explosive)
    throw InvalidArgument("explosive parameter has no unit-root factorization");
  if (cls.kind == RegionClass::Kind::BoundaryOther)
    throw UnsupportedBoundary(
        "repeated unit roots or several complex unit pairs are not supported");

  UnitFactorization fac;
  switch (cls.gamma) {
    case 0: break;
    case 1: fac.delta1 = 1; break;
    case 2: fac.delta2 = 1; break;
    case 3: fac.delta3 = 1; break;
    case 4: fac.delta1 = fac.delta2 = 1; break;
    case 5: fac.delta1 = fac.delta3 = 1; break;
    case 6: fac.delta2 = fac.delta3 = 1; break;
    case 7: fac.delta1 = fac.delta2 = fac.delta3 = 1; break;
  }
  fac.phi = cls.phi;

  Eigen::VectorXd unit = Eigen::VectorXd::Ones(1);
  if (fac.delta1) unit = poly_multiply(unit, Eigen::Vector2d(1.0, 1.0));
  if (fac.delta2) unit = poly_multiply(unit, Eigen::Vector2d(1.0, -1.0));
  if (fac.delta3)
    unit = poly_multiply(unit, Eigen::Vector3d(1.0, -2.0 * std::cos(*fac.phi), 1.0));

  // Long division of the monic characteristic polynomial by the monic
  // unit-root factor.
  Eigen::VectorXd rem = characteristic_polynomial(theta.coeffs());
  const Eigen::Index d = unit.size() - 1;
  const Eigen::Index q_len = rem.size() - d;
  Eigen::VectorXd quotient(q_len);
  for (Eigen::Index i = 0; i < q_len; ++i) {
    quotient[i] = rem[i];
    for (Eigen::Index j = 0; j <= d; ++j) rem[i + j] -= quotient[i] * unit[j];
  }
  fac.stable_coeffs = quotient.tail(q_len - 1);
  return fac;
}

ParamVector theta_from_roots(std::span<const std::complex<double>> roots) {
  if (roots.empty()) throw InvalidArgument("at least one root is required");
  std::vector<std::complex<double>> c{1.0};
  for (const auto& z : roots) {
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= z * c[i];
    }
    c = std::move(next);
  }
  double scale = 0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  Eigen::VectorXd theta(roots.size());
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (std::abs(c[i].imag()) > 1e-12 * scale)
      throw InvalidArgument("roots are not closed under conjugation");
    theta[static_cast<Eigen::Index>(i - 1)] = -c[i].real();
  }
  return ParamVector(theta);
}

ParamVector theta_from_polynomial(const Eigen::VectorXd& monic) {
  if (monic.size() < 2 || monic[0] != 1.0)
    throw InvalidArgument("expected a monic polynomial of degree >= 1");
  return ParamVector(Eigen::VectorXd(-monic.tail(monic.size() - 1)));
}

}  // namespace seqar
