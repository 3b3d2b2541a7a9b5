#include "tbc2d/exact.hpp"

#include <cmath>
#include <stdexcept>

#include "tbc2d/lobatto.hpp"

namespace tbc2d {

Real hermite(int n, Real x) {
  if (n == 0) return 1.0;
  Real hm = 1.0, h = 2.0 * x;
  for (int m = 1; m < n; ++m) {
    const Real hp = 2.0 * x * h - 2.0 * m * hm;
    hm = h;
    h = hp;
  }
  return h;
}

Complex chirped_gaussian_1d(Real x, Real t, Real a, Real b) {
  const Complex ab(a, b);
  const Complex den = 1.0 + 4.0 * Complex(0, 1) * ab * t;
  return std::exp(-ab / den * x * x) / std::sqrt(den);
}

Complex hermite_gaussian_1d(Real x, Real t, int m, Real a) {
  const Real w = std::sqrt(1.0 + 16.0 * a * a * t * t);
  const Complex mu = 1.0 / (1.0 / a + Complex(0, 4.0) * t);
  const Real theta = std::atan(4.0 * a * t);
  const Real gamma2 = std::pow(2.0, m) * std::tgamma(m + 1.0) * std::sqrt(pi) /
                      std::sqrt(2.0 * a);
  return hermite(m, std::sqrt(2.0 * a) * x / w) / std::sqrt(gamma2) *
         std::sqrt(mu / a) *
         std::exp(-mu * x * x - Complex(0, 1) * Real(m) * theta);
}

Complex Profile::eval(Real x1, Real x2, Real t) const {
  Complex acc = 0;
  for (const auto& comp : components) {
    const Real u1 = x1 - comp.c[0] * t;
    const Real u2 = x2 - comp.c[1] * t;
    Complex envelope;
    if (family == ProfileFamily::ChirpedGaussian)
      envelope = chirped_gaussian_1d(u1, t, comp.a[0], comp.b[0]) *
                 chirped_gaussian_1d(u2, t, comp.a[1], comp.b[1]);
    else
      envelope = hermite_gaussian_1d(u1, t, comp.m[0], comp.a[0]) *
                 hermite_gaussian_1d(u2, t, comp.m[1], comp.a[1]);
    const Real cdotx = comp.c[0] * x1 + comp.c[1] * x2;
    const Real cdotc = comp.c[0] * comp.c[0] + comp.c[1] * comp.c[1];
    acc += envelope * std::exp(Complex(0, 0.5 * cdotx - 0.25 * cdotc * t));
  }
  return amplitude * acc;
}

CMatrix Profile::eval_grid(const Vector& xs, const Vector& ys, Real t) const {
  // every component factorizes into 1D profiles times a separable carrier
  CMatrix grid = CMatrix::Zero(xs.size(), ys.size());
  CVector fx(xs.size()), fy(ys.size());
  for (const auto& comp : components) {
    const Real cdotc = comp.c[0] * comp.c[0] + comp.c[1] * comp.c[1];
    const Complex common = std::exp(Complex(0, -0.25 * cdotc * t));
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      const Real u = xs(i) - comp.c[0] * t;
      const Complex env = (family == ProfileFamily::ChirpedGaussian)
                              ? chirped_gaussian_1d(u, t, comp.a[0], comp.b[0])
                              : hermite_gaussian_1d(u, t, comp.m[0], comp.a[0]);
      fx(i) = env * std::exp(Complex(0, 0.5 * comp.c[0] * xs(i)));
    }
    for (Eigen::Index j = 0; j < ys.size(); ++j) {
      const Real v = ys(j) - comp.c[1] * t;
      const Complex env = (family == ProfileFamily::ChirpedGaussian)
                              ? chirped_gaussian_1d(v, t, comp.a[1], comp.b[1])
                              : hermite_gaussian_1d(v, t, comp.m[1], comp.a[1]);
      fy(j) = env * std::exp(Complex(0, 0.5 * comp.c[1] * ys(j)));
    }
    grid.noalias() += common * fx * fy.transpose();
  }
  return amplitude * grid;
}

Profile profile_from_table(ProfileFamily family, ProfileType type, Real c0) {
  Profile p;
  p.family = family;
  p.amplitude = 2.0;
  const std::array<std::array<Real, 2>, 4> supports = {{
      {1.0 / 2.5, 1.0 / 2.4},
      {1.0 / 2.3, 1.0 / 2.2},
      {1.0 / 2.7, 1.0 / 2.6},
      {1.0 / 2.2, 1.0 / 2.5},
  }};
  const std::array<std::array<int, 2>, 4> orders = {{{1, 2}, {2, 1}, {2, 1}, {1, 2}}};
  const Real offset = (type == ProfileType::IIB) ? pi / 4.0 : 0.0;
  for (int j = 0; j < 4; ++j) {
    ProfileComponent comp;
    comp.a = supports[j];
    comp.b = {0.5, 0.5};
    comp.m = orders[j];
    const Real theta = j * pi / 2.0 + offset;
    comp.c = {c0 * std::cos(theta), c0 * std::sin(theta)};
    p.components.push_back(comp);
  }
  return p;
}

Real energy_content(const Profile& profile, const DomainMap& dom, Real t) {
  static const QuadratureRule ref = lgl_grid(200);
  auto box_energy = [&](Real when) {
    Real acc = 0.0;
    for (Eigen::Index i = 0; i < ref.nodes.size(); ++i) {
      const Real x = dom.to_physical_x(ref.nodes(i));
      for (Eigen::Index j = 0; j < ref.nodes.size(); ++j) {
        const Real y = dom.to_physical_y(ref.nodes(j));
        acc += ref.weights(i) * ref.weights(j) * std::norm(profile.eval(x, y, when));
      }
    }
    return dom.j1 * dom.j2 * acc;
  };
  const Real e0 = box_energy(0.0);
  if (e0 <= 0.0) throw std::runtime_error("energy_content: zero initial energy");
  return box_energy(t) / e0;
}

}  // namespace tbc2d
