#pragma once

#include <array>
#include <vector>

#include "tbc2d/operators.hpp"
#include "tbc2d/types.hpp"

namespace tbc2d {

enum class ProfileFamily { ChirpedGaussian, HermiteGaussian };
enum class ProfileType { IIA, IIB };

// One translating wavepacket factor per axis. Chirped-Gaussian components use
// the complex width a + i b; Hermite-Gaussian components use the order m with
// the dispersing envelope w(t), mu(t) and the Gouy phase theta(t) = atan(4 a t).
struct ProfileComponent {
  std::array<Real, 2> a{};  // support parameters, positive
  std::array<Real, 2> b{};  // chirp (chirped-Gaussian only)
  std::array<int, 2> m{};   // Hermite orders (Hermite-Gaussian only)
  std::array<Real, 2> c{};  // velocity
};

struct Profile {
  ProfileFamily family = ProfileFamily::ChirpedGaussian;
  Real amplitude = 1.0;
  std::vector<ProfileComponent> components;

  Complex eval(Real x1, Real x2, Real t) const;
  CMatrix eval_grid(const Vector& xs, const Vector& ys, Real t) const;
};

// Hermite polynomial by the forward recurrence H_{n+1} = 2x H_n - 2n H_{n-1}.
Real hermite(int n, Real x);

// The 1D building blocks (exposed for the oracle tests).
Complex chirped_gaussian_1d(Real x, Real t, Real a, Real b);
Complex hermite_gaussian_1d(Real x, Real t, int m, Real a);

// Four-component profiles of the experiment tables: amplitude 2, support
// vectors (1/2.5,1/2.4), (1/2.3,1/2.2), (1/2.7,1/2.6), (1/2.2,1/2.5),
// directions theta_A = (0, pi/2, pi, 3pi/2) or theta_B = theta_A + pi/4,
// chirp 1/2 per axis (chirped-Gaussian) or orders (1,2),(2,1),(2,1),(1,2)
// (Hermite-Gaussian), speeds c_j = c0 (cos theta_j, sin theta_j).
Profile profile_from_table(ProfileFamily family, ProfileType type, Real c0);

// Energy fraction remaining inside the domain at time t relative to t = 0,
// by a fixed 201x201 LGL reference quadrature (independent of any solver).
Real energy_content(const Profile& profile, const DomainMap& dom, Real t);

}  // namespace tbc2d
