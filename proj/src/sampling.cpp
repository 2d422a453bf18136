#include "kgyro/sampling.hpp"

#include <Eigen/Geometry>

namespace kgyro {

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  q.normalize();
  return q.toRotationMatrix();
}

PhaseState random_on_orbit(const Params& params, std::mt19937_64& rng) {
  const Eigen::Matrix3d Q = random_rotation(rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  PhaseState s;
  s.omega = Vec3(gauss(rng), gauss(rng), gauss(rng));
  s.alpha = Q * Vec3(params.a(), 0.0, 0.0);
  s.beta = Q * Vec3(0.0, params.b(), 0.0);
  return s;
}

}  // namespace kgyro
