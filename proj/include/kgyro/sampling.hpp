#pragma once

#include <random>

#include "kgyro/params.hpp"
#include "kgyro/phase.hpp"

namespace kgyro {

/// Uniform random rotation (quaternion method).
Eigen::Matrix3d random_rotation(std::mt19937_64& rng);

/// Random point of the orbit: the canonical frame (a e1, b e2) under a random
/// rotation, with a standard-normal angular velocity.
PhaseState random_on_orbit(const Params& params, std::mt19937_64& rng);

}  // namespace kgyro
