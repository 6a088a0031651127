#pragma once

#include <span>

#include "tiltsense/fringe.hpp"
#include "tiltsense/parallel.hpp"
#include "tiltsense/probe.hpp"

namespace tiltsense {

/// Coherence of the GHZ polarization sector after the tilt unitary, i.e. the
/// effective Bloch vector of the two-level {|0...0>, |1...1>} subspace: the
/// momentum kick shrinks its length, the path difference rotates it about z.
/// The projection probability is (1 + magnitude * cos(phase)) / 2.
struct CoherenceFactor {
  double magnitude;  ///< V * exp(-8 k^2 theta^2 Var[sum_j x_j]), in [0, V]
  double phase;      ///< 4 k theta N d, radians
};

/// Closed-form coherence for arbitrary N via the Gaussian characteristic
/// function of S = sum_j x_j (mean N d, variance N sigma_(N)^2).
CoherenceFactor coherence(const ProbeConfig& probe, double theta);

/// Probability of projecting the output polarization state back onto the
/// initial GHZ state.
double projection_probability(const ProbeConfig& probe, double theta);

/// Analytic dp/dtheta of projection_probability.
double projection_probability_derivative(const ProbeConfig& probe, double theta);

/// Noise-free probability curve over a strictly increasing theta grid.
FringeCurve fringe_scan(const ProbeConfig& probe, std::span<const double> theta_grid,
                        Exec exec = Exec::parallel);

}  // namespace tiltsense
