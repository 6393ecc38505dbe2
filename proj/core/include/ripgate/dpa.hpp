#pragma once

#include <Eigen/Dense>

#include "ripgate/params.hpp"

namespace ripgate::dpa {

using CMat = Eigen::MatrixXcd;

// Pump Hamiltonian i(lambda/2)(e^{-2 i theta} b^2 - e^{+2 i theta} b^dag^2) in
// angular units (rad/ns). With this phase choice the output quadrature at
// angle theta is the squeezed one, matching the channel's Phi = theta - arg[alpha].
CMat pump_hamiltonian(int dim, double pump_rad_ns, double theta_rad);

// Steady state of the bare source master equation (pump + decay gamma_b).
CMat source_steady_state(const DpaParams& dpa, int dim);

// Zero-frequency output variance of the quadrature at `angle_rad`, normalized
// to vacuum = 1, from the steady state via input-output relations and the
// quantum regression theorem. Below threshold only.
double source_output_variance(const DpaParams& dpa, double angle_rad, int dim = 20);

// Pump amplitude reproducing `db_target` of output squeezing at the carrier:
// lambda = (gamma_b/2)(1 - e^{-r})/(1 + e^{-r}), cross-checked against
// source_output_variance to 2% relative.
DpaParams calibrate_pump(double db_target, double gamma_b_mhz, double theta_rad = 0.0);

}  // namespace ripgate::dpa
