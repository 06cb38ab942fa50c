#pragma once

#include <vector>

namespace mlcpcm {

// Gaussian approximation of density evolution for polar codes: every LLR is
// modeled as N(mu, 2 mu) and only the mean is tracked.

/// Two-segment approximation of phi(x) = 1 - E[tanh(L/2)], L ~ N(x, 2x):
/// exp(-0.4527 x^0.86 + 0.218) below 10 (capped at 1), and
/// sqrt(pi/x) exp(-x/4) (1 - 10/(7x)) from 10 on.
double ga_phi(double mean);
double ga_log_phi(double mean);

/// Smallest mean whose log phi does not exceed `log_value`, by bisection.
double ga_phi_inverse_log(double log_value);

/// Mean LLR of the check-node (upper) branch combining two channels.
double ga_check_mean(double a, double b);

/// Mean LLR per polarized index in natural order for a length-n transform
/// fed by channels of LLR mean `design_llr_mean`.
std::vector<double> ga_evolve(double design_llr_mean, int n);

} // namespace mlcpcm
