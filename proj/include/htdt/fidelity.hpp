#pragma once

namespace htdt {

/// Gaussian codebook of coherent states with inverse width lambda.
/// lambda = 0 encodes the uniformly distributed codebook exactly (not as a
/// small-lambda limit).
struct CodebookSpec {
  double lambda = 0.0;
};

/// Average transfer fidelity over the codebook for a realized channel with
/// gain g and added noise G. For lambda = 0 this is 2/(2+G) at g == 1 and
/// zero otherwise.
double avg_fidelity(double g, double noise, const CodebookSpec& codebook);

/// Teleportation fidelity at the optimal resource: 1 / (1 + e^{-2r}).
double fidelity_qt(double r);

/// Fidelity of the analog protocol optimized over the encoding gain, for a
/// quantum-limited attenuator of transmissivity x at unit gain with the
/// minimal-energy resource. Equals fidelity_qt for x <= tanh(r).
double fidelity_an(double r, double x);

/// Entanglement-free fidelity for the quantum-limited attenuator: 1/(2-x).
double fidelity_ef(double x);

struct InfidelityRatios {
  double delta_qt = 1.0;
  double delta_an = 1.0;
};

/// (1 - F_ef) / (1 - F_protocol) for both protocols. Errors when a protocol
/// fidelity equals 1 (only x = 1 for the analog protocol).
InfidelityRatios infidelity_ratio(double r, double x);

/// Log-negativity 2r required to reach the no-cloning fidelity 2/3 with the
/// optimal analog protocol over a quantum-limited attenuator. Piecewise:
/// ln 2 for x <= 1/3, an arcsinh branch on (1/3, 1/2), zero for x >= 1/2.
double no_cloning_entanglement(double x);

}  // namespace htdt
