#pragma once

#include "htdt/gaussian.hpp"

#include <cstdint>
#include <optional>

namespace htdt {

/// Encode/transmit/decode parameters. The overall channel gain is
/// g = d * x * tau for the channel transmissivity x, so feasibility requires
/// d >= max{g/x, 1}.
struct ProtocolParams {
  double d = 1.0;    // encoding two-mode-squeezer linear gain, >= 1
  double tau = 1.0;  // decoding beamsplitter transmissivity, in (0, 1]
  double g = 1.0;    // target overall gain, > 0

  /// Derives tau = g / (d x) for the given channel and validates.
  static ProtocolParams for_gain(double g, double d, const ChannelSpec& ch);

  void validate(const ChannelSpec& ch) const;
};

/// The phase-insensitive channel realized by the protocol: gain g, noise G.
struct SimulatedChannel {
  double gain = 1.0;
  double noise = 0.0;
};

/// Two-mode squeezer with linear gain d >= 1 acting on (signal, resource arm):
/// X has sqrt(d) I2 diagonal blocks and sqrt(d-1) sz off-diagonal blocks.
GaussianMap encoder(double d);

/// Beamsplitter with transmissivity tau in (0, 1] on (received, resource arm).
GaussianMap decoder(double tau);

/// Runs the full pipeline by matrix algebra: tensor in the resource, encode
/// on (signal, A), discard the conjugate encoder output, send the surviving
/// mode through the channel, decode against B, and keep the arm carrying
/// sqrt(g) * v_in. Never evaluates the closed-form noise.
GaussianState run_protocol_matrix(const GaussianState& input,
                                  const ResourceTriplet& resource,
                                  const ChannelSpec& channel,
                                  const ProtocolParams& params);

/// Closed-form added noise G of the simulated channel at gain g and encoding
/// gain d.
double added_noise(const ResourceTriplet& resource, const ChannelSpec& channel,
                   double g, double d);

/// Teleportation noise G_qt = g a + b - 2 sqrt(g) c (the d -> infinity limit).
double noise_qt(const ResourceTriplet& resource, double g);

/// Noise of teleporting via a heterodyne measurement on the discarded encoder
/// output and a noise-free classical channel. Singular at d <= 1.
double noise_discarded(const ResourceTriplet& resource, double g, double d);

/// Entanglement-free noise: quantum-limited amplification by d followed by
/// direct transmission, G_ef = 1 + g + [(y - (1 + x)) / x] (g / d).
double noise_ef(const ChannelSpec& channel, double g, double d);

/// noise_ef at its own optimal d: d = max{g/x, 1} when y < 1 + x, else the
/// d -> infinity limit 1 + g.
double noise_ef_optimized(const ChannelSpec& channel, double g);

/// Minimal-noise teleportation resource with log-negativity 2r at gain g.
/// Valid for tanh(r) <= g <= coth(r); b defaults to the minimal-energy b*.
ResourceTriplet optimal_teleport_triplet(double r, double g,
                                         std::optional<double> b = {});

/// First-order coefficient of the 1/d expansion of the added noise:
/// G = G_qt + G'/d + o(1/d).
double g_prime(const ResourceTriplet& resource, const ChannelSpec& channel,
               double g);

/// The optimality condition: a finite encoding gain beats teleportation
/// (optimized over resources of log-negativity 2r) iff y < e^{-2r} (1 + x).
bool htdt_beats_teleportation(double r, const ChannelSpec& channel);

struct OptimizeDResult {
  double d_opt = 1.0;
  double noise_min = 0.0;
};

/// Minimizes added_noise over d in [max{g/x, 1}, d_max] by golden-section
/// search refined with a bisection on the sign of dG/dd. Returns d_max when
/// the noise is decreasing throughout (teleportation-optimal regime) and the
/// smallest admissible d when the noise is flat.
OptimizeDResult optimize_d(const ResourceTriplet& resource,
                           const ChannelSpec& channel, double g,
                           double d_max = 1e6);

/// Moment estimates from classical phase-space sampling of the pipeline.
/// Covariances are reported in state units (twice the classical covariance).
struct MonteCarloEstimate {
  Vector mean;             // length 2
  Matrix covariance;       // 2x2
  Vector mean_stderr;      // length 2
  Matrix covariance_stderr;  // 2x2
  std::int64_t samples = 0;
};

/// Samples phase-space points with classical covariance Gamma/2, propagates
/// them through the same X matrices as run_protocol_matrix adding classical
/// noise of covariance Y/2 at the channel, and estimates output moments.
/// Deterministic for a fixed (seed, n_samples) on one platform. This checks
/// first and second moments only.
MonteCarloEstimate monte_carlo_oracle(const GaussianState& input,
                                      const ResourceTriplet& resource,
                                      const ChannelSpec& channel,
                                      const ProtocolParams& params,
                                      std::int64_t n_samples,
                                      std::uint64_t seed);

}  // namespace htdt
