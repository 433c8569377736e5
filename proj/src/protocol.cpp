#include "htdt/protocol.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace htdt {

namespace {

const Matrix kSigmaZ = (Matrix(2, 2) << 1.0, 0.0, 0.0, -1.0).finished();

double d_lower_bound(double g, double x) { return std::max(g / x, 1.0); }

void check_d_bound(double g, double x, double d) {
  const double dmin = d_lower_bound(g, x);
  if (d < dmin * (1.0 - 1e-12)) {
    throw std::invalid_argument(fmt::format(
        "encoding gain must satisfy d >= max(g/x, 1) = {:g}, got d = {:g}",
        dmin, d));
  }
}

void check_gain(double g) {
  if (!(g > 0.0)) {
    throw std::invalid_argument(
        fmt::format("overall gain must satisfy g > 0, got {:g}", g));
  }
}

// Unvalidated evaluation of the closed-form noise; callers hold the
// preconditions d >= max(g/x, 1) and physical resource/channel.
double noise_unchecked(const ResourceTriplet& t, const ChannelSpec& ch,
                       double g, double d) {
  const double w1 = g - g / d;
  const double w2 = 1.0 - g / (d * ch.x);
  const double cross = std::sqrt(std::max(w1 * w2, 0.0));
  return w1 * t.a + w2 * t.b - 2.0 * t.c * cross + g * ch.y / (d * ch.x);
}

// Sign of dG/dd up to the positive factor g/d^2. Tends to -inf at the domain
// edge where w1*w2 -> 0 with c > 0.
double noise_slope_sign(const ResourceTriplet& t, const ChannelSpec& ch,
                        double g, double d) {
  const double w1 = g - g / d;
  const double w2 = 1.0 - g / (d * ch.x);
  const double base = t.a + t.b / ch.x - ch.y / ch.x;
  const double s = w1 * w2;
  if (s <= 0.0) {
    return t.c > 0.0 ? -1.0 : base;
  }
  return base - t.c * (w2 + w1 / ch.x) / std::sqrt(s);
}

// The protocol as an explicit step list over mode layout (T, A, B); shared by
// the matrix path and the Monte-Carlo sampler.
struct PipelinePlan {
  GaussianMap encode;   // 3-mode embedding of the two-mode squeezer on (T, A)
  std::vector<int> keep_after_encode;  // transmitted arm and B
  GaussianMap channel;  // 2-mode embedding of the channel on the transmitted arm
  GaussianMap decode;   // beamsplitter on (received, B)
  std::vector<int> keep_output;  // the arm carrying sqrt(g) v_T
};

PipelinePlan make_plan(const GaussianState& input,
                       const ResourceTriplet& resource,
                       const ChannelSpec& channel,
                       const ProtocolParams& params) {
  if (input.modes() != 1) {
    throw std::invalid_argument(fmt::format(
        "protocol input must be a single-mode state, got {} modes",
        input.modes()));
  }
  resource.validate();
  channel.validate();
  params.validate(channel);

  const double d = std::max(params.d, 1.0);  // validation allows 1 - 1e-12
  const GaussianMap enc = encoder(d);

  // The discarded arm is identified structurally as the one whose first
  // moment equals sqrt(d-1) sz v_T; with zero input moments this is
  // ambiguous and the sz-coupled arm (second encoder output) is taken.
  const Vector v_t = input.first_moments();
  const Vector conj_moment = std::sqrt(d - 1.0) * (kSigmaZ * v_t);
  const Vector kept_moment = std::sqrt(d) * v_t;
  Vector enc_in(4);
  enc_in << v_t(0), v_t(1), 0.0, 0.0;
  const Vector enc_out = enc.x() * enc_in;
  int conjugate_arm = 1;
  const double scale = 1.0 + kept_moment.norm() + conj_moment.norm();
  for (int arm = 0; arm < 2; ++arm) {
    const Vector m = enc_out.segment(2 * arm, 2);
    const bool matches_conj = (m - conj_moment).norm() <= 1e-9 * scale;
    const bool matches_kept = (m - kept_moment).norm() <= 1e-9 * scale;
    if (matches_conj && !matches_kept) {
      conjugate_arm = arm;
      break;
    }
  }
  const int transmitted_arm = 1 - conjugate_arm;

  // The surviving decoder output is the arm with the +sqrt(tau) coefficient
  // on the received mode: the first output of decoder().
  return PipelinePlan{
      .encode = embed_map(enc, 0, 3),
      .keep_after_encode = {transmitted_arm, 2},
      .channel = embed_map(channel.to_map(), 0, 2),
      .decode = decoder(std::min(params.tau, 1.0)),
      .keep_output = {0},
  };
}

}  // namespace

ProtocolParams ProtocolParams::for_gain(double g, double d,
                                        const ChannelSpec& ch) {
  ch.validate();
  check_gain(g);
  check_d_bound(g, ch.x, d);
  double tau = g / (d * ch.x);
  if (tau > 1.0) tau = 1.0;  // roundoff at d == g/x
  ProtocolParams params{.d = d, .tau = tau, .g = g};
  params.validate(ch);
  return params;
}

void ProtocolParams::validate(const ChannelSpec& ch) const {
  check_gain(g);
  if (d < 1.0 - 1e-12) {
    throw std::invalid_argument(
        fmt::format("encoding gain must satisfy d >= 1, got {:g}", d));
  }
  check_d_bound(g, ch.x, d);
  if (!(tau > 0.0) || tau > 1.0 + 1e-12) {
    throw std::invalid_argument(fmt::format(
        "decoding transmissivity must lie in (0, 1], got {:g}", tau));
  }
  const double composed = d * ch.x * tau;
  if (std::abs(composed - g) > 1e-12 * std::max(1.0, std::abs(g))) {
    throw std::invalid_argument(fmt::format(
        "inconsistent parameters: d*x*tau = {:g} but g = {:g}", composed, g));
  }
}

GaussianMap encoder(double d) {
  if (d < 1.0) {
    throw std::invalid_argument(
        fmt::format("encoder gain must satisfy d >= 1, got {:g}", d));
  }
  Matrix x = Matrix::Zero(4, 4);
  const double diag = std::sqrt(d);
  const double off = std::sqrt(d - 1.0);
  x.block(0, 0, 2, 2) = diag * Matrix::Identity(2, 2);
  x.block(2, 2, 2, 2) = diag * Matrix::Identity(2, 2);
  x.block(0, 2, 2, 2) = off * kSigmaZ;
  x.block(2, 0, 2, 2) = off * kSigmaZ;
  return GaussianMap(std::move(x), Matrix::Zero(4, 4));
}

GaussianMap decoder(double tau) {
  if (!(tau > 0.0) || tau > 1.0) {
    throw std::invalid_argument(fmt::format(
        "decoder transmissivity must lie in (0, 1], got {:g}", tau));
  }
  Matrix x = Matrix::Zero(4, 4);
  const double t = std::sqrt(tau);
  const double r = std::sqrt(1.0 - tau);
  x.block(0, 0, 2, 2) = t * Matrix::Identity(2, 2);
  x.block(2, 2, 2, 2) = t * Matrix::Identity(2, 2);
  x.block(0, 2, 2, 2) = r * Matrix::Identity(2, 2);
  x.block(2, 0, 2, 2) = -r * Matrix::Identity(2, 2);
  return GaussianMap(std::move(x), Matrix::Zero(4, 4));
}

GaussianState run_protocol_matrix(const GaussianState& input,
                                  const ResourceTriplet& resource,
                                  const ChannelSpec& channel,
                                  const ProtocolParams& params) {
  const PipelinePlan plan = make_plan(input, resource, channel, params);
  GaussianState state = tensor(input, resource_to_state(resource));
  state = apply_map(plan.encode, state);
  state = partial_trace(state, plan.keep_after_encode);
  state = apply_map(plan.channel, state);
  state = apply_map(plan.decode, state);
  return partial_trace(state, plan.keep_output);
}

double added_noise(const ResourceTriplet& resource, const ChannelSpec& channel,
                   double g, double d) {
  resource.validate();
  channel.validate();
  check_gain(g);
  check_d_bound(g, channel.x, d);
  if (d < 1.0 - 1e-12) {
    throw std::invalid_argument(
        fmt::format("encoding gain must satisfy d >= 1, got {:g}", d));
  }
  return noise_unchecked(resource, channel, g, d);
}

double noise_qt(const ResourceTriplet& resource, double g) {
  resource.validate();
  if (g < 0.0) {
    throw std::invalid_argument(
        fmt::format("gain must satisfy g >= 0, got {:g}", g));
  }
  return g * resource.a + resource.b - 2.0 * std::sqrt(g) * resource.c;
}

double noise_discarded(const ResourceTriplet& resource, double g, double d) {
  resource.validate();
  check_gain(g);
  if (d <= 1.0) {
    throw std::invalid_argument(fmt::format(
        "discarded-mode teleportation noise is singular at d <= 1, got {:g}",
        d));
  }
  const double gain = g * d / (d - 1.0);
  return gain * resource.a + resource.b - 2.0 * resource.c * std::sqrt(gain) +
         g / (d - 1.0);
}

double noise_ef(const ChannelSpec& channel, double g, double d) {
  channel.validate();
  check_gain(g);
  check_d_bound(g, channel.x, d);
  return 1.0 + g + (channel.y - (1.0 + channel.x)) / channel.x * (g / d);
}

double noise_ef_optimized(const ChannelSpec& channel, double g) {
  channel.validate();
  check_gain(g);
  if (channel.y < 1.0 + channel.x) {
    return noise_ef(channel, g, d_lower_bound(g, channel.x));
  }
  return 1.0 + g;  // entanglement-breaking channel: d -> infinity
}

ResourceTriplet optimal_teleport_triplet(double r, double g,
                                         std::optional<double> b) {
  if (!(r > 0.0)) {
    throw std::invalid_argument(
        fmt::format("squeezing parameter must satisfy r > 0, got {:g}", r));
  }
  if (r < 1e-7) {
    // cosh(2r) - 1 ~ 2r^2 drops below machine epsilon around r = 1e-8 and
    // the minimal-energy resource collapses onto the vacuum.
    throw std::invalid_argument(fmt::format(
        "r = {:g} is below the double-precision resolution of the "
        "minimal-energy resource (requires r >= 1e-7)",
        r));
  }
  check_gain(g);
  const double lo = std::tanh(r);
  const double hi = 1.0 / lo;
  if (g < lo - 1e-12 || g > hi + 1e-12) {
    throw std::invalid_argument(fmt::format(
        "gain g = {:g} outside the accessible interval [tanh r, coth r] = "
        "[{:g}, {:g}]",
        g, lo, hi));
  }
  const double e2r = std::exp(2.0 * r);
  const double em2r = std::exp(-2.0 * r);
  const double denom = g + 1.0 - e2r * std::abs(g - 1.0);
  if (!(denom > 0.0)) {
    throw std::invalid_argument(fmt::format(
        "gain g = {:g} sits at the boundary of [tanh r, coth r]; the minimal "
        "resource energy diverges",
        g));
  }
  const double b_star = (e2r * g + em2r - std::abs(g - 1.0)) / denom;
  double b_val = b ? *b : b_star;
  if (b_val < b_star - 1e-9) {
    throw std::invalid_argument(fmt::format(
        "b = {:g} is below the minimal-energy bound b* = {:g}", b_val,
        b_star));
  }
  ResourceTriplet t{.a = (b_val + em2r * (g - 1.0)) / g,
                    .b = b_val,
                    .c = (b_val - em2r) / std::sqrt(g)};
  t.validate();
  return t;
}

double g_prime(const ResourceTriplet& resource, const ChannelSpec& channel,
               double g) {
  resource.validate();
  channel.validate();
  if (g < 0.0) {
    throw std::invalid_argument(
        fmt::format("gain must satisfy g >= 0, got {:g}", g));
  }
  const double x = channel.x;
  return -g * (resource.a + resource.b / x) +
         resource.c * std::sqrt(g) * (g + x) / x + g * channel.y / x;
}

bool htdt_beats_teleportation(double r, const ChannelSpec& channel) {
  if (r < 0.0) {
    throw std::invalid_argument(
        fmt::format("squeezing parameter must satisfy r >= 0, got {:g}", r));
  }
  channel.validate();
  return channel.y < std::exp(-2.0 * r) * (1.0 + channel.x);
}

OptimizeDResult optimize_d(const ResourceTriplet& resource,
                           const ChannelSpec& channel, double g,
                           double d_max) {
  resource.validate();
  channel.validate();
  check_gain(g);
  const double d_min = d_lower_bound(g, channel.x);
  if (d_max < d_min) {
    throw std::invalid_argument(fmt::format(
        "d_max = {:g} is below the feasibility bound max(g/x, 1) = {:g}",
        d_max, d_min));
  }
  const auto f = [&](double d) {
    return noise_unchecked(resource, channel, g, d);
  };
  if (d_max == d_min) {
    return {d_min, f(d_min)};
  }

  // Golden-section primary search.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = d_min;
  double hi = d_max;
  double d1 = hi - invphi * (hi - lo);
  double d2 = lo + invphi * (hi - lo);
  double f1 = f(d1);
  double f2 = f(d2);
  for (int it = 0; it < 400 && (hi - lo) > 1e-10 * std::max(1.0, hi); ++it) {
    if (f1 < f2) {
      hi = d2;
      d2 = d1;
      f2 = f1;
      d1 = hi - invphi * (hi - lo);
      f1 = f(d1);
    } else {
      lo = d1;
      d1 = d2;
      f1 = f2;
      d2 = lo + invphi * (hi - lo);
      f2 = f(d2);
    }
  }
  double d_int = (lo + hi) / 2.0;

  // Refine an interior minimum by bisecting the sign of dG/dd; the
  // flat-minimum floor of a value-only search would otherwise limit
  // accuracy to about sqrt(eps). The bracket is widened until it straddles
  // the sign change (golden-section can drift off the true minimizer by a
  // few parts in 1e7 on the noise plateau).
  const auto slope = [&](double d) {
    return noise_slope_sign(resource, channel, g, d);
  };
  for (double pad : {1e-5, 1e-3, 1e-1}) {
    double blo = std::max(d_min, d_int * (1.0 - pad));
    double bhi = std::min(d_max, d_int * (1.0 + pad));
    if (!(slope(blo) < 0.0 && slope(bhi) > 0.0)) continue;
    for (int it = 0; it < 200 && (bhi - blo) > 1e-15 * std::max(1.0, bhi);
         ++it) {
      const double mid = (blo + bhi) / 2.0;
      (slope(mid) < 0.0 ? blo : bhi) = mid;
    }
    d_int = (blo + bhi) / 2.0;
    break;
  }

  if (d_max - d_int <= 1e-9 * d_max) d_int = d_max;
  if (d_int - d_min <= 1e-12 * std::max(1.0, d_min)) d_int = d_min;

  // Prefer the smallest d among near-equal minima (flat-noise tie-break);
  // a strictly decreasing G still yields d_max by a real margin.
  std::array<double, 3> cand{d_min, d_int, d_max};
  double best_d = d_min;
  double best_f = f(d_min);
  for (double d : cand) {
    const double fd = f(d);
    if (fd < best_f - 1e-12 * std::max(1.0, std::abs(best_f))) {
      best_f = fd;
      best_d = d;
    }
  }
  return {best_d, best_f};
}

MonteCarloEstimate monte_carlo_oracle(const GaussianState& input,
                                      const ResourceTriplet& resource,
                                      const ChannelSpec& channel,
                                      const ProtocolParams& params,
                                      std::int64_t n_samples,
                                      std::uint64_t seed) {
  if (n_samples < 10000) {
    throw std::invalid_argument(fmt::format(
        "monte_carlo_oracle requires n_samples >= 10000, got {}", n_samples));
  }
  const PipelinePlan plan = make_plan(input, resource, channel, params);
  const GaussianState initial = tensor(input, resource_to_state(resource));

  // Classical sampling covariance is Gamma/2; matrix square root via the
  // self-adjoint eigendecomposition (the covariance may be singular).
  const auto matrix_sqrt = [](const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    const Vector root =
        solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return Matrix(solver.eigenvectors() * root.asDiagonal() *
                  solver.eigenvectors().transpose());
  };
  const Matrix l_init = matrix_sqrt(initial.covariance() / 2.0);
  const Matrix l_chan = matrix_sqrt(plan.channel.y() / 2.0);

  using Vec6 = Eigen::Matrix<double, 6, 1>;
  using Vec4 = Eigen::Matrix<double, 4, 1>;
  using Vec2 = Eigen::Matrix<double, 2, 1>;
  const Eigen::Matrix<double, 6, 6> enc_x = plan.encode.x();
  const Eigen::Matrix<double, 4, 4> chan_x = plan.channel.x();
  const Eigen::Matrix<double, 4, 4> chan_l = l_chan;
  const Eigen::Matrix<double, 4, 4> dec_x = plan.decode.x();
  const Vec6 v0 = initial.first_moments();
  const Eigen::Matrix<double, 6, 6> l0 = l_init;
  const std::array<int, 4> keep = {2 * plan.keep_after_encode[0],
                                   2 * plan.keep_after_encode[0] + 1,
                                   2 * plan.keep_after_encode[1],
                                   2 * plan.keep_after_encode[1] + 1};
  const int out0 = 2 * plan.keep_output[0];

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Vec2 sum = Vec2::Zero();
  Eigen::Matrix2d sum_sq = Eigen::Matrix2d::Zero();
  Vec6 xi;
  Vec4 eta;
  for (std::int64_t s = 0; s < n_samples; ++s) {
    for (int i = 0; i < 6; ++i) xi(i) = normal(rng);
    Vec6 z = v0 + l0 * xi;
    z = enc_x * z;
    Vec4 w;
    for (int i = 0; i < 4; ++i) w(i) = z(keep[i]);
    for (int i = 0; i < 4; ++i) eta(i) = normal(rng);
    w = chan_x * w + chan_l * eta;
    w = dec_x * w;
    const Vec2 out(w(out0), w(out0 + 1));
    sum += out;
    sum_sq += out * out.transpose();
  }

  const double n = static_cast<double>(n_samples);
  const Vec2 mean = sum / n;
  const Eigen::Matrix2d classical_cov =
      (sum_sq - n * mean * mean.transpose()) / (n - 1.0);

  MonteCarloEstimate est;
  est.samples = n_samples;
  est.mean = mean;
  est.covariance = 2.0 * classical_cov;
  est.mean_stderr = (classical_cov.diagonal() / n).cwiseSqrt();
  est.covariance_stderr = Matrix(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      // Gaussian-data variance of a sample-covariance entry.
      const double var = (classical_cov(i, i) * classical_cov(j, j) +
                          classical_cov(i, j) * classical_cov(i, j)) /
                         (n - 1.0);
      est.covariance_stderr(i, j) = 2.0 * std::sqrt(var);
    }
  }
  return est;
}

}  // namespace htdt
