#include "htdt/distribution.hpp"

#include "htdt/fidelity.hpp"
#include "htdt/protocol.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace htdt {

namespace {

void check_link_transmissivity(double x, const char* name) {
  if (!(x > 0.0) || x > 1.0) {
    throw std::invalid_argument(
        fmt::format("{} must lie in (0, 1], got {:g}", name, x));
  }
}

}  // namespace

GeometryConfig GeometryConfig::from_x_ab(double x_ab, double charlie_offset,
                                         double loss_rate_db_per_m) {
  check_link_transmissivity(x_ab, "x_AB");
  if (!(loss_rate_db_per_m > 0.0)) {
    throw std::invalid_argument(fmt::format(
        "deriving a distance from x_AB = {:g} requires a positive loss rate",
        x_ab));
  }
  GeometryConfig geometry{
      .distance_ab = -10.0 * std::log10(x_ab) / loss_rate_db_per_m,
      .charlie_offset = charlie_offset,
      .loss_rate_db_per_m = loss_rate_db_per_m,
  };
  geometry.validate();
  return geometry;
}

GeometryConfig GeometryConfig::with_charlie_distances(
    double d_ca, double d_cb, double distance_ab, double loss_rate_db_per_m) {
  if (std::abs(d_ca - d_cb) > 1e-9 * std::max({d_ca, d_cb, 1.0})) {
    throw std::invalid_argument(fmt::format(
        "asymmetric Charlie placement is not supported: D_CA = {:g}, D_CB = "
        "{:g}",
        d_ca, d_cb));
  }
  const double half = distance_ab / 2.0;
  if (d_ca < half * (1.0 - 1e-9)) {
    throw std::invalid_argument(fmt::format(
        "Charlie distance {:g} is below the geometric minimum D_AB/2 = {:g}",
        d_ca, half));
  }
  const double h_sq = std::max(d_ca * d_ca - half * half, 0.0);
  GeometryConfig geometry{
      .distance_ab = distance_ab,
      .charlie_offset = std::sqrt(h_sq),
      .loss_rate_db_per_m = loss_rate_db_per_m,
  };
  geometry.validate();
  return geometry;
}

void GeometryConfig::validate() const {
  if (!(distance_ab > 0.0)) {
    throw std::invalid_argument(fmt::format(
        "Alice-Bob distance must be positive, got {:g}", distance_ab));
  }
  if (charlie_offset < 0.0) {
    throw std::invalid_argument(fmt::format(
        "Charlie offset must be non-negative, got {:g}", charlie_offset));
  }
  if (loss_rate_db_per_m < 0.0) {
    throw std::invalid_argument(fmt::format(
        "loss rate must be non-negative, got {:g}", loss_rate_db_per_m));
  }
  // Triangle inequality in transmissivities; automatic for this geometry.
  if (x_ab() < x_c() * x_c() - 1e-12) {
    throw std::invalid_argument("geometry violates x_AB >= x_C^2");
  }
}

double GeometryConfig::charlie_distance() const {
  return std::hypot(distance_ab / 2.0, charlie_offset);
}

double GeometryConfig::x_ab() const {
  return transmissivity(distance_ab, loss_rate_db_per_m);
}

double GeometryConfig::x_c() const {
  return transmissivity(charlie_distance(), loss_rate_db_per_m);
}

void SourceSpec::validate() const {
  if (r_c < 0.0) {
    throw std::invalid_argument(fmt::format(
        "source squeezing must satisfy r_C >= 0, got {:g}", r_c));
  }
}

double transmissivity(double distance_m, double gamma_db_per_m) {
  if (distance_m < 0.0) {
    throw std::invalid_argument(
        fmt::format("distance must be non-negative, got {:g}", distance_m));
  }
  if (gamma_db_per_m < 0.0) {
    throw std::invalid_argument(fmt::format(
        "loss rate must be non-negative, got {:g}", gamma_db_per_m));
  }
  return std::pow(10.0, -gamma_db_per_m * distance_m / 10.0);
}

ResourceTriplet distribute_resource(const SourceSpec& source, double x_c) {
  source.validate();
  check_link_transmissivity(x_c, "x_C");
  const double two_rc = 2.0 * source.r_c;
  const ResourceTriplet pure{.a = std::cosh(two_rc),
                             .b = std::cosh(two_rc),
                             .c = std::sinh(two_rc)};
  GaussianState state = resource_to_state(pure);
  const ChannelSpec loss{.x = x_c, .y = 1.0 - x_c};
  state = apply_map(embed_map(loss.to_map(), 0, 2), state);
  state = apply_map(embed_map(loss.to_map(), 1, 2), state);

  const Matrix& cov = state.covariance();
  ResourceTriplet t{.a = cov(0, 0), .b = cov(2, 2), .c = -cov(0, 2)};
  // The distributed state must keep the (a, b, c) block structure.
  const double drift = std::max(
      {std::abs(cov(1, 1) - t.a), std::abs(cov(3, 3) - t.b),
       std::abs(cov(1, 3) - t.c), std::abs(cov(0, 1)), std::abs(cov(0, 3))});
  if (drift > 1e-9) {
    throw std::logic_error(
        fmt::format("distributed state lost its symmetric two-mode form "
                    "(max deviation {:g})",
                    drift));
  }
  return t;
}

double distributed_log_negativity(const SourceSpec& source, double x_c) {
  source.validate();
  check_link_transmissivity(x_c, "x_C");
  // nu = 1 - x_C (1 - e^{-2 r_C}), written via expm1 for small r_C.
  const double nu = 1.0 + x_c * std::expm1(-2.0 * source.r_c);
  return -std::log(nu);
}

bool htdt_condition_distributed(const SourceSpec& source, double x_c,
                                double x_ab) {
  source.validate();
  check_link_transmissivity(x_c, "x_C");
  check_link_transmissivity(x_ab, "x_AB");
  if (x_ab < x_c * x_c - 1e-12) {
    throw std::invalid_argument(fmt::format(
        "geometric constraint x_AB >= x_C^2 violated: x_AB = {:g}, x_C = {:g}",
        x_ab, x_c));
  }
  const double arg = 1.0 - 2.0 * x_ab / (x_c * (1.0 + x_ab));
  if (arg <= 0.0) {
    return true;  // holds for every r_C
  }
  return 2.0 * source.r_c < -std::log(arg);
}

std::vector<SweepPoint> sweep_fig5(const GeometryConfig& base,
                                   std::span<const double> h_c_values,
                                   std::span<const double> r_c_values) {
  base.validate();
  std::vector<double> hs(h_c_values.begin(), h_c_values.end());
  std::vector<double> rs(r_c_values.begin(), r_c_values.end());
  std::sort(hs.begin(), hs.end());
  std::sort(rs.begin(), rs.end());

  const double x_ab = base.x_ab();
  const ChannelSpec channel{.x = x_ab, .y = 1.0 - x_ab};
  const CodebookSpec uniform{.lambda = 0.0};
  const double f_ef = avg_fidelity(1.0, noise_ef_optimized(channel, 1.0),
                                   uniform);

  std::vector<SweepPoint> rows;
  rows.reserve(hs.size() * rs.size());
  for (double h : hs) {
    GeometryConfig geometry = base;
    geometry.charlie_offset = h;
    geometry.validate();
    const double x_c = geometry.x_c();
    for (double r_c : rs) {
      const SourceSpec source{.r_c = r_c};
      const ResourceTriplet resource = distribute_resource(source, x_c);
      const OptimizeDResult opt = optimize_d(resource, channel, 1.0, 1e6);
      const double g_qt = noise_qt(resource, 1.0);
      // The optimum includes the d -> infinity (teleportation) limit.
      const double g_an = std::min(opt.noise_min, g_qt);
      rows.push_back({
          .h_c = h,
          .r_c = r_c,
          .x_c = x_c,
          .two_r = distributed_log_negativity(source, x_c),
          .f_an = avg_fidelity(1.0, g_an, uniform),
          .f_qt = avg_fidelity(1.0, g_qt, uniform),
          .f_ef = f_ef,
          .d_opt = opt.d_opt,
      });
    }
  }
  return rows;
}

}  // namespace htdt
