#include "htdt/fidelity.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace htdt {

namespace {

void check_attenuator_x(double x) {
  if (!(x > 0.0) || x > 1.0) {
    throw std::invalid_argument(fmt::format(
        "attenuator transmissivity must lie in (0, 1], got {:g}", x));
  }
}

void check_r(double r) {
  if (r < 0.0) {
    throw std::invalid_argument(
        fmt::format("squeezing parameter must satisfy r >= 0, got {:g}", r));
  }
}

}  // namespace

double avg_fidelity(double g, double noise, const CodebookSpec& codebook) {
  if (!(g > 0.0)) {
    throw std::invalid_argument(
        fmt::format("gain must satisfy g > 0, got {:g}", g));
  }
  if (noise < std::abs(1.0 - g) - 1e-9) {
    throw std::invalid_argument(fmt::format(
        "noise G = {:g} violates the physical bound G >= |1 - g| = {:g}",
        noise, std::abs(1.0 - g)));
  }
  if (codebook.lambda < 0.0) {
    throw std::invalid_argument(fmt::format(
        "codebook inverse width must satisfy lambda >= 0, got {:g}",
        codebook.lambda));
  }
  if (codebook.lambda == 0.0) {
    // Uniform codebook: nonzero fidelity only at exactly unit gain.
    return g == 1.0 ? 2.0 / (2.0 + noise) : 0.0;
  }
  const double root = 1.0 - std::sqrt(g);
  return 2.0 * codebook.lambda /
         (2.0 * root * root + codebook.lambda * (1.0 + g + noise));
}

double fidelity_qt(double r) {
  check_r(r);
  return 1.0 / (1.0 + std::exp(-2.0 * r));
}

double fidelity_an(double r, double x) {
  check_r(r);
  check_attenuator_x(x);
  if (x <= std::tanh(r)) {
    return fidelity_qt(r);
  }
  return 2.0 * x /
         (1.0 + x * (2.0 - x) - (1.0 - x) * (1.0 - x) * std::cosh(2.0 * r));
}

double fidelity_ef(double x) {
  check_attenuator_x(x);
  return 1.0 / (2.0 - x);
}

InfidelityRatios infidelity_ratio(double r, double x) {
  const double f_ef = fidelity_ef(x);
  const double f_qt = fidelity_qt(r);
  const double f_an = fidelity_an(r, x);
  if (f_qt >= 1.0 || f_an >= 1.0) {
    throw std::invalid_argument(
        "infidelity ratio is undefined where the protocol fidelity is 1");
  }
  return {(1.0 - f_ef) / (1.0 - f_qt), (1.0 - f_ef) / (1.0 - f_an)};
}

double no_cloning_entanglement(double x) {
  check_attenuator_x(x);
  if (x <= 1.0 / 3.0) {
    return std::log(2.0);
  }
  if (x >= 0.5) {
    return 0.0;
  }
  const double arg = x * (1.0 - 2.0 * x) / (2.0 * (1.0 - x) * (1.0 - x));
  return 2.0 * std::asinh(std::sqrt(arg));
}

}  // namespace htdt
