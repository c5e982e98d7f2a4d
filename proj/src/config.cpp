#include "weakstrong/config.hpp"

#include <cmath>
#include <numbers>

#include "weakstrong/errors.hpp"

namespace weakstrong {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

MeasurementConfig::MeasurementConfig(double theta, double gamma_big, double delta_z, double eta,
                                     double omega_rabi, UnitSystem units)
    : theta_(theta), gamma_big_(gamma_big), delta_z_(delta_z), eta_(eta), omega_rabi_(omega_rabi), units_(units) {
  require(std::isfinite(theta) && theta >= 0.0 && theta <= std::numbers::pi / 2,
          "theta must lie in [0, pi/2], got " + std::to_string(theta));
  require(std::isfinite(gamma_big) && gamma_big >= 0.0, "gamma must be >= 0, got " + std::to_string(gamma_big));
  require(std::isfinite(delta_z) && delta_z > 0.0, "delta_z must be > 0");
  require(std::isfinite(eta) && eta > 0.0, "eta must be > 0");
  require(std::isfinite(omega_rabi) && omega_rabi > 0.0, "omega_rabi must be > 0");
}

MeasurementConfig MeasurementConfig::natural(double theta, double gamma_big) {
  return MeasurementConfig(theta, gamma_big);
}

MeasurementConfig MeasurementConfig::physical(double theta, double gamma_big) {
  return MeasurementConfig(theta, gamma_big, kPhysicalDeltaZ, kDefaultEta, kDefaultRabi, UnitSystem::physical);
}

MeasurementConfig MeasurementConfig::with_units(double theta, double gamma_big, UnitSystem units) {
  return units == UnitSystem::physical ? physical(theta, gamma_big) : natural(theta, gamma_big);
}

MeasurementConfig MeasurementConfig::from_duration(double theta, double t_seconds, double delta_z, double eta,
                                                   double omega_rabi, UnitSystem units) {
  require(std::isfinite(t_seconds) && t_seconds >= 0.0, "coupling duration must be >= 0");
  const double gamma0 = eta * omega_rabi * delta_z;
  return MeasurementConfig(theta, gamma0 * t_seconds / delta_z, delta_z, eta, omega_rabi, units);
}

UnitSystem parse_units(const std::string& name) {
  if (name == "natural") return UnitSystem::natural;
  if (name == "physical") return UnitSystem::physical;
  throw ValidationError("unknown unit system '" + name + "' (expected natural|physical)");
}

std::string to_string(UnitSystem units) { return units == UnitSystem::physical ? "physical" : "natural"; }

}  // namespace weakstrong
