#pragma once

#include <numbers>
#include <string>

namespace weakstrong {

enum class UnitSystem { natural, physical };

// Operating point (theta, Gamma) of the weak-to-strong measurement plus the
// physical constants that turn Gamma into a coupling duration.
//
// Gamma is the primary input; gamma0 = eta * Omega * delta_z and
// t = Gamma * delta_z / gamma0 are derived so both identities hold exactly.
// In the natural profile hbar = 1 and delta_z = 1, so lengths are measured in
// units of the pointer width. The physical profile uses nanometres.
class MeasurementConfig {
 public:
  static constexpr double kDefaultEta = 0.08;
  static constexpr double kDefaultRabi = 2.0 * std::numbers::pi * 19.0e3;       // rad/s
  static constexpr double kPhysicalDeltaZ = 9.47;                               // nm
  static constexpr double kTrapFrequency = 2.0 * std::numbers::pi * 1.41e6;     // rad/s

  // Validates 0 <= theta <= pi/2, gamma_big >= 0, delta_z > 0, eta > 0,
  // omega_rabi > 0. Throws ValidationError otherwise.
  MeasurementConfig(double theta, double gamma_big, double delta_z = 1.0,
                    double eta = kDefaultEta, double omega_rabi = kDefaultRabi,
                    UnitSystem units = UnitSystem::natural);

  static MeasurementConfig natural(double theta, double gamma_big);
  static MeasurementConfig physical(double theta, double gamma_big);
  static MeasurementConfig with_units(double theta, double gamma_big, UnitSystem units);

  // Builds the config from a coupling duration instead of Gamma.
  static MeasurementConfig from_duration(double theta, double t_seconds, double delta_z = 1.0,
                                         double eta = kDefaultEta, double omega_rabi = kDefaultRabi,
                                         UnitSystem units = UnitSystem::natural);

  double theta() const { return theta_; }
  double gamma_big() const { return gamma_big_; }
  double delta_z() const { return delta_z_; }
  double eta() const { return eta_; }
  double omega_rabi() const { return omega_rabi_; }
  UnitSystem units() const { return units_; }

  double coupling_gamma0() const { return eta_ * omega_rabi_ * delta_z_; }
  double t() const { return gamma_big_ * delta_z_ / coupling_gamma0(); }
  // gamma0 * t, the displacement of each wavepacket, in length units.
  double displacement() const { return gamma_big_ * delta_z_; }

  const char* length_unit() const { return units_ == UnitSystem::physical ? "nm" : "dz"; }

 private:
  double theta_;
  double gamma_big_;
  double delta_z_;
  double eta_;
  double omega_rabi_;
  UnitSystem units_;
};

UnitSystem parse_units(const std::string& name);
std::string to_string(UnitSystem units);

}  // namespace weakstrong
