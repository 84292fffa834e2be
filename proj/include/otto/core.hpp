#pragma once

// Shared domain types for the parametrically pumped oscillator engine.
// Natural units throughout: hbar = k_B = 1.

#include <compare>
#include <stdexcept>
#include <string>

namespace otto {

class OttoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public OttoError {
 public:
  using OttoError::OttoError;
};

/// beta_h >= beta_c: the reservoirs do not form an engine.
class InvalidOrientation : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

/// chi >= omega/2: the pumped oscillator has no bound spectrum.
class UnstablePump : public OttoError {
 public:
  using OttoError::OttoError;
};

/// Covariance violating the uncertainty relation, or nonzero mean.
class UnphysicalState : public OttoError {
 public:
  using OttoError::OttoError;
};

class IntegrationFailure : public OttoError {
 public:
  using OttoError::OttoError;
};

/// Fock truncation too small for the requested state.
class CutoffTooSmall : public OttoError {
 public:
  using OttoError::OttoError;
};

/// A real scalar tagged with its physical role.
template <class Tag>
class Quantity {
 public:
  constexpr Quantity() = default;
  constexpr explicit Quantity(double v) : value_(v) {}

  [[nodiscard]] constexpr double value() const { return value_; }

  friend constexpr auto operator<=>(Quantity, Quantity) = default;

  constexpr Quantity operator-() const { return Quantity(-value_); }
  friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity(a.value_ + b.value_); }
  friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity(a.value_ - b.value_); }
  friend constexpr Quantity operator*(double s, Quantity a) { return Quantity(s * a.value_); }
  friend constexpr Quantity operator*(Quantity a, double s) { return Quantity(s * a.value_); }
  friend constexpr double operator/(Quantity a, Quantity b) { return a.value_ / b.value_; }

 private:
  double value_ = 0.0;
};

struct FrequencyTag {};
struct InverseTemperatureTag {};
struct EnergyTag {};
struct WorkTag {};
struct HeatTag {};

using Frequency = Quantity<FrequencyTag>;
using InverseTemperature = Quantity<InverseTemperatureTag>;
using Energy = Quantity<EnergyTag>;
using Work = Quantity<WorkTag>;
using Heat = Quantity<HeatTag>;

inline constexpr double kPi = 3.14159265358979323846;

/// Physical knobs of one engine: bare frequency, squeezing parameter and
/// the two reservoir inverse temperatures. The pump amplitude chi is always
/// derived from r.
struct EngineParams {
  Frequency omega{2.0 * kPi};
  double r = 0.0;
  InverseTemperature beta_h{0.1};
  InverseTemperature beta_c{1.0};

  /// chi = (omega/2) tanh(2r).
  [[nodiscard]] double chi() const;
  /// Normal-mode frequency with the pump on, omega / cosh(2r).
  [[nodiscard]] Frequency pumped_frequency() const;

  friend bool operator==(const EngineParams&, const EngineParams&) = default;
};

/// Returns params unchanged, or throws InvalidParameter / InvalidOrientation.
EngineParams validate(const EngineParams& params);

[[nodiscard]] std::string describe(const EngineParams& params);

}  // namespace otto
