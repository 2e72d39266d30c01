#pragma once

// Physical constants (CODATA 2018, exact SI where defined) and frequency
// conversions. Internally every frequency is an angular frequency in rad/s
// and hbar = 1 when energies appear as Hamiltonian coefficients.

#include <numbers>

namespace ntcp::units {

inline constexpr double kPlanck = 6.62607015e-34;          // J s
inline constexpr double kHbar = kPlanck / (2.0 * std::numbers::pi);
inline constexpr double kElectronCharge = 1.602176634e-19;  // C
inline constexpr double kBoltzmann = 1.380649e-23;          // J / K
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double angular(double hz) { return kTwoPi * hz; }
constexpr double hertz(double rad_per_s) { return rad_per_s / kTwoPi; }

/// Energy E given as E/h in Hz.
constexpr double energy_from_hz(double hz) { return kPlanck * hz; }
constexpr double energy_to_hz(double joules) { return joules / kPlanck; }

/// Energy as a Hamiltonian coefficient (rad/s) with hbar = 1.
constexpr double energy_to_angular(double joules) { return joules / kHbar; }
constexpr double angular_to_energy(double rad_per_s) { return rad_per_s * kHbar; }

}  // namespace ntcp::units
