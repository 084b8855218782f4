#pragma once

namespace neuromac::constants {

inline constexpr double kElectronCharge = 1.602176634e-19;  // C
inline constexpr double kBoltzmann = 1.380649e-23;          // J/K
inline constexpr double kRoomTemperature = 300.0;           // K
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace neuromac::constants
