// Copyright pitomo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file common.hpp
 * @brief Shared labels, tolerances, angle helpers and error types.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pitomo {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/** Two-qubit emission labels, fixed basis order. */
enum class Emission : int { HH = 0, HV = 1, VH = 2, VV = 3 };

inline constexpr std::array<Emission, 4> kEmissions{
    Emission::HH, Emission::HV, Emission::VH, Emission::VV};

inline constexpr int index_of(Emission e) { return static_cast<int>(e); }

inline const char* label_of(Emission e) {
  static constexpr const char* names[4] = {"HH", "HV", "VH", "VV"};
  return names[index_of(e)];
}

/** Detected polarization at the output station. */
enum class Polarization : int { H = 0, V = 1 };

inline const char* label_of(Polarization p) {
  return p == Polarization::H ? "H" : "V";
}

/**
 * Delay configuration of the repeated experiment. Each configuration
 * matches the interferometer arm delay to one reference emission:
 * A to HH, B to HV, C to VH, D to VV.
 */
enum class Configuration : int { A = 0, B = 1, C = 2, D = 3 };

inline constexpr std::array<Configuration, 4> kConfigurations{
    Configuration::A, Configuration::B, Configuration::C, Configuration::D};

inline constexpr int index_of(Configuration c) { return static_cast<int>(c); }

inline const char* label_of(Configuration c) {
  static constexpr const char* names[4] = {"A", "B", "C", "D"};
  return names[index_of(c)];
}

inline constexpr Emission reference_emission(Configuration c) {
  return static_cast<Emission>(static_cast<int>(c));
}

/** Configuration whose reference emission is e. */
inline constexpr Configuration configuration_for(Emission e) {
  return static_cast<Configuration>(static_cast<int>(e));
}

/** Wrap an angle into (-pi, pi]. */
inline double wrap_to_pi(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

/** Numerical tolerances used by validators and reconstruction gates. */
struct Tolerances {
  double norm = 1e-9;  // allowed deviation of trace / intensity sum from 1
  double herm = 1e-9;  // allowed Hermiticity defect
  double psd = 1e-9;   // eigenvalues above -psd count as nonnegative
  double zero = 1e-9;  // magnitudes at or below this count as zero
};

/** Visibility at or below this is treated as a flat fringe. */
inline constexpr double kFlatVisibility = 1e-3;

/** Reconstructed trace may deviate this much from 1 before rejection. */
inline constexpr double kRenormWindow = 0.05;

//=============================================================================
// Error types
//=============================================================================

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** A parameter lies outside its admissible domain. */
struct ParameterDomainError : Error {
  using Error::Error;
};

/** A matrix fails the density-operator requirements. */
struct InvalidStateError : Error {
  using Error::Error;
};

/** Requested single-sinusoid coefficients but two terms survive. */
struct SumOfSinusoidsError : Error {
  using Error::Error;
};

/** Phase grid too coarse to support a three-parameter fit. */
struct GridTooSmallError : Error {
  using Error::Error;
};

/** Fit system is numerically rank deficient. */
struct IllConditionedError : Error {
  using Error::Error;
};

/** Operation needs fringe contrast but the record is flat. */
struct FlatFringeError : Error {
  using Error::Error;
};

/** Division by a vanishing quantity was requested. */
struct ZeroDenominatorError : Error {
  using Error::Error;
};

/** A required delay configuration is not in the measurement set. */
struct MissingConfigurationError : Error {
  using Error::Error;
};

/** The data cannot support loss or state estimation. */
struct DegenerateStateError : Error {
  using Error::Error;
};

/** Cross checks between redundant measurements disagree. */
struct InconsistentDataError : Error {
  using Error::Error;
};

/** A file or text payload could not be parsed. */
struct ParseError : Error {
  using Error::Error;
};

//=============================================================================
// Deterministic seed derivation
//=============================================================================

/** splitmix64 step; used to derive independent per-record sub-seeds. */
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/** Sub-seed for record number `index` of the stream named by `seed`. */
inline std::uint64_t subseed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0x5851f42d4c957f2dULL * (index + 1));
  return splitmix64(s);
}

}  // namespace pitomo
