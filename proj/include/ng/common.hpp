#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ng {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20240917ULL;

// Raised for invalid inputs (bad shapes, preconditions).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when a numerical procedure cannot produce a trustworthy answer.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Exec { Serial, Parallel };

// Independent stream for sample i; results never depend on thread scheduling.
inline Rng stream(std::uint64_t seed, std::uint64_t i) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
  return Rng(seq);
}

}  // namespace ng
