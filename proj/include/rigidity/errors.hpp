#pragma once

#include <stdexcept>
#include <string>

namespace rigidity {

// Evaluation requested on the plane x_n = 0 with only projective charts
// available.
struct ChartPoleError : std::domain_error {
  explicit ChartPoleError(const std::string& what) : std::domain_error(what) {}
};

// Spherical-coordinate request too close to the coordinate poles.
struct PoleProximityError : std::domain_error {
  explicit PoleProximityError(const std::string& what) : std::domain_error(what) {}
};

// Surface geometry requested where the Hessian vanishes.
struct SingularPointError : std::domain_error {
  explicit SingularPointError(const std::string& what) : std::domain_error(what) {}
};

// Finite-difference step incompatible with the evaluation point.
struct StepSizeError : std::invalid_argument {
  explicit StepSizeError(const std::string& what) : std::invalid_argument(what) {}
};

// Leading-polynomial extraction: profile does not vanish to order >= 3.
struct NoVanishingError : std::domain_error {
  explicit NoVanishingError(const std::string& what) : std::domain_error(what) {}
};

// Leading-polynomial extraction: fit residuals do not decay with radius.
struct FitAmbiguousError : std::runtime_error {
  explicit FitAmbiguousError(const std::string& what) : std::runtime_error(what) {}
};

// Divergence-form reduction with vanishing A22.
struct DegenerateCoefficientError : std::domain_error {
  explicit DegenerateCoefficientError(const std::string& what) : std::domain_error(what) {}
};

// Unknown profile name, bad resolution, malformed option.
struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace rigidity
