#pragma once

#include <stdexcept>
#include <string>

namespace tj {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// numerics
struct NotHermitian : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct ToleranceNotMet : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };

// model
struct InvalidSector : Error { using Error::Error; };

// scattering / transfer matrix
struct PoleEncountered : Error { using Error::Error; };
struct SingularDenominator : Error { using Error::Error; };
struct DegenerateEigenbasis : Error { using Error::Error; };
struct SingularPrefactor : Error { using Error::Error; };

// Bethe equations
struct ComplexEnergy : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };

// thermodynamics
struct InvalidOrder : Error { using Error::Error; };
struct UndefinedExponents : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct RegimeMismatch : Error { using Error::Error; };
struct SingularAtHalf : Error { using Error::Error; };

}  // namespace tj
