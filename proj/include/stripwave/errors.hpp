#pragma once
#include <stdexcept>
#include <string>

namespace stripwave {

// All library errors derive from Error so callers can catch one type at the
// CLI boundary and still discriminate in tests.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInterval : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };          // invalid math inputs (sqrt of negative, c out of range, ...)
struct ShapeMismatch : Error { using Error::Error; };        // incompatible index boxes / domain sizes
struct PointOutsideDomain : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };       // Newton or series truncation failed to meet tolerance
struct InvalidSplit : Error { using Error::Error; };         // quadrature/tail split below its validity threshold
struct RadicandNotPositive : Error { using Error::Error; };  // decay-constant radicand could not be verified positive
struct SingularBlock : Error { using Error::Error; };        // numeric inverse failed / not verifiable
struct SingularGram : Error { using Error::Error; };         // trace Gram matrix lost rank
struct EigSolverFailure : Error { using Error::Error; };     // dense symmetric eigensolver did not converge
struct HypothesisFailed : Error { using Error::Error; };     // a lemma hypothesis could not be verified
struct UnboundedInterval : Error { using Error::Error; };    // a certified bound overflowed to infinity
struct IoError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };          // malformed coefficient file / config / certificate
struct DigestMismatch : Error { using Error::Error; };       // certificate does not match coefficient data

} // namespace stripwave
