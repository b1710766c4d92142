#ifndef WISHART_ERRORS_HPP
#define WISHART_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wishart {

struct InvalidParameters : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// quartic has a multiple root (Delta = 0 within tolerance); density refused
struct CriticalParameters : std::domain_error {
    using std::domain_error::domain_error;
};

// two roots came within pairing distance during path continuation
struct BranchCollision : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OneCutRequired : std::domain_error {
    using std::domain_error::domain_error;
};

struct ExtrapolationDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PathThroughBranchPoint : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ComponentCountMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MultipleSignChanges : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SectorViolation : std::domain_error {
    using std::domain_error::domain_error;
};

struct RangeError : std::domain_error {
    using std::domain_error::domain_error;
};

struct NonConvergent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularMomentMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace wishart

#endif
