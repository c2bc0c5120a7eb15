#pragma once

#include <stdexcept>
#include <string>

namespace pagecurve {

// A state or operator violates a physical contract (non-Hermitian input,
// covariance below the Heisenberg bound, positivity loss, ...).
class UnphysicalStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fock truncation too small for the requested state or evolution.
class LeakageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The vectorized generator has a kernel of dimension != 1.
class NonUniqueSteadyStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The entropy maximum sits on the boundary of the sampled window.
class WindowTooShortError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scenario configuration problems; what() names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pagecurve
