#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace spinforge {

// Broad failure classes. The CLI maps them 1:1 onto process exit codes, so
// every throwing code path in the library picks one of these four.
enum class ErrorCategory : int {
    config = 1,
    singularity = 2,
    certification = 3,
    io = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

namespace detail {

inline std::string at_time(const std::string& kind, double t, const std::string& why) {
    std::ostringstream os;
    os << kind << " at t=" << t << ": " << why;
    return os.str();
}

}  // namespace detail

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& why)
        : Error(ErrorCategory::config, "ConfigError: " + why) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& why)
        : Error(ErrorCategory::io, "IoError: " + why) {}
};

// Target trajectory touches the equatorial plane; the inverse field is
// undefined where n3 vanishes.
class EquatorSingularity : public Error {
public:
    explicit EquatorSingularity(double t)
        : Error(ErrorCategory::singularity,
                detail::at_time("EquatorSingularity", t, "target n3 is below threshold")),
          time(t) {}

    double time;
};

// The synthesized-field denominator n3(t) vanishes for the requested
// rotation program and initial condition.
class DenominatorSingularity : public Error {
public:
    explicit DenominatorSingularity(double t)
        : Error(ErrorCategory::singularity,
                detail::at_time("DenominatorSingularity", t, "denominator n3 is below threshold")),
          time(t) {}

    double time;
};

// cos(chi) ~ 0: the constant-b3 construction divides by cos(chi).
class ChiDegenerate : public Error {
public:
    ChiDegenerate()
        : Error(ErrorCategory::singularity,
                "ChiDegenerate: cos(chi) is zero, constant-b3 construction undefined") {}
};

// Full population transfer needs cos(chi) = 0; anything else caps the
// transition probability below one.
class NotMaximalResonance : public Error {
public:
    explicit NotMaximalResonance(const std::string& why)
        : Error(ErrorCategory::config, "NotMaximalResonance: " + why) {}
};

// Solid-angle integrand has a pole at the south pole, n3 = -1.
class SouthPoleSingularity : public Error {
public:
    explicit SouthPoleSingularity(double t)
        : Error(ErrorCategory::singularity,
                detail::at_time("SouthPoleSingularity", t, "trajectory reaches 1 + n3 below threshold")),
          time(t) {}

    double time;
};

// Solid angle is only defined for a closed trajectory.
class OpenTrajectory : public Error {
public:
    explicit OpenTrajectory(double gap)
        : Error(ErrorCategory::certification,
                "OpenTrajectory: endpoints differ by " + std::to_string(gap)) {}
};

// Phase decomposition requires the evolution to return to the initial ray.
class NotCyclic : public Error {
public:
    explicit NotCyclic(double deviation)
        : Error(ErrorCategory::certification,
                "NotCyclic: propagator deviation from a global phase is " + std::to_string(deviation)) {}
};

// Closed-form solid angles assume integer windings over the loop time.
class LoopConditionViolated : public Error {
public:
    explicit LoopConditionViolated(const std::string& why)
        : Error(ErrorCategory::certification, "LoopConditionViolated: " + why) {}
};

// A field evaluation produced NaN or infinity during integration.
class NonFiniteField : public Error {
public:
    explicit NonFiniteField(double t)
        : Error(ErrorCategory::singularity,
                detail::at_time("NonFiniteField", t, "field evaluation is not finite")),
          time(t) {}

    double time;
};

}  // namespace spinforge
