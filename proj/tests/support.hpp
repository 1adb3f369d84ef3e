#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spinforge/core.hpp"
#include "spinforge/field.hpp"
#include "spinforge/program.hpp"

// Deterministic random inputs for property tests. Raw mt19937_64 draws are
// mapped to doubles by hand so the streams do not depend on the standard
// library's distribution implementations.
namespace testsupport {

struct Rng {
    std::mt19937_64 gen;

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double unit() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * unit(); }

    int pick(int n) { return static_cast<int>(gen() % static_cast<std::uint64_t>(n)); }

    spinforge::Vec3 unit_vector() {
        const double z = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, spinforge::two_pi);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(phi), r * std::sin(phi), z};
    }
};

// One to three terms with moderate rates so RK4 at test resolutions stays
// far below the asserted tolerances.
inline spinforge::AngleProgram random_program(Rng& rng) {
    spinforge::AngleProgram p;
    const int terms = 1 + rng.pick(3);
    for (int i = 0; i < terms; ++i) {
        switch (rng.pick(3)) {
            case 0:
                p.add(spinforge::LinearTerm{rng.uniform(-2.0, 2.0)});
                break;
            case 1:
                p.add(spinforge::QuadraticTerm{rng.uniform(-0.4, 0.4)});
                break;
            default:
                p.add(spinforge::SinusoidTerm{rng.uniform(-0.8, 0.8), rng.uniform(0.3, 2.5)});
                break;
        }
    }
    return p;
}

inline spinforge::RotationProgram random_rotation_program(Rng& rng) {
    return {rng.uniform(0.05, spinforge::pi - 0.05), random_program(rng), random_program(rng)};
}

// Smooth bounded field with a closed-form we can compare against after a
// reconstruction round trip.
struct SmoothFieldSpec {
    std::array<double, 3> offset;
    std::array<double, 3> amp;
    std::array<double, 3> freq;
    std::array<double, 3> phase;

    spinforge::Vec3 value(double t) const {
        return {offset[0] + amp[0] * std::sin(freq[0] * t + phase[0]),
                offset[1] + amp[1] * std::sin(freq[1] * t + phase[1]),
                offset[2] + amp[2] * std::sin(freq[2] * t + phase[2])};
    }

    spinforge::FieldProgram program() const {
        return spinforge::FieldProgram::symbolic([self = *this](double t) { return self.value(t); });
    }
};

inline SmoothFieldSpec random_smooth_field(Rng& rng) {
    SmoothFieldSpec s{};
    for (int i = 0; i < 3; ++i) {
        s.offset[i] = rng.uniform(-1.5, 1.5);
        s.amp[i] = rng.uniform(-1.0, 1.0);
        s.freq[i] = rng.uniform(0.3, 3.0);
        s.phase[i] = rng.uniform(0.0, spinforge::two_pi);
    }
    return s;
}

inline double max_distance(const std::vector<spinforge::BlochVector>& a,
                           const std::vector<spinforge::BlochVector>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size() && k < b.size(); ++k)
        m = std::max(m, (a[k].vec() - b[k].vec()).norm());
    return m;
}

}  // namespace testsupport
