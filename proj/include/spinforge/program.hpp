#pragma once

#include <cmath>
#include <variant>
#include <vector>

#include "spinforge/core.hpp"
#include "spinforge/errors.hpp"

namespace spinforge {

// Angle programs are sums of primitive terms, each vanishing at t = 0, so
// every program satisfies value(0) = 0 and has an exact derivative.

struct LinearTerm {
    double rate;  // c * t
};

struct QuadraticTerm {
    double curvature;  // c * t^2
};

struct SinusoidTerm {
    double amplitude;  // a * sin(w * t)
    double frequency;
};

using AngleTerm = std::variant<LinearTerm, QuadraticTerm, SinusoidTerm>;

class AngleProgram {
public:
    AngleProgram() = default;
    explicit AngleProgram(std::vector<AngleTerm> terms) : terms_(std::move(terms)) {}

    static AngleProgram linear(double rate) { return AngleProgram({LinearTerm{rate}}); }
    static AngleProgram quadratic(double curvature) {
        return AngleProgram({QuadraticTerm{curvature}});
    }
    static AngleProgram sinusoid(double amplitude, double frequency) {
        return AngleProgram({SinusoidTerm{amplitude, frequency}});
    }

    const std::vector<AngleTerm>& terms() const { return terms_; }

    AngleProgram& add(AngleTerm term) {
        terms_.push_back(term);
        return *this;
    }

    double value(double t) const {
        double v = 0.0;
        for (const auto& term : terms_) {
            if (const auto* lin = std::get_if<LinearTerm>(&term)) {
                v += lin->rate * t;
            } else if (const auto* quad = std::get_if<QuadraticTerm>(&term)) {
                v += quad->curvature * t * t;
            } else {
                const auto& s = std::get<SinusoidTerm>(term);
                v += s.amplitude * std::sin(s.frequency * t);
            }
        }
        return v;
    }

    double derivative(double t) const {
        double v = 0.0;
        for (const auto& term : terms_) {
            if (const auto* lin = std::get_if<LinearTerm>(&term)) {
                v += lin->rate;
            } else if (const auto* quad = std::get_if<QuadraticTerm>(&term)) {
                v += 2.0 * quad->curvature * t;
            } else {
                const auto& s = std::get<SinusoidTerm>(term);
                v += s.amplitude * s.frequency * std::cos(s.frequency * t);
            }
        }
        return v;
    }

    // Program with every term multiplied by s; frequencies are unchanged.
    AngleProgram scaled(double s) const {
        std::vector<AngleTerm> out;
        out.reserve(terms_.size());
        for (const auto& term : terms_) {
            if (const auto* lin = std::get_if<LinearTerm>(&term)) {
                out.push_back(LinearTerm{s * lin->rate});
            } else if (const auto* quad = std::get_if<QuadraticTerm>(&term)) {
                out.push_back(QuadraticTerm{s * quad->curvature});
            } else {
                const auto& sin_term = std::get<SinusoidTerm>(term);
                out.push_back(SinusoidTerm{s * sin_term.amplitude, sin_term.frequency});
            }
        }
        return AngleProgram(std::move(out));
    }

private:
    std::vector<AngleTerm> terms_;
};

// Axis tilt chi plus azimuth program alpha and rotation program beta. The
// instantaneous frame is R(t) = Rz(beta) Ry(chi) Rz(-alpha) Ry(-chi), which
// is the identity at t = 0.
struct RotationProgram {
    double chi;
    AngleProgram alpha;
    AngleProgram beta;

    RotationProgram(double chi_, AngleProgram alpha_, AngleProgram beta_)
        : chi(chi_), alpha(std::move(alpha_)), beta(std::move(beta_)) {
        if (!std::isfinite(chi) || chi < 0.0 || chi > pi)
            throw ConfigError("RotationProgram requires chi in [0, pi]");
    }

    double lambda() const { return std::cos(chi); }
    double sin_chi() const { return std::sin(chi); }
};

inline SO3Matrix rotation_matrix(const RotationProgram& prog, double t) {
    return SO3Matrix::rotation_z(prog.beta.value(t)) * SO3Matrix::rotation_y(prog.chi) *
           SO3Matrix::rotation_z(-prog.alpha.value(t)) * SO3Matrix::rotation_y(-prog.chi);
}

}  // namespace spinforge
