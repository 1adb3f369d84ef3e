#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "spinforge/core.hpp"
#include "spinforge/errors.hpp"
#include "spinforge/program.hpp"

namespace spinforge {

// Field samples on a strictly increasing time axis, evaluated by linear
// interpolation and clamped to the end values outside the sampled range.
struct SampledField {
    std::vector<double> times;
    std::vector<Vec3> values;

    SampledField(std::vector<double> t, std::vector<Vec3> v)
        : times(std::move(t)), values(std::move(v)) {
        if (times.size() != values.size() || times.size() < 2)
            throw ConfigError("sampled field needs matching time/value arrays of size >= 2");
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (!std::isfinite(times[i]) || !values[i].finite())
                throw ConfigError("sampled field contains non-finite entries");
            if (i > 0 && !(times[i] > times[i - 1]))
                throw ConfigError("sampled field times must be strictly increasing");
        }
    }

    Vec3 value(double t) const {
        if (t <= times.front()) return values.front();
        if (t >= times.back()) return values.back();
        const auto it = std::upper_bound(times.begin(), times.end(), t);
        const std::size_t hi = static_cast<std::size_t>(it - times.begin());
        const std::size_t lo = hi - 1;
        const double w = (t - times[lo]) / (times[hi] - times[lo]);
        return values[lo] * (1.0 - w) + values[hi] * w;
    }

    double min_spacing() const {
        double m = times[1] - times[0];
        for (std::size_t i = 2; i < times.size(); ++i)
            m = std::min(m, times[i] - times[i - 1]);
        return m;
    }
};

struct SymbolicField {
    std::function<Vec3(double)> fn;
};

class FieldProgram {
public:
    static FieldProgram symbolic(std::function<Vec3(double)> fn) {
        if (!fn) throw ConfigError("symbolic field requires a callable");
        return FieldProgram(SymbolicField{std::move(fn)});
    }

    static FieldProgram from_components(std::function<double(double)> fx,
                                        std::function<double(double)> fy,
                                        std::function<double(double)> fz) {
        if (!fx || !fy || !fz) throw ConfigError("symbolic field requires three callables");
        return symbolic([fx = std::move(fx), fy = std::move(fy), fz = std::move(fz)](double t) {
            return Vec3{fx(t), fy(t), fz(t)};
        });
    }

    static FieldProgram constant(const Vec3& b) {
        return symbolic([b](double) { return b; });
    }

    static FieldProgram sampled(std::vector<double> times, std::vector<Vec3> values) {
        return FieldProgram(SampledField(std::move(times), std::move(values)));
    }

    Vec3 value(double t) const {
        if (const auto* s = std::get_if<SampledField>(&repr_)) return s->value(t);
        return std::get<SymbolicField>(repr_).fn(t);
    }

    bool is_sampled() const { return std::holds_alternative<SampledField>(repr_); }

    const SampledField* samples() const { return std::get_if<SampledField>(&repr_); }

    // Largest integrator step that still lands at least one evaluation per
    // sample interval; no constraint for symbolic fields.
    std::optional<double> min_sample_spacing() const {
        if (const auto* s = std::get_if<SampledField>(&repr_)) return s->min_spacing();
        return std::nullopt;
    }

private:
    explicit FieldProgram(SymbolicField f) : repr_(std::move(f)) {}
    explicit FieldProgram(SampledField f) : repr_(std::move(f)) {}

    std::variant<SymbolicField, SampledField> repr_;
};

// Longitudinal component b3(t), free to choose when synthesizing a field.
// ScaledDerivative keeps cancellations exact: with scale = -1 the sum
// gauge(t) + p'(t) is floating-point zero, not merely small.
class GaugeProgram {
public:
    static GaugeProgram constant(double c) {
        if (!std::isfinite(c)) throw ConfigError("gauge constant must be finite");
        return GaugeProgram(Repr{c});
    }

    static GaugeProgram scaled_derivative(AngleProgram p, double scale) {
        return GaugeProgram(Repr{Scaled{std::move(p), scale}});
    }

    static GaugeProgram custom(std::function<double(double)> fn) {
        if (!fn) throw ConfigError("custom gauge requires a callable");
        return GaugeProgram(Repr{std::move(fn)});
    }

    double operator()(double t) const {
        if (const auto* c = std::get_if<double>(&repr_)) return *c;
        if (const auto* s = std::get_if<Scaled>(&repr_))
            return s->scale * s->program.derivative(t);
        return std::get<std::function<double(double)>>(repr_)(t);
    }

private:
    struct Scaled {
        AngleProgram program;
        double scale;
    };
    using Repr = std::variant<double, Scaled, std::function<double(double)>>;

    explicit GaugeProgram(Repr r) : repr_(std::move(r)) {}

    Repr repr_;
};

}  // namespace spinforge
