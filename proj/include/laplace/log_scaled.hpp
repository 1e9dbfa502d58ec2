#pragma once

#include <cmath>
#include <limits>

#include "laplace/errors.hpp"

namespace laplace {

// A real number stored as a sign and the log of its magnitude, so that
// quantities far outside double range stay representable.
struct LogScaledValue {
    int sign = 0;  // -1, 0 or +1
    double log_mag = -std::numeric_limits<double>::infinity();

    static LogScaledValue from_double(double v) {
        if (v == 0.0) return {};
        return {v > 0.0 ? 1 : -1, std::log(std::abs(v))};
    }

    // Materialize as a plain double. Throws Error when the magnitude
    // overflows; underflow quietly returns zero.
    double to_double() const {
        if (sign == 0) return 0.0;
        double mag = std::exp(log_mag);
        if (std::isinf(mag)) {
            throw Error("log-scaled value with log-magnitude " +
                        detail::format_double(log_mag) + " overflows double range");
        }
        return sign > 0 ? mag : -mag;
    }
};

}  // namespace laplace
