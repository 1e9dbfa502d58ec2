#pragma once

#include <vector>

namespace laplace {

// Truncated Taylor expansion of a function at a point.
// coeffs[j] holds f^(j)(center) / j!.
struct Jet {
    double center = 0.0;
    std::vector<double> coeffs;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }

    // f^(j)(center), i.e. coeffs[j] * j!.
    double derivative(int j) const;
};

}  // namespace laplace
