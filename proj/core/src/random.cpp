#include "condmode/random.hpp"

#include <cmath>
#include <numbers>

namespace condmode {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    // log1p(-u1) = log(1 - u1); 1 - u1 never vanishes for u1 in [0, 1).
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

} // namespace condmode
