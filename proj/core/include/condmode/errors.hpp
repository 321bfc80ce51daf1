#pragma once

#include <stdexcept>
#include <string>

namespace condmode {

// Thrown when a query point is numerically infinitely far from every kernel
// of a model, so that no conditional distribution can be formed even in the
// log domain.
class OutsideSupportError : public std::runtime_error {
public:
    explicit OutsideSupportError(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace condmode
