#pragma once

#include <stdexcept>
#include <string>

namespace enplan {

/// Raised for invalid arguments, malformed input files and I/O failures.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace enplan
