// errors.hpp — Error taxonomy shared by the library and the CLI exit-code map

#pragma once

#include <stdexcept>
#include <string>

namespace hqc {

// Bad arguments, malformed files, mismatched spaces/models. CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computed quantity failed a configured tolerance or accuracy check. CLI exit code 3.
class ToleranceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A requested truncation exceeds the dimension budget. CLI exit code 4.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hqc
