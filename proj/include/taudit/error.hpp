#pragma once

#include <stdexcept>
#include <string>

namespace taudit {

// Malformed or inconsistent input data (logs, series, spectra). CLI exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Endpoint unreachable or misbehaving. CLI exit code 3.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters (alpha outside (0,1), n_perm < 100, ...) are reported
// with std::invalid_argument. CLI exit code 1.

}  // namespace taudit
