#pragma once

#include <stdexcept>
#include <string>

namespace forge {

// Malformed or inconsistent input data (bad records, schema violations,
// parse failures). Mapped to exit code 2 by the CLI.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem / stream failures. Mapped to exit code 3 by the CLI.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace forge
