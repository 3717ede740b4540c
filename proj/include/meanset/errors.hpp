#pragma once

#include <stdexcept>
#include <string>

namespace meanset {

// Error taxonomy mirrored by the CLI exit codes:
//   input_error    -> exit 3  (malformed files, invalid parameters, failed validation)
//   resource_error -> exit 4  (a configured size/work cap would be exceeded)
//   numeric_error  -> exit 5  (a numeric routine left its validity envelope)
// Usage errors (bad flags) are handled by the CLI layer itself -> exit 2.

struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace meanset
