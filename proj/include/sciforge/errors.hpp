#pragma once

#include <stdexcept>
#include <string>

namespace sciforge {

/// Base class of every error raised by the toolkit. CLI maps these to exit
/// code 1 with the message on stderr; anything else is a bug.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace sciforge
