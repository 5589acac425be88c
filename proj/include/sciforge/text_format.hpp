#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace sciforge {

/// Shortest decimal rendering that parses back to the identical double,
/// always containing a '.' or an exponent so it cannot be read as an
/// integer ("0.5", "1e-05", "42.0"). Locale-independent. The input must
/// be finite.
std::string format_double(double value);

/// Locale-independent strtod over the whole string; nullopt unless every
/// character is consumed.
std::optional<double> parse_double(std::string_view text);

/// Whole-string signed integer parse; nullopt on any stray character or
/// overflow.
std::optional<long long> parse_integer(std::string_view text);

/// `[A-Za-z_][A-Za-z0-9_]*`
bool is_identifier(std::string_view text);

}  // namespace sciforge
