#include "sciforge/text_format.hpp"

#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>

namespace sciforge {

std::string format_double(double value) {
    assert(std::isfinite(value));
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    std::string out(buf, res.ptr);
    if (out.find_first_of(".eE") == std::string::npos)
        out += ".0";
    return out;
}

std::optional<double> parse_double(std::string_view text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        return std::nullopt;
    return value;
}

std::optional<long long> parse_integer(std::string_view text) {
    long long value = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        return std::nullopt;
    return value;
}

bool is_identifier(std::string_view text) {
    if (text.empty())
        return false;
    auto head = static_cast<unsigned char>(text[0]);
    if (!std::isalpha(head) && text[0] != '_')
        return false;
    for (char c : text.substr(1)) {
        auto uc = static_cast<unsigned char>(c);
        if (!std::isalnum(uc) && c != '_')
            return false;
    }
    return true;
}

}  // namespace sciforge
