#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sciforge/errors.hpp"

namespace sciforge::params {
class ParamNode;
}

namespace sciforge::nc {

/// Every parse failure carries the byte offset where it was detected.
class NcError : public Error {
public:
    NcError(const std::string& message, std::uint64_t offset)
        : Error(message + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

class BadMagic : public NcError {
public:
    explicit BadMagic(std::uint64_t offset)
        : NcError("not a NetCDF classic file (bad magic)", offset) {}
};

class UnsupportedFormat : public NcError {
public:
    explicit UnsupportedFormat(const std::string& what)
        : NcError("unsupported format: " + what, 0) {}
};

class UnsupportedVersion : public NcError {
public:
    UnsupportedVersion(int version, std::uint64_t offset)
        : NcError("unsupported NetCDF version byte " + std::to_string(version),
                  offset) {}
};

class TruncatedHeader : public NcError {
public:
    explicit TruncatedHeader(std::uint64_t offset)
        : NcError("truncated header", offset) {}
};

class MalformedPadding : public NcError {
public:
    explicit MalformedPadding(std::uint64_t offset)
        : NcError("nonzero padding bytes", offset) {}
};

/// Structurally invalid header content: bad section tag, unknown type
/// code, out-of-range dimension id, empty or duplicate names, more than
/// one record dimension.
class MalformedHeader : public NcError {
public:
    MalformedHeader(const std::string& detail, std::uint64_t offset)
        : NcError("malformed header: " + detail, offset) {}
};

class UnknownVariable : public Error {
public:
    explicit UnknownVariable(const std::string& name)
        : Error("no such variable: '" + name + "'") {}
};

class RecordVarUnsupported : public Error {
public:
    explicit RecordVarUnsupported(const std::string& name)
        : Error("record variable data is not readable: '" + name + "'") {}
};

class TruncatedData : public NcError {
public:
    explicit TruncatedData(std::uint64_t offset)
        : NcError("variable data extends past end of file", offset) {}
};

class UnrepresentableValue : public Error {
public:
    explicit UnrepresentableValue(const std::string& detail)
        : Error("value not representable in NetCDF classic: " + detail) {}
};

enum class NcType : std::uint32_t {
    Byte = 1,
    Char = 2,
    Short = 3,
    Int = 4,
    Float = 5,
    Double = 6,
};

std::string_view type_name(NcType type);
std::size_t type_size(NcType type);

/// Attribute / variable payload; Char data is text.
using NcValues = std::variant<std::string, std::vector<std::int8_t>,
                              std::vector<std::int16_t>, std::vector<std::int32_t>,
                              std::vector<float>, std::vector<double>>;

struct NcDim {
    std::string name;
    std::uint64_t length = 0;  // 0 = record (UNLIMITED)

    bool is_record() const noexcept { return length == 0; }
    friend bool operator==(const NcDim&, const NcDim&) = default;
};

struct NcAttr {
    std::string name;
    NcType type = NcType::Char;
    NcValues values;

    friend bool operator==(const NcAttr&, const NcAttr&) = default;
};

struct NcVar {
    std::string name;
    std::vector<std::uint32_t> dim_refs;
    std::vector<NcAttr> atts;
    NcType type = NcType::Double;
    std::uint64_t vsize = 0;
    std::uint64_t begin = 0;

    friend bool operator==(const NcVar&, const NcVar&) = default;
};

enum class CdfVersion { Cdf1 = 1, Cdf2 = 2 };

struct NcFile {
    CdfVersion version = CdfVersion::Cdf1;
    std::uint64_t numrecs = 0;
    std::vector<NcDim> dims;
    std::vector<NcAttr> gatts;
    std::vector<NcVar> vars;

    friend bool operator==(const NcFile&, const NcFile&) = default;
};

NcFile parse_netcdf(std::span<const unsigned char> bytes);

NcValues read_var_data(std::span<const unsigned char> bytes, const NcFile& file,
                       const std::string& var_name);

struct PrintOptions {
    bool show_data = false;
};

std::string print_tree(const NcFile& file, const std::string& label,
                       const PrintOptions& options = {});

/// Deterministic rendering of a value list; Char as a quoted string,
/// floating point in shortest round-trip form.
std::string render_values_text(const NcValues& values, NcType type);

/// Flatten a parameter tree into a CDF-1 file: scalar attributes become
/// global attributes named by dotted path, numeric lists become variables
/// with their own dimension, docs become CHAR attributes with the _doc_
/// suffix convention.
std::vector<unsigned char> write_netcdf(const params::ParamNode& root);

}  // namespace sciforge::nc
