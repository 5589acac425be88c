#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sciforge/errors.hpp"

namespace sciforge::series {

class NoExtension : public Error {
public:
    explicit NoExtension(const std::string& name)
        : Error("filename has no extension: '" + name + "'") {}
};

class EmptyInput : public Error {
public:
    EmptyInput() : Error("a serie needs at least one filename") {}
};

class HeterogeneousSeries : public Error {
public:
    explicit HeterogeneousSeries(const std::string& name)
        : Error("filename does not match the serie pattern: '" + name + "'"),
          offending_(name) {}
    const std::string& offending() const noexcept { return offending_; }

private:
    std::string offending_;
};

class AxisOutOfRange : public Error {
public:
    AxisOutOfRange(std::size_t axis, std::size_t arity)
        : Error("axis " + std::to_string(axis) + " out of range for arity " +
                std::to_string(arity)) {}
};

class NonPositiveStep : public Error {
public:
    NonPositiveStep() : Error("pairing step must be positive") {}
};

using IndexTuple = std::vector<long long>;

/// Filename decomposition: literal text pieces around integer index slots.
/// A slot keeps its zero-pad width (0 = unpadded); a run counts as padded
/// when it is at least two digits long and opens with '0'.
struct FilePattern {
    std::vector<std::string> literals;  // slot_count() + 1 pieces of the stem
    std::vector<int> pad_widths;        // one per slot
    std::string extension;              // without the dot

    std::size_t slot_count() const noexcept { return pad_widths.size(); }
    friend bool operator==(const FilePattern&, const FilePattern&) = default;
};

std::pair<FilePattern, IndexTuple> parse_filename(std::string_view name);
std::string render_filename(const FilePattern& pattern, const IndexTuple& tuple);

/// A set of files sharing one pattern; tuples unique, lexicographically
/// sorted, all of slot_count arity.
class Serie {
public:
    Serie(FilePattern pattern, std::vector<IndexTuple> tuples);

    const FilePattern& pattern() const noexcept { return pattern_; }
    const std::vector<IndexTuple>& tuples() const noexcept { return tuples_; }
    std::size_t arity() const noexcept { return pattern_.slot_count(); }
    std::vector<std::string> filenames() const;

private:
    FilePattern pattern_;
    std::vector<IndexTuple> tuples_;
};

Serie build_serie(const std::vector<std::string>& names);

struct AxisRange {
    long long min;
    long long max;
    std::size_t count;  // distinct values, not the span

    friend bool operator==(const AxisRange&, const AxisRange&) = default;
};

std::vector<AxisRange> index_ranges(const Serie& serie);

/// Files grouped by the value of `axis`; groups ordered by that value,
/// files within a group ordered by the remaining axes lexicographically.
std::vector<std::vector<std::string>> groups_along_axis(const Serie& serie,
                                                        std::size_t axis);

/// (f[i], f[i+step]) couples along `axis` for every combination of the other
/// axes; couples whose partner is absent are skipped.
std::vector<std::pair<std::string, std::string>> make_pairs(const Serie& serie,
                                                            std::size_t axis,
                                                            long long step);

}  // namespace sciforge::series
