#include "sciforge/file_series.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace sciforge::series {

namespace {

bool is_digit(char c) {
    return c >= '0' && c <= '9';
}

std::string pad_number(long long value, int width) {
    std::string digits = std::to_string(value);
    if (width > 0 && digits.size() < static_cast<std::size_t>(width))
        digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
    return digits;
}

}  // namespace

std::pair<FilePattern, IndexTuple> parse_filename(std::string_view name) {
    std::size_t dot = name.rfind('.');
    if (dot == std::string_view::npos || dot + 1 == name.size())
        throw NoExtension(std::string(name));
    std::string_view stem = name.substr(0, dot);
    FilePattern pattern;
    pattern.extension = std::string(name.substr(dot + 1));
    IndexTuple tuple;

    std::string literal;
    for (std::size_t i = 0; i < stem.size();) {
        if (!is_digit(stem[i])) {
            literal += stem[i++];
            continue;
        }
        std::size_t run = i;
        while (run < stem.size() && is_digit(stem[run]))
            ++run;
        std::string_view digits = stem.substr(i, run - i);
        pattern.literals.push_back(std::move(literal));
        literal.clear();
        pattern.pad_widths.push_back(
            digits.size() >= 2 && digits[0] == '0' ? static_cast<int>(digits.size())
                                                   : 0);
        tuple.push_back(std::stoll(std::string(digits)));
        i = run;
    }
    pattern.literals.push_back(std::move(literal));
    return {std::move(pattern), std::move(tuple)};
}

std::string render_filename(const FilePattern& pattern, const IndexTuple& tuple) {
    std::string out;
    for (std::size_t i = 0; i < pattern.slot_count(); ++i) {
        out += pattern.literals[i];
        out += pad_number(tuple.at(i), pattern.pad_widths[i]);
    }
    out += pattern.literals.back();
    out += '.';
    out += pattern.extension;
    return out;
}

Serie::Serie(FilePattern pattern, std::vector<IndexTuple> tuples)
    : pattern_(std::move(pattern)), tuples_(std::move(tuples)) {
    std::sort(tuples_.begin(), tuples_.end());
    tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
}

std::vector<std::string> Serie::filenames() const {
    std::vector<std::string> names;
    names.reserve(tuples_.size());
    for (const auto& t : tuples_)
        names.push_back(render_filename(pattern_, t));
    return names;
}

Serie build_serie(const std::vector<std::string>& names) {
    if (names.empty())
        throw EmptyInput();
    auto [pattern, first_tuple] = parse_filename(names.front());
    std::vector<IndexTuple> tuples{std::move(first_tuple)};
    for (std::size_t i = 1; i < names.size(); ++i) {
        auto [p, t] = parse_filename(names[i]);
        if (!(p == pattern))
            throw HeterogeneousSeries(names[i]);
        tuples.push_back(std::move(t));
    }
    return Serie(std::move(pattern), std::move(tuples));
}

std::vector<AxisRange> index_ranges(const Serie& serie) {
    std::vector<AxisRange> ranges;
    for (std::size_t axis = 0; axis < serie.arity(); ++axis) {
        std::set<long long> values;
        for (const auto& t : serie.tuples())
            values.insert(t[axis]);
        ranges.push_back({*values.begin(), *values.rbegin(), values.size()});
    }
    return ranges;
}

namespace {

IndexTuple drop_axis(const IndexTuple& tuple, std::size_t axis) {
    IndexTuple rest;
    rest.reserve(tuple.size() - 1);
    for (std::size_t i = 0; i < tuple.size(); ++i)
        if (i != axis)
            rest.push_back(tuple[i]);
    return rest;
}

void check_axis(const Serie& serie, std::size_t axis) {
    if (axis >= serie.arity())
        throw AxisOutOfRange(axis, serie.arity());
}

}  // namespace

std::vector<std::vector<std::string>> groups_along_axis(const Serie& serie,
                                                        std::size_t axis) {
    check_axis(serie, axis);
    // group value -> (remaining-axes tuple -> full tuple), both map-ordered
    std::map<long long, std::map<IndexTuple, IndexTuple>> grouped;
    for (const auto& t : serie.tuples())
        grouped[t[axis]].emplace(drop_axis(t, axis), t);
    std::vector<std::vector<std::string>> groups;
    groups.reserve(grouped.size());
    for (const auto& [value, members] : grouped) {
        std::vector<std::string> group;
        group.reserve(members.size());
        for (const auto& [rest, full] : members)
            group.push_back(render_filename(serie.pattern(), full));
        groups.push_back(std::move(group));
    }
    return groups;
}

std::vector<std::pair<std::string, std::string>> make_pairs(const Serie& serie,
                                                            std::size_t axis,
                                                            long long step) {
    check_axis(serie, axis);
    if (step <= 0)
        throw NonPositiveStep();
    std::set<IndexTuple> present(serie.tuples().begin(), serie.tuples().end());
    // other-axes combination -> sorted values present along `axis`
    std::map<IndexTuple, std::vector<long long>> lanes;
    for (const auto& t : serie.tuples())
        lanes[drop_axis(t, axis)].push_back(t[axis]);

    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& [rest, values] : lanes) {
        for (long long value : values) {
            IndexTuple from;
            from.reserve(rest.size() + 1);
            std::size_t r = 0;
            for (std::size_t i = 0; i < serie.arity(); ++i)
                from.push_back(i == axis ? value : rest[r++]);
            IndexTuple to = from;
            to[axis] = value + step;
            if (present.count(to))
                pairs.emplace_back(render_filename(serie.pattern(), from),
                                   render_filename(serie.pattern(), to));
        }
    }
    return pairs;
}

}  // namespace sciforge::series
