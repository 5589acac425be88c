#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sciforge/errors.hpp"

namespace sciforge::params {

class InvalidIdentifier : public Error {
public:
    explicit InvalidIdentifier(const std::string& name)
        : Error("invalid identifier: '" + name + "'") {}
};

class DuplicateName : public Error {
public:
    explicit DuplicateName(const std::string& name)
        : Error("name already used in this node: '" + name + "'") {}
};

class UnknownParameter : public Error {
public:
    explicit UnknownParameter(const std::string& path)
        : Error("unknown parameter: '" + path + "'"), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class KindMismatch : public Error {
public:
    KindMismatch(const std::string& path, const std::string& detail)
        : Error("kind mismatch at '" + path + "': " + detail), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class NonFiniteReal : public Error {
public:
    NonFiniteReal() : Error("real parameter values must be finite") {}
};

class MalformedList : public Error {
public:
    explicit MalformedList(const std::string& detail)
        : Error("malformed list literal: " + detail) {}
};

class XmlSyntax : public Error {
public:
    XmlSyntax(const std::string& detail, int line, int column)
        : Error("XML syntax error at line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + detail),
          line_(line),
          column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

enum class ValueKind { Bool, Int, Real, Text, None, List };

std::string_view kind_name(ValueKind kind);

/// Tagged literal value. Lists are homogeneous in kind and never nested;
/// reals are always finite.
class ParamValue {
public:
    ParamValue() : payload_(std::monostate{}) {}

    static ParamValue boolean(bool v) { return ParamValue(v); }
    static ParamValue integer(long long v) { return ParamValue(v); }
    static ParamValue real(double v);
    static ParamValue text(std::string v) { return ParamValue(std::move(v)); }
    static ParamValue none() { return ParamValue(); }
    /// Elements must share one scalar kind; a mix of Int and Real is
    /// promoted to Real. Anything else raises MalformedList.
    static ParamValue list(std::vector<ParamValue> elements);

    ValueKind kind() const;
    bool is_scalar() const { return kind() != ValueKind::List; }

    bool as_bool() const { return std::get<bool>(payload_); }
    long long as_int() const { return std::get<long long>(payload_); }
    double as_real() const { return std::get<double>(payload_); }
    const std::string& as_text() const { return std::get<std::string>(payload_); }
    const std::vector<ParamValue>& elements() const {
        return std::get<std::vector<ParamValue>>(payload_);
    }
    /// Kind shared by all elements; None for an empty list.
    ValueKind element_kind() const;

    friend bool operator==(const ParamValue& a, const ParamValue& b) {
        return a.payload_ == b.payload_;
    }

private:
    template <typename T>
    explicit ParamValue(T v) : payload_(std::move(v)) {}

    std::variant<std::monostate, bool, long long, double, std::string,
                 std::vector<ParamValue>>
        payload_;
};

/// Canonical literal text; infer_value(render_literal(v)) == v for every
/// value whose Text payloads do not collide with another literal's grammar.
std::string render_literal(const ParamValue& value);

/// Classification order: True/False, None, integer, real, [list], text.
ParamValue infer_value(std::string_view text);

struct Attrib {
    std::string name;
    ParamValue value;
    std::string doc;  // empty = absent

    friend bool operator==(const Attrib&, const Attrib&) = default;
};

/// Hierarchical parameter node. Children and attributes live in one
/// identifier namespace, keep insertion order, and are strictly typed:
/// set_attrib on an undeclared name raises UnknownParameter, and the only
/// coercion is Int -> Real at declared-Real slots.
class ParamNode {
public:
    explicit ParamNode(std::string tag);

    ParamNode(ParamNode&&) noexcept = default;
    ParamNode& operator=(ParamNode&&) noexcept = default;
    ParamNode(const ParamNode&) = delete;
    ParamNode& operator=(const ParamNode&) = delete;

    const std::string& tag() const noexcept { return tag_; }
    const std::string& doc() const noexcept { return doc_; }
    void set_doc(std::string doc) { doc_ = std::move(doc); }

    ParamNode& create_child(
        const std::string& tag,
        const std::vector<std::pair<std::string, ParamValue>>& attribs = {});
    /// Append an already-built node; same uniqueness rules as create_child.
    ParamNode& adopt_child(ParamNode&& child);

    void declare_attrib(const std::string& name, ParamValue default_value,
                        std::string doc = "");
    /// Attach documentation to an existing attribute; false if absent.
    bool set_attrib_doc(const std::string& name, std::string doc);
    void set_attrib(const std::string& name, ParamValue value);
    const ParamValue& get_attrib(const std::string& name) const;
    bool has_attrib(const std::string& name) const;

    const std::vector<Attrib>& attribs() const noexcept { return attribs_; }
    const std::vector<std::unique_ptr<ParamNode>>& children() const noexcept {
        return children_;
    }
    ParamNode* find_child(std::string_view tag);
    const ParamNode* find_child(std::string_view tag) const;

    ParamNode clone() const;

    friend bool operator==(const ParamNode& a, const ParamNode& b);

private:
    void check_fresh_name(const std::string& name) const;

    std::string tag_;
    std::string doc_;
    std::vector<Attrib> attribs_;
    std::vector<std::unique_ptr<ParamNode>> children_;
};

/// Dotted parameter path ("solver.output.period").
class ParamPath {
public:
    ParamPath() = default;
    explicit ParamPath(std::vector<std::string> segments)
        : segments_(std::move(segments)) {}
    static ParamPath parse(std::string_view dotted);

    void push(std::string segment) { segments_.push_back(std::move(segment)); }
    const std::vector<std::string>& segments() const noexcept { return segments_; }
    std::string dotted() const;

    friend bool operator==(const ParamPath&, const ParamPath&) = default;

private:
    std::vector<std::string> segments_;
};

/// Canonical XML serialization: no declaration, 2-space indentation,
/// attributes in declaration order, _doc_ elements first, exactly one
/// trailing newline. parse_xml_text inverts it.
std::string to_xml_text(const ParamNode& root);
ParamNode parse_xml_text(std::string_view text);

/// Copy of `defaults` with every attribute present in `overrides` applied
/// through set_attrib semantics. Unknown names and kind mismatches carry
/// the full dotted path of the first offending entry.
ParamNode apply_overrides(const ParamNode& defaults, const ParamNode& overrides);

}  // namespace sciforge::params
