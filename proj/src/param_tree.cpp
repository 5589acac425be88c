#include "sciforge/param_tree.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "sciforge/text_format.hpp"

namespace sciforge::params {

namespace {

// Tags and attribute names share the node's namespace; names opening with
// the reserved doc prefix would collide with the _doc_ serialization
// convention on re-parse.
constexpr std::string_view kDocPrefix = "_doc_";

bool valid_param_identifier(std::string_view name) {
    return is_identifier(name) && !name.starts_with(kDocPrefix);
}

void require_identifier(const std::string& name) {
    if (!valid_param_identifier(name))
        throw InvalidIdentifier(name);
}

}  // namespace

std::string_view kind_name(ValueKind kind) {
    switch (kind) {
        case ValueKind::Bool: return "Bool";
        case ValueKind::Int: return "Int";
        case ValueKind::Real: return "Real";
        case ValueKind::Text: return "Text";
        case ValueKind::None: return "None";
        case ValueKind::List: return "List";
    }
    return "?";
}

ParamValue ParamValue::real(double v) {
    if (!std::isfinite(v))
        throw NonFiniteReal();
    return ParamValue(v);
}

ParamValue ParamValue::list(std::vector<ParamValue> elements) {
    bool has_real = false;
    bool has_int = false;
    for (const auto& e : elements) {
        if (e.kind() == ValueKind::List)
            throw MalformedList("nested lists are not allowed");
        has_real |= e.kind() == ValueKind::Real;
        has_int |= e.kind() == ValueKind::Int;
    }
    if (has_real && has_int) {
        for (auto& e : elements)
            if (e.kind() == ValueKind::Int)
                e = ParamValue::real(static_cast<double>(e.as_int()));
    }
    for (const auto& e : elements)
        if (e.kind() != elements.front().kind())
            throw MalformedList("elements of mixed kinds (" +
                                std::string(kind_name(elements.front().kind())) +
                                " vs " + std::string(kind_name(e.kind())) + ")");
    return ParamValue(std::move(elements));
}

ValueKind ParamValue::kind() const {
    switch (payload_.index()) {
        case 0: return ValueKind::None;
        case 1: return ValueKind::Bool;
        case 2: return ValueKind::Int;
        case 3: return ValueKind::Real;
        case 4: return ValueKind::Text;
        default: return ValueKind::List;
    }
}

ValueKind ParamValue::element_kind() const {
    const auto& elems = elements();
    return elems.empty() ? ValueKind::None : elems.front().kind();
}

std::string render_literal(const ParamValue& value) {
    switch (value.kind()) {
        case ValueKind::Bool: return value.as_bool() ? "True" : "False";
        case ValueKind::Int: return std::to_string(value.as_int());
        case ValueKind::Real: return format_double(value.as_real());
        case ValueKind::Text: return value.as_text();
        case ValueKind::None: return "None";
        case ValueKind::List: {
            std::string out = "[";
            const auto& elems = value.elements();
            for (std::size_t i = 0; i < elems.size(); ++i) {
                if (i)
                    out += ", ";
                out += render_literal(elems[i]);
            }
            out += "]";
            return out;
        }
    }
    return {};
}

namespace {

bool is_integer_literal(std::string_view s) {
    std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
    if (i == s.size())
        return false;
    return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
}

// [+-]? ( d+ | d+.d* | .d+ ) ( [eE][+-]?d+ )?  with at least one of
// '.' / exponent present, so integers stay integers.
bool is_real_literal(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-'))
        ++i;
    std::size_t digits_before = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        ++i;
        ++digits_before;
    }
    bool has_dot = false;
    std::size_t digits_after = 0;
    if (i < s.size() && s[i] == '.') {
        has_dot = true;
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++i;
            ++digits_after;
        }
    }
    if (digits_before + digits_after == 0)
        return false;
    bool has_exp = false;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        has_exp = true;
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-'))
            ++i;
        std::size_t exp_digits = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++i;
            ++exp_digits;
        }
        if (exp_digits == 0)
            return false;
    }
    return i == s.size() && (has_dot || has_exp);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

ParamValue infer_scalar(std::string_view text) {
    if (text == "True")
        return ParamValue::boolean(true);
    if (text == "False")
        return ParamValue::boolean(false);
    if (text == "None")
        return ParamValue::none();
    if (is_integer_literal(text)) {
        if (auto v = parse_integer(text))
            return ParamValue::integer(*v);
        // wider than 64 bits: fall through to the real reading
        if (auto v = parse_double(text))
            return ParamValue::real(*v);
    }
    if (is_real_literal(text)) {
        auto v = parse_double(text);
        if (!v || !std::isfinite(*v))
            throw NonFiniteReal();
        return ParamValue::real(*v);
    }
    return ParamValue::text(std::string(text));
}

ParamValue infer_list(std::string_view text) {
    if (text.back() != ']')
        throw MalformedList("unbalanced brackets in '" + std::string(text) + "'");
    std::string_view inner = text.substr(1, text.size() - 2);
    if (inner.find('[') != std::string_view::npos ||
        inner.find(']') != std::string_view::npos)
        throw MalformedList("nested lists are not allowed");
    if (trim(inner).empty())
        return ParamValue::list({});
    std::vector<ParamValue> elems;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = inner.find(',', start);
        std::string_view piece = comma == std::string_view::npos
                                     ? inner.substr(start)
                                     : inner.substr(start, comma - start);
        elems.push_back(infer_scalar(trim(piece)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return ParamValue::list(std::move(elems));  // homogeneity checked there
}

}  // namespace

ParamValue infer_value(std::string_view text) {
    if (!text.empty() && text.front() == '[')
        return infer_list(text);
    return infer_scalar(text);
}

// ---------------------------------------------------------------------------
// ParamNode

ParamNode::ParamNode(std::string tag) : tag_(std::move(tag)) {
    require_identifier(tag_);
}

void ParamNode::check_fresh_name(const std::string& name) const {
    if (name == tag_)
        throw DuplicateName(name);
    for (const auto& a : attribs_)
        if (a.name == name)
            throw DuplicateName(name);
    for (const auto& c : children_)
        if (c->tag() == name)
            throw DuplicateName(name);
}

ParamNode& ParamNode::create_child(
    const std::string& tag,
    const std::vector<std::pair<std::string, ParamValue>>& attribs) {
    require_identifier(tag);
    check_fresh_name(tag);
    auto node = std::make_unique<ParamNode>(tag);
    for (const auto& [name, value] : attribs)
        node->declare_attrib(name, value);
    children_.push_back(std::move(node));
    return *children_.back();
}

void ParamNode::declare_attrib(const std::string& name, ParamValue default_value,
                               std::string doc) {
    require_identifier(name);
    check_fresh_name(name);
    attribs_.push_back({name, std::move(default_value), std::move(doc)});
}

void ParamNode::set_attrib(const std::string& name, ParamValue value) {
    for (auto& a : attribs_) {
        if (a.name != name)
            continue;
        ValueKind declared = a.value.kind();
        ValueKind incoming = value.kind();
        if (declared == ValueKind::Real && incoming == ValueKind::Int)
            value = ParamValue::real(static_cast<double>(value.as_int()));
        else if (incoming != declared)
            throw KindMismatch(name, "declared " + std::string(kind_name(declared)) +
                                         ", got " + std::string(kind_name(incoming)));
        a.value = std::move(value);
        return;
    }
    throw UnknownParameter(name);
}

const ParamValue& ParamNode::get_attrib(const std::string& name) const {
    for (const auto& a : attribs_)
        if (a.name == name)
            return a.value;
    throw UnknownParameter(name);
}

bool ParamNode::has_attrib(const std::string& name) const {
    return std::any_of(attribs_.begin(), attribs_.end(),
                       [&](const Attrib& a) { return a.name == name; });
}

ParamNode* ParamNode::find_child(std::string_view tag) {
    for (auto& c : children_)
        if (c->tag() == tag)
            return c.get();
    return nullptr;
}

const ParamNode* ParamNode::find_child(std::string_view tag) const {
    for (const auto& c : children_)
        if (c->tag() == tag)
            return c.get();
    return nullptr;
}

ParamNode ParamNode::clone() const {
    ParamNode copy(tag_);
    copy.doc_ = doc_;
    copy.attribs_ = attribs_;
    for (const auto& c : children_)
        copy.children_.push_back(std::make_unique<ParamNode>(c->clone()));
    return copy;
}

bool operator==(const ParamNode& a, const ParamNode& b) {
    if (a.tag_ != b.tag_ || a.doc_ != b.doc_ || a.attribs_ != b.attribs_ ||
        a.children_.size() != b.children_.size())
        return false;
    for (std::size_t i = 0; i < a.children_.size(); ++i)
        if (!(*a.children_[i] == *b.children_[i]))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// ParamPath

ParamPath ParamPath::parse(std::string_view dotted) {
    std::vector<std::string> segments;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = dotted.find('.', start);
        std::string_view piece = dot == std::string_view::npos
                                     ? dotted.substr(start)
                                     : dotted.substr(start, dot - start);
        if (!is_identifier(piece))
            throw InvalidIdentifier(std::string(piece));
        segments.emplace_back(piece);
        if (dot == std::string_view::npos)
            break;
        start = dot + 1;
    }
    return ParamPath(std::move(segments));
}

std::string ParamPath::dotted() const {
    std::string out;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (i)
            out += '.';
        out += segments_[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// XML writer

namespace {

std::string escape_xml(std::string_view raw, bool quote) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"':
                if (quote) {
                    out += "&quot;";
                    break;
                }
                [[fallthrough]];
            default: out += c;
        }
    }
    return out;
}

void write_node(std::string& out, const ParamNode& node, int depth) {
    const std::string indent(2 * static_cast<std::size_t>(depth), ' ');
    out += indent;
    out += '<';
    out += node.tag();
    for (const auto& a : node.attribs()) {
        out += ' ';
        out += a.name;
        out += "=\"";
        out += escape_xml(render_literal(a.value), true);
        out += '"';
    }
    bool has_attr_docs = std::any_of(node.attribs().begin(), node.attribs().end(),
                                     [](const Attrib& a) { return !a.doc.empty(); });
    if (node.doc().empty() && !has_attr_docs && node.children().empty()) {
        out += "/>\n";
        return;
    }
    out += ">\n";
    const std::string inner(2 * static_cast<std::size_t>(depth + 1), ' ');
    if (!node.doc().empty())
        out += inner + "<_doc_>" + escape_xml(node.doc(), false) + "</_doc_>\n";
    for (const auto& a : node.attribs())
        if (!a.doc.empty())
            out += inner + "<_doc_" + a.name + ">" + escape_xml(a.doc, false) +
                   "</_doc_" + a.name + ">\n";
    for (const auto& child : node.children())
        write_node(out, *child, depth + 1);
    out += indent + "</" + node.tag() + ">\n";
}

}  // namespace

std::string to_xml_text(const ParamNode& root) {
    std::string out;
    write_node(out, root, 0);
    return out;
}

// ---------------------------------------------------------------------------
// XML parser

namespace {

class XmlParser {
public:
    explicit XmlParser(std::string_view text) : text_(text) {}

    ParamNode parse_document() {
        skip_whitespace();
        ParamNode root = parse_element();
        skip_whitespace();
        if (pos_ != text_.size())
            fail("trailing content after root element");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& detail) const {
        int line = 1;
        int column = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw XmlSyntax(detail, line, column);
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char next() {
        if (eof())
            fail("unexpected end of input");
        return text_[pos_++];
    }

    void expect(char c) {
        if (eof() || text_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_whitespace() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek())))
            ++pos_;
    }

    std::string read_name() {
        std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                          peek() == '_'))
            ++pos_;
        if (pos_ == start)
            fail("expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string unescape(std::string_view raw) {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out += raw[i];
                continue;
            }
            std::size_t semi = raw.find(';', i);
            if (semi == std::string_view::npos)
                fail("unterminated entity");
            std::string_view entity = raw.substr(i + 1, semi - i - 1);
            if (entity == "amp")
                out += '&';
            else if (entity == "lt")
                out += '<';
            else if (entity == "gt")
                out += '>';
            else if (entity == "quot")
                out += '"';
            else if (entity == "apos")
                out += '\'';
            else
                fail("unknown entity '&" + std::string(entity) + ";'");
            i = semi;
        }
        return out;
    }

    std::string read_attr_value() {
        expect('"');
        std::size_t start = pos_;
        while (!eof() && peek() != '"' && peek() != '<')
            ++pos_;
        if (eof() || peek() != '"')
            fail("unterminated attribute value");
        std::string value = unescape(text_.substr(start, pos_ - start));
        ++pos_;
        return value;
    }

    // Text content of a _doc_ element, up to '<'.
    std::string read_text() {
        std::size_t start = pos_;
        while (!eof() && peek() != '<')
            ++pos_;
        return unescape(text_.substr(start, pos_ - start));
    }

    ParamNode parse_element() {
        expect('<');
        std::string tag = read_name();
        if (!valid_param_identifier(tag))
            throw InvalidIdentifier(tag);
        ParamNode node{tag};

        while (true) {
            bool had_space = !eof() && std::isspace(static_cast<unsigned char>(peek()));
            skip_whitespace();
            if (eof())
                fail("unterminated element");
            if (peek() == '/' || peek() == '>')
                break;
            if (!had_space)
                fail("expected whitespace before attribute");
            std::string name = read_name();
            if (!valid_param_identifier(name))
                throw InvalidIdentifier(name);
            skip_whitespace();
            expect('=');
            skip_whitespace();
            node.declare_attrib(name, infer_value(read_attr_value()));
        }

        if (peek() == '/') {
            ++pos_;
            expect('>');
            return node;
        }
        expect('>');
        parse_children(node, tag);
        return node;
    }

    void parse_children(ParamNode& node, const std::string& tag) {
        while (true) {
            skip_whitespace();
            if (eof())
                fail("missing closing tag for <" + tag + ">");
            if (peek() != '<')
                fail("unexpected text content");
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                pos_ += 2;
                std::string closing = read_name();
                if (closing != tag)
                    fail("mismatched closing tag </" + closing + "> for <" + tag + ">");
                skip_whitespace();
                expect('>');
                return;
            }
            // peek the child name without consuming, to route _doc_ elements
            std::size_t save = pos_;
            ++pos_;
            std::string child_name = read_name();
            if (child_name.starts_with(kDocPrefix)) {
                parse_doc_element(node, child_name);
                continue;
            }
            pos_ = save;
            ParamNode child = parse_element();
            node.adopt_child(std::move(child));
        }
    }

    void parse_doc_element(ParamNode& node, const std::string& name) {
        skip_whitespace();
        expect('>');
        std::string text = read_text();
        expect('<');
        expect('/');
        std::string closing = read_name();
        if (closing != name)
            fail("mismatched closing tag </" + closing + ">");
        skip_whitespace();
        expect('>');
        if (name == kDocPrefix) {
            if (!node.doc().empty())
                fail("duplicate _doc_ element");
            node.set_doc(std::move(text));
            return;
        }
        std::string attr = name.substr(kDocPrefix.size());
        if (!node.set_attrib_doc(attr, std::move(text)))
            fail("documentation for unknown attribute '" + attr + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

ParamNode& ParamNode::adopt_child(ParamNode&& child) {
    check_fresh_name(child.tag());
    children_.push_back(std::make_unique<ParamNode>(std::move(child)));
    return *children_.back();
}

bool ParamNode::set_attrib_doc(const std::string& name, std::string doc) {
    for (auto& a : attribs_) {
        if (a.name == name) {
            a.doc = std::move(doc);
            return true;
        }
    }
    return false;
}

ParamNode parse_xml_text(std::string_view text) {
    return XmlParser(text).parse_document();
}

// ---------------------------------------------------------------------------
// overrides

namespace {

void apply_node(ParamNode& target, const ParamNode& overrides, ParamPath path) {
    for (const auto& a : overrides.attribs()) {
        ParamPath attr_path = path;
        attr_path.push(a.name);
        if (!target.has_attrib(a.name))
            throw UnknownParameter(attr_path.dotted());
        try {
            target.set_attrib(a.name, a.value);
        } catch (const KindMismatch& e) {
            throw KindMismatch(attr_path.dotted(), e.what());
        }
    }
    for (const auto& child : overrides.children()) {
        ParamPath child_path = path;
        child_path.push(child->tag());
        ParamNode* sub = target.find_child(child->tag());
        if (!sub)
            throw UnknownParameter(child_path.dotted());
        apply_node(*sub, *child, std::move(child_path));
    }
}

}  // namespace

ParamNode apply_overrides(const ParamNode& defaults, const ParamNode& overrides) {
    ParamNode result = defaults.clone();
    if (overrides.tag() != defaults.tag())
        throw UnknownParameter(overrides.tag());
    apply_node(result, overrides, ParamPath{});
    return result;
}

}  // namespace sciforge::params
