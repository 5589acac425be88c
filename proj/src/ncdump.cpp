#include "sciforge/ncdump.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>
#include <set>

#include "sciforge/param_tree.hpp"
#include "sciforge/text_format.hpp"

namespace sciforge::nc {

namespace {

constexpr std::uint32_t kTagDimension = 10;
constexpr std::uint32_t kTagVariable = 11;
constexpr std::uint32_t kTagAttribute = 12;

std::size_t padded4(std::size_t n) {
    return (n + 3) & ~std::size_t{3};
}

}  // namespace

std::string_view type_name(NcType type) {
    switch (type) {
        case NcType::Byte: return "byte";
        case NcType::Char: return "char";
        case NcType::Short: return "short";
        case NcType::Int: return "int";
        case NcType::Float: return "float";
        case NcType::Double: return "double";
    }
    return "?";
}

std::size_t type_size(NcType type) {
    switch (type) {
        case NcType::Byte:
        case NcType::Char: return 1;
        case NcType::Short: return 2;
        case NcType::Int:
        case NcType::Float: return 4;
        case NcType::Double: return 8;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// parser

namespace {

std::uint32_t be32(const unsigned char* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

NcValues decode_values(const unsigned char* p, NcType type, std::uint64_t count) {
    switch (type) {
        case NcType::Char:
            return std::string(reinterpret_cast<const char*>(p), count);
        case NcType::Byte: {
            std::vector<std::int8_t> v(count);
            std::memcpy(v.data(), p, count);
            return v;
        }
        case NcType::Short: {
            std::vector<std::int16_t> v(count);
            for (std::uint64_t i = 0; i < count; ++i)
                v[i] = static_cast<std::int16_t>((std::uint16_t(p[2 * i]) << 8) |
                                                 p[2 * i + 1]);
            return v;
        }
        case NcType::Int: {
            std::vector<std::int32_t> v(count);
            for (std::uint64_t i = 0; i < count; ++i)
                v[i] = static_cast<std::int32_t>(be32(p + 4 * i));
            return v;
        }
        case NcType::Float: {
            std::vector<float> v(count);
            for (std::uint64_t i = 0; i < count; ++i)
                v[i] = std::bit_cast<float>(be32(p + 4 * i));
            return v;
        }
        case NcType::Double: {
            std::vector<double> v(count);
            for (std::uint64_t i = 0; i < count; ++i) {
                std::uint64_t bits =
                    (std::uint64_t(be32(p + 8 * i)) << 32) | be32(p + 8 * i + 4);
                v[i] = std::bit_cast<double>(bits);
            }
            return v;
        }
    }
    return {};
}

class Reader {
public:
    explicit Reader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

    std::uint64_t offset() const noexcept { return pos_; }
    std::size_t size() const noexcept { return bytes_.size(); }

    const unsigned char* take(std::size_t count) {
        if (pos_ + count > bytes_.size())
            throw TruncatedHeader(pos_);
        const unsigned char* p = bytes_.data() + pos_;
        pos_ += count;
        return p;
    }

    std::uint32_t read_u32() {
        const unsigned char* p = take(4);
        return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
               (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
    }

    std::uint64_t read_u64() {
        std::uint64_t hi = read_u32();
        return (hi << 32) | read_u32();
    }

    std::string read_name() {
        std::uint64_t at = pos_;
        std::uint32_t len = read_u32();
        if (len == 0)
            throw MalformedHeader("empty name", at);
        const unsigned char* p = take(padded4(len));
        for (std::size_t i = len; i < padded4(len); ++i)
            if (p[i] != 0)
                throw MalformedPadding(at + 4 + i);
        return std::string(reinterpret_cast<const char*>(p), len);
    }

    NcType read_type() {
        std::uint64_t at = pos_;
        std::uint32_t code = read_u32();
        if (code < 1 || code > 6)
            throw MalformedHeader("unknown nc_type " + std::to_string(code), at);
        return static_cast<NcType>(code);
    }

    // tag (0 for ABSENT) plus element count
    std::uint32_t read_list_header(std::uint32_t expected_tag) {
        std::uint64_t at = pos_;
        std::uint32_t tag = read_u32();
        std::uint32_t count = read_u32();
        if (tag == 0) {
            if (count != 0)
                throw MalformedHeader("ABSENT list with nonzero count", at);
            return 0;
        }
        if (tag != expected_tag)
            throw MalformedHeader("unexpected list tag " + std::to_string(tag), at);
        return count;
    }

    NcValues read_values(NcType type, std::uint32_t count) {
        std::uint64_t at = pos_;
        const std::size_t raw = count * type_size(type);
        const unsigned char* p = take(padded4(raw));
        for (std::size_t i = raw; i < padded4(raw); ++i)
            if (p[i] != 0)
                throw MalformedPadding(at + i);
        return decode_values(p, type, count);
    }

private:
    std::span<const unsigned char> bytes_;
    std::uint64_t pos_ = 0;
};

std::vector<NcAttr> parse_att_list(Reader& r) {
    std::uint32_t count = r.read_list_header(kTagAttribute);
    std::vector<NcAttr> atts;
    atts.reserve(count);
    std::set<std::string> seen;
    for (std::uint32_t i = 0; i < count; ++i) {
        std::uint64_t at = r.offset();
        NcAttr attr;
        attr.name = r.read_name();
        if (!seen.insert(attr.name).second)
            throw MalformedHeader("duplicate attribute '" + attr.name + "'", at);
        attr.type = r.read_type();
        std::uint32_t nelems = r.read_u32();
        attr.values = r.read_values(attr.type, nelems);
        atts.push_back(std::move(attr));
    }
    return atts;
}

constexpr unsigned char kHdf5Magic[8] = {0x89, 'H', 'D', 'F', '\r', '\n', 0x1a, '\n'};

}  // namespace

NcFile parse_netcdf(std::span<const unsigned char> bytes) {
    if (bytes.size() >= sizeof kHdf5Magic &&
        std::memcmp(bytes.data(), kHdf5Magic, sizeof kHdf5Magic) == 0)
        throw UnsupportedFormat("HDF5");

    Reader r(bytes);
    const unsigned char* magic = r.take(4);
    if (magic[0] != 'C' || magic[1] != 'D' || magic[2] != 'F')
        throw BadMagic(0);
    if (magic[3] != 1 && magic[3] != 2)
        throw UnsupportedVersion(magic[3], 3);

    NcFile file;
    file.version = magic[3] == 1 ? CdfVersion::Cdf1 : CdfVersion::Cdf2;
    file.numrecs = r.read_u32();

    // dimensions
    std::uint32_t ndims = r.read_list_header(kTagDimension);
    std::set<std::string> dim_names;
    bool have_record = false;
    for (std::uint32_t i = 0; i < ndims; ++i) {
        std::uint64_t at = r.offset();
        NcDim dim;
        dim.name = r.read_name();
        dim.length = r.read_u32();
        if (!dim_names.insert(dim.name).second)
            throw MalformedHeader("duplicate dimension '" + dim.name + "'", at);
        if (dim.is_record()) {
            if (have_record)
                throw MalformedHeader("more than one record dimension", at);
            have_record = true;
        }
        file.dims.push_back(std::move(dim));
    }

    file.gatts = parse_att_list(r);

    std::uint32_t nvars = r.read_list_header(kTagVariable);
    std::set<std::string> var_names;
    for (std::uint32_t i = 0; i < nvars; ++i) {
        std::uint64_t at = r.offset();
        NcVar var;
        var.name = r.read_name();
        if (!var_names.insert(var.name).second)
            throw MalformedHeader("duplicate variable '" + var.name + "'", at);
        std::uint32_t rank = r.read_u32();
        for (std::uint32_t d = 0; d < rank; ++d) {
            std::uint64_t dim_at = r.offset();
            std::uint32_t dim_id = r.read_u32();
            if (dim_id >= file.dims.size())
                throw MalformedHeader("dimension id " + std::to_string(dim_id) +
                                          " out of range",
                                      dim_at);
            if (file.dims[dim_id].is_record() && d != 0)
                throw MalformedHeader("record dimension not first", dim_at);
            var.dim_refs.push_back(dim_id);
        }
        var.atts = parse_att_list(r);
        var.type = r.read_type();
        var.vsize = r.read_u32();
        var.begin = file.version == CdfVersion::Cdf1 ? r.read_u32() : r.read_u64();
        file.vars.push_back(std::move(var));
    }
    return file;
}

NcValues read_var_data(std::span<const unsigned char> bytes, const NcFile& file,
                       const std::string& var_name) {
    const NcVar* var = nullptr;
    for (const auto& v : file.vars)
        if (v.name == var_name)
            var = &v;
    if (!var)
        throw UnknownVariable(var_name);

    std::uint64_t count = 1;
    for (auto dim_id : var->dim_refs) {
        if (dim_id >= file.dims.size())
            throw MalformedHeader("dimension id out of range", var->begin);
        if (file.dims[dim_id].is_record())
            throw RecordVarUnsupported(var_name);
        const std::uint64_t len = file.dims[dim_id].length;
        if (len != 0 && count > bytes.size() / len)
            throw TruncatedData(var->begin);  // cannot possibly fit
        count *= len;
    }
    if (count > bytes.size() / type_size(var->type))
        throw TruncatedData(var->begin);
    const std::uint64_t raw = count * type_size(var->type);
    if (var->begin > bytes.size() || raw > bytes.size() - var->begin)
        throw TruncatedData(var->begin);
    return decode_values(bytes.data() + var->begin, var->type, count);
}

// ---------------------------------------------------------------------------
// printer

namespace {

std::string render_values(const NcAttr& attr) {
    if (attr.type == NcType::Char)
        return "\"" + std::get<std::string>(attr.values) + "\"";
    std::string out;
    auto join = [&out](const auto& vec, auto&& fmt) {
        for (std::size_t i = 0; i < vec.size(); ++i) {
            if (i)
                out += ", ";
            out += fmt(vec[i]);
        }
    };
    switch (attr.type) {
        case NcType::Byte:
            join(std::get<std::vector<std::int8_t>>(attr.values),
                 [](std::int8_t v) { return std::to_string(int(v)); });
            break;
        case NcType::Short:
            join(std::get<std::vector<std::int16_t>>(attr.values),
                 [](std::int16_t v) { return std::to_string(v); });
            break;
        case NcType::Int:
            join(std::get<std::vector<std::int32_t>>(attr.values),
                 [](std::int32_t v) { return std::to_string(v); });
            break;
        case NcType::Float:
            join(std::get<std::vector<float>>(attr.values),
                 [](float v) { return format_double(double(v)); });
            break;
        case NcType::Double:
            join(std::get<std::vector<double>>(attr.values),
                 [](double v) { return format_double(v); });
            break;
        case NcType::Char: break;
    }
    return out;
}

}  // namespace

std::string render_values_text(const NcValues& values, NcType type) {
    NcAttr shim{"", type, values};
    return render_values(shim);
}

std::string print_tree(const NcFile& file, const std::string& label,
                       const PrintOptions& options) {
    std::string out = label + " (NetCDF classic, version " +
                      std::to_string(static_cast<int>(file.version)) + ")\n";
    out += "dimensions:\n";
    for (const auto& dim : file.dims) {
        if (dim.is_record())
            out += "  " + dim.name + " = UNLIMITED (" + std::to_string(file.numrecs) +
                   " currently)\n";
        else
            out += "  " + dim.name + " = " + std::to_string(dim.length) + "\n";
    }
    out += "global attributes:\n";
    for (const auto& attr : file.gatts)
        out += "  :" + attr.name + " = " + render_values(attr) + "\n";
    out += "variables:\n";
    for (const auto& var : file.vars) {
        out += "  " + std::string(type_name(var.type)) + " " + var.name + "(";
        for (std::size_t i = 0; i < var.dim_refs.size(); ++i) {
            if (i)
                out += ", ";
            out += file.dims[var.dim_refs[i]].name;
        }
        out += ")\n";
        for (const auto& attr : var.atts)
            out += "    " + var.name + ":" + attr.name + " = " + render_values(attr) +
                   "\n";
        if (options.show_data) {
            bool record = std::any_of(
                var.dim_refs.begin(), var.dim_refs.end(),
                [&](std::uint32_t d) { return file.dims[d].is_record(); });
            if (record)
                out += "    data: (record variable, not shown)\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// writer

namespace {

class Writer {
public:
    std::vector<unsigned char>& bytes() { return out_; }

    void u32(std::uint32_t v) {
        out_.push_back(static_cast<unsigned char>(v >> 24));
        out_.push_back(static_cast<unsigned char>(v >> 16));
        out_.push_back(static_cast<unsigned char>(v >> 8));
        out_.push_back(static_cast<unsigned char>(v));
    }

    void name(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        raw(s.data(), s.size());
        pad();
    }

    void raw(const void* data, std::size_t size) {
        const auto* p = static_cast<const unsigned char*>(data);
        out_.insert(out_.end(), p, p + size);
    }

    void pad() {
        while (out_.size() % 4)
            out_.push_back(0);
    }

    std::size_t size() const { return out_.size(); }

private:
    std::vector<unsigned char> out_;
};

struct FlatAttr {
    std::string path;
    NcType type;
    // chars for Char; 4-byte big-endian words for Byte/Int; 8-byte for Double
    std::vector<unsigned char> payload;
    std::uint32_t nelems;
};

struct FlatVar {
    std::string path;
    NcType type;
    std::uint64_t length;  // own dimension length
    std::vector<unsigned char> payload;
};

void encode_scalar(const params::ParamValue& value, const std::string& path,
                   NcType& type, std::vector<unsigned char>& payload) {
    using params::ValueKind;
    auto push32 = [&payload](std::uint32_t v) {
        payload.push_back(static_cast<unsigned char>(v >> 24));
        payload.push_back(static_cast<unsigned char>(v >> 16));
        payload.push_back(static_cast<unsigned char>(v >> 8));
        payload.push_back(static_cast<unsigned char>(v));
    };
    switch (value.kind()) {
        case ValueKind::Bool:
            type = NcType::Byte;
            payload.push_back(value.as_bool() ? 1 : 0);
            break;
        case ValueKind::Int: {
            long long v = value.as_int();
            if (v < std::numeric_limits<std::int32_t>::min() ||
                v > std::numeric_limits<std::int32_t>::max())
                throw UnrepresentableValue(path + ": integer " + std::to_string(v) +
                                           " exceeds 32 bits");
            type = NcType::Int;
            push32(static_cast<std::uint32_t>(static_cast<std::int32_t>(v)));
            break;
        }
        case ValueKind::Real: {
            type = NcType::Double;
            std::uint64_t bits = std::bit_cast<std::uint64_t>(value.as_real());
            push32(static_cast<std::uint32_t>(bits >> 32));
            push32(static_cast<std::uint32_t>(bits));
            break;
        }
        case ValueKind::Text: {
            type = NcType::Char;
            const auto& s = value.as_text();
            payload.insert(payload.end(), s.begin(), s.end());
            break;
        }
        case ValueKind::None:
            throw UnrepresentableValue(path + ": None has no NetCDF encoding");
        case ValueKind::List:
            throw UnrepresentableValue(path + ": nested list");
    }
}

void flatten(const params::ParamNode& node, const std::string& prefix,
             std::vector<FlatAttr>& gatts, std::vector<FlatVar>& vars) {
    using params::ValueKind;
    auto path_of = [&prefix](const std::string& leaf) {
        return prefix.empty() ? leaf : prefix + "." + leaf;
    };

    if (!node.doc().empty()) {
        FlatAttr doc{path_of("_doc_"), NcType::Char, {}, 0};
        doc.payload.assign(node.doc().begin(), node.doc().end());
        doc.nelems = static_cast<std::uint32_t>(doc.payload.size());
        gatts.push_back(std::move(doc));
    }
    for (const auto& attr : node.attribs()) {
        if (!attr.doc.empty()) {
            FlatAttr doc{path_of("_doc_" + attr.name), NcType::Char, {}, 0};
            doc.payload.assign(attr.doc.begin(), attr.doc.end());
            doc.nelems = static_cast<std::uint32_t>(doc.payload.size());
            gatts.push_back(std::move(doc));
        }
        const std::string path = path_of(attr.name);
        if (attr.value.kind() == ValueKind::List) {
            const auto& elems = attr.value.elements();
            if (elems.empty())
                throw UnrepresentableValue(
                    path + ": empty list would need a record dimension");
            if (elems.front().kind() == ValueKind::Text)
                throw UnrepresentableValue(path + ": list of text");
            FlatVar var{path, NcType::Double, elems.size(), {}};
            for (const auto& e : elems) {
                NcType elem_type;
                encode_scalar(e, path, elem_type, var.payload);
                var.type = elem_type;
            }
            vars.push_back(std::move(var));
        } else {
            FlatAttr flat{path, NcType::Char, {}, 1};
            encode_scalar(attr.value, path, flat.type, flat.payload);
            if (flat.type == NcType::Char)
                flat.nelems = static_cast<std::uint32_t>(flat.payload.size());
            gatts.push_back(std::move(flat));
        }
    }
    for (const auto& child : node.children())
        flatten(*child, path_of(child->tag()), gatts, vars);
}

}  // namespace

std::vector<unsigned char> write_netcdf(const params::ParamNode& root) {
    std::vector<FlatAttr> gatts;
    std::vector<FlatVar> vars;
    flatten(root, "", gatts, vars);

    Writer w;
    w.raw("CDF\x01", 4);
    w.u32(0);  // numrecs

    if (vars.empty()) {
        w.u32(0);
        w.u32(0);
    } else {
        w.u32(kTagDimension);
        w.u32(static_cast<std::uint32_t>(vars.size()));
        for (const auto& var : vars) {
            w.name(var.path);
            w.u32(static_cast<std::uint32_t>(var.length));
        }
    }

    if (gatts.empty()) {
        w.u32(0);
        w.u32(0);
    } else {
        w.u32(kTagAttribute);
        w.u32(static_cast<std::uint32_t>(gatts.size()));
        for (const auto& attr : gatts) {
            w.name(attr.path);
            w.u32(static_cast<std::uint32_t>(attr.type));
            w.u32(attr.nelems);
            w.raw(attr.payload.data(), attr.payload.size());
            w.pad();
        }
    }

    if (vars.empty()) {
        w.u32(0);
        w.u32(0);
        return std::move(w.bytes());
    }

    // variable metadata; begins need the header size first, so lay out in
    // two passes with a dry run for the header length
    auto emit_var_list = [&vars](Writer& writer, std::uint64_t data_start) {
        writer.u32(kTagVariable);
        writer.u32(static_cast<std::uint32_t>(vars.size()));
        std::uint64_t begin = data_start;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            const auto& var = vars[i];
            writer.name(var.path);
            writer.u32(1);  // rank 1, own dimension
            writer.u32(static_cast<std::uint32_t>(i));
            writer.u32(0);  // no variable attributes
            writer.u32(0);
            writer.u32(static_cast<std::uint32_t>(var.type));
            std::uint64_t vsize = padded4(var.payload.size());
            writer.u32(static_cast<std::uint32_t>(vsize));
            writer.u32(static_cast<std::uint32_t>(begin));
            begin += vsize;
        }
    };

    Writer dry;
    emit_var_list(dry, 0);
    const std::uint64_t data_start = w.size() + dry.size();

    emit_var_list(w, data_start);
    for (const auto& var : vars) {
        w.raw(var.payload.data(), var.payload.size());
        w.pad();
    }
    return std::move(w.bytes());
}

}  // namespace sciforge::nc
