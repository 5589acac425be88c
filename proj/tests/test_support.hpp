#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sciforge/param_tree.hpp"

namespace testsup {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "missing fixture: " << path);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline std::vector<unsigned char> read_bytes(const std::string& path) {
    std::string text = read_file(path);
    return std::vector<unsigned char>(text.begin(), text.end());
}

inline std::string data_path(const std::string& rel) {
    return std::string(SCIFORGE_TEST_DATA_DIR) + "/" + rel;
}

// ---------------------------------------------------------------------------
// deterministic random parameter values and trees

class ParamGen {
public:
    explicit ParamGen(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64& rng() { return rng_; }

    int pick(int lo, int hi) {  // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }

    /// identifier that is safe as tag or attribute name
    std::string identifier() {
        static const std::array<const char*, 12> stems = {
            "nx",    "ny",     "period", "solver", "output", "scheme",
            "alpha", "window", "mode",   "depth",  "gain",   "probe"};
        std::string name = stems[static_cast<std::size_t>(pick(0, 11))];
        if (pick(0, 1))
            name += "_" + std::to_string(pick(0, 97));
        return name;
    }

    /// word-based text whose inference is Text (canonical under the
    /// render/infer fixed point), optionally with characters that need
    /// XML escaping
    std::string safe_text(bool allow_spaces = true) {
        static const std::array<const char*, 10> words = {
            "fourier", "stratified", "vortex", "budget", "forcing",
            "coriolis", "spectra",   "nested", "shear",  "omega"};
        int count = allow_spaces ? pick(1, 3) : 1;
        std::string text;
        for (int i = 0; i < count; ++i) {
            if (i)
                text += ' ';
            text += words[static_cast<std::size_t>(pick(0, 9))];
        }
        switch (pick(0, 7)) {
            case 0: text += " & co"; break;
            case 1: text += " <latest>"; break;
            case 2: text += " \"quoted\""; break;
            default: break;
        }
        if (!allow_spaces) {
            for (auto& c : text)
                if (c == ' ')
                    c = '_';
        }
        return text;
    }

    double real_value() {
        switch (pick(0, 3)) {
            case 0: return 0.5;
            case 1: return static_cast<double>(pick(-1000, 1000)) / 8.0;
            case 2: return std::uniform_real_distribution<double>(-1e6, 1e6)(rng_);
            default:
                return std::ldexp(
                    std::uniform_real_distribution<double>(-1.0, 1.0)(rng_),
                    pick(-40, 40));
        }
    }

    long long int_value(bool int32_only = false) {
        if (int32_only)
            return pick(-2000000, 2000000);
        return std::uniform_int_distribution<long long>(-(1LL << 60),
                                                        1LL << 60)(rng_);
    }

    sciforge::params::ParamValue scalar_value(bool netcdf_safe = false) {
        using sciforge::params::ParamValue;
        switch (pick(0, netcdf_safe ? 3 : 4)) {
            case 0: return ParamValue::boolean(pick(0, 1) != 0);
            case 1: return ParamValue::integer(int_value(netcdf_safe));
            case 2: return ParamValue::real(real_value());
            case 3: return ParamValue::text(safe_text());
            default: return ParamValue::none();
        }
    }

    sciforge::params::ParamValue list_value(bool netcdf_safe = false) {
        using sciforge::params::ParamValue;
        int kind = pick(0, netcdf_safe ? 2 : 3);
        int len = pick(netcdf_safe ? 1 : 0, 5);
        std::vector<ParamValue> elems;
        for (int i = 0; i < len; ++i) {
            switch (kind) {
                case 0: elems.push_back(ParamValue::boolean(pick(0, 1) != 0)); break;
                case 1: elems.push_back(ParamValue::integer(int_value(netcdf_safe))); break;
                case 2: elems.push_back(ParamValue::real(real_value())); break;
                default: elems.push_back(ParamValue::text(safe_text(false))); break;
            }
        }
        return ParamValue::list(std::move(elems));
    }

    sciforge::params::ParamValue any_value(bool netcdf_safe = false) {
        if (pick(0, 4) == 0)
            return list_value(netcdf_safe);
        return scalar_value(netcdf_safe);
    }

    /// tree with depth <= 5 and <= 8 attributes per node
    sciforge::params::ParamNode tree(bool netcdf_safe = false, int max_depth = 5) {
        sciforge::params::ParamNode root("params");
        fill_node(root, max_depth - 1, netcdf_safe);
        return root;
    }

private:
    void fill_node(sciforge::params::ParamNode& node, int depth_left,
                   bool netcdf_safe) {
        if (pick(0, 2) == 0)
            node.set_doc(safe_text());
        int attribs = pick(0, 8);
        for (int i = 0; i < attribs; ++i) {
            std::string name = identifier();
            if (name == node.tag() || node.has_attrib(name) ||
                node.find_child(name))
                continue;
            node.declare_attrib(name, any_value(netcdf_safe),
                                pick(0, 2) == 0 ? safe_text() : "");
        }
        if (depth_left <= 0)
            return;
        int children = pick(0, depth_left >= 4 ? 3 : 2);
        for (int i = 0; i < children; ++i) {
            std::string tag = identifier();
            if (tag == node.tag() || node.has_attrib(tag) || node.find_child(tag))
                continue;
            fill_node(node.create_child(tag), depth_left - 1, netcdf_safe);
        }
    }

    std::mt19937_64 rng_;
};

}  // namespace testsup
