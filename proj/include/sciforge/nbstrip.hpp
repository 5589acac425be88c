#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "sciforge/errors.hpp"

namespace sciforge::nb {

class MalformedNotebook : public Error {
public:
    explicit MalformedNotebook(const std::string& detail)
        : Error("malformed notebook: " + detail) {}
};

class UnsupportedNbformat : public Error {
public:
    explicit UnsupportedNbformat(int major)
        : Error("unsupported nbformat major version " + std::to_string(major)) {}
};

/// Notebook document; key order is preserved from the input so a strip +
/// serialize cycle never reorders anything.
using NotebookDoc = nlohmann::ordered_json;

NotebookDoc parse_notebook(std::string_view text);

/// Canonical bytes: 1-space indentation, preserved key order, one trailing
/// newline. Repeated runs never dirty version control.
std::string serialize_notebook(const NotebookDoc& doc);

/// For every code cell: outputs := [], execution_count := null, and the
/// cell-metadata key "execution" is removed. Everything else untouched.
NotebookDoc strip_notebook(NotebookDoc doc);

/// True iff `path` ends with ".ipynb" and, unless `include_nbconvert`,
/// does not end with ".nbconvert.ipynb".
bool should_process_path(std::string_view path, bool include_nbconvert);

struct StripFileResult {
    bool processed = false;  // false = excluded by name filter
    bool changed = false;    // stripped bytes differ from the file
};

/// Strip one notebook file. When check_only, nothing is written; otherwise
/// changed files are replaced via a temp file + atomic rename.
StripFileResult strip_file(const std::string& path, bool include_nbconvert,
                           bool check_only);

}  // namespace sciforge::nb
