#include "sciforge/nbstrip.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace sciforge::nb {

NotebookDoc parse_notebook(std::string_view text) {
    NotebookDoc doc = NotebookDoc::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw MalformedNotebook("not valid JSON");
    return doc;
}

std::string serialize_notebook(const NotebookDoc& doc) {
    return doc.dump(1) + "\n";
}

NotebookDoc strip_notebook(NotebookDoc doc) {
    if (!doc.is_object())
        throw MalformedNotebook("top level is not an object");
    auto major_it = doc.find("nbformat");
    if (major_it == doc.end() || !major_it->is_number_integer())
        throw MalformedNotebook("missing nbformat version");
    if (int major = major_it->get<int>(); major != 4)
        throw UnsupportedNbformat(major);
    auto cells_it = doc.find("cells");
    if (cells_it == doc.end() || !cells_it->is_array())
        throw MalformedNotebook("missing cells list");

    for (auto& cell : *cells_it) {
        if (!cell.is_object())
            throw MalformedNotebook("cell is not an object");
        auto type_it = cell.find("cell_type");
        if (type_it == cell.end() || !type_it->is_string())
            throw MalformedNotebook("cell without cell_type");
        if (type_it->get<std::string>() != "code")
            continue;
        if (auto it = cell.find("outputs"); it != cell.end())
            *it = NotebookDoc::array();
        if (auto it = cell.find("execution_count"); it != cell.end())
            *it = nullptr;
        if (auto it = cell.find("metadata"); it != cell.end() && it->is_object())
            it->erase("execution");
    }
    return doc;
}

bool should_process_path(std::string_view path, bool include_nbconvert) {
    if (!path.ends_with(".ipynb"))
        return false;
    return include_nbconvert || !path.ends_with(".nbconvert.ipynb");
}

StripFileResult strip_file(const std::string& path, bool include_nbconvert,
                           bool check_only) {
    StripFileResult result;
    if (!should_process_path(path, include_nbconvert))
        return result;
    result.processed = true;

    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw MalformedNotebook("cannot read '" + path + "'");
    std::string original(std::istreambuf_iterator<char>(in), {});
    in.close();

    std::string stripped = serialize_notebook(strip_notebook(parse_notebook(original)));
    result.changed = stripped != original;
    if (!result.changed || check_only)
        return result;

    // temp file + rename keeps an interrupt from corrupting the notebook
    std::filesystem::path target(path);
    std::filesystem::path temp = target;
    temp += ".sciforge.tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw MalformedNotebook("cannot write '" + temp.string() + "'");
        out << stripped;
    }
    std::filesystem::rename(temp, target);
    return result;
}

}  // namespace sciforge::nb
