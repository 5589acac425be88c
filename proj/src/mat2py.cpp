#include "sciforge/mat2py.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace sciforge::mat2py {

// ---------------------------------------------------------------------------
// tokenizer

namespace {

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool digit(char c) {
    return c >= '0' && c <= '9';
}

// transpose when the quote hugs a value-like token
bool quote_is_transpose(const std::vector<Token>& tokens) {
    if (tokens.empty())
        return false;
    const Token& prev = tokens.back();
    switch (prev.kind) {
        case TokenKind::Ident:
        case TokenKind::Number:
        case TokenKind::MString: return true;
        case TokenKind::Punct:
            return prev.text == ")" || prev.text == "]" || prev.text == "}";
        case TokenKind::Op: return prev.text == "'" || prev.text == ".'";
        default: return false;
    }
}

const std::set<std::string>& two_char_ops() {
    static const std::set<std::string> ops = {"~=", "==", "<=", ">=", "&&",
                                              "||", ".*", "./", ".\\", ".^",
                                              ".'"};
    return ops;
}

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> tokens;
    int line = 1;
    int col = 1;
    std::size_t i = 0;

    auto emit = [&](TokenKind kind, std::size_t begin, std::size_t end) {
        tokens.push_back({kind, std::string(src.substr(begin, end - begin)), line,
                          col});
        col += static_cast<int>(end - begin);
        i = end;
    };

    while (i < src.size()) {
        const char c = src[i];

        if (c == '\n' || (c == '\r' && i + 1 < src.size() && src[i + 1] == '\n')) {
            std::size_t end = i + (c == '\r' ? 2 : 1);
            tokens.push_back({TokenKind::Newline, std::string(src.substr(i, end - i)),
                              line, col});
            i = end;
            ++line;
            col = 1;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            std::size_t end = i;
            while (end < src.size() &&
                   (src[end] == ' ' || src[end] == '\t' ||
                    (src[end] == '\r' &&
                     !(end + 1 < src.size() && src[end + 1] == '\n'))))
                ++end;
            emit(TokenKind::Whitespace, i, end);
            continue;
        }
        if (c == '%') {
            std::size_t end = i;
            while (end < src.size() && src[end] != '\n' &&
                   !(src[end] == '\r' && end + 1 < src.size() && src[end + 1] == '\n'))
                ++end;
            emit(TokenKind::Comment, i, end);
            continue;
        }
        if (c == '.' && src.substr(i, 3) == "...") {
            // the continuation owns the rest of the line
            std::size_t end = i + 3;
            while (end < src.size() && src[end] != '\n' &&
                   !(src[end] == '\r' && end + 1 < src.size() && src[end + 1] == '\n'))
                ++end;
            emit(TokenKind::Continuation, i, end);
            continue;
        }
        if (c == '\'') {
            if (quote_is_transpose(tokens)) {
                emit(TokenKind::Op, i, i + 1);
                continue;
            }
            std::size_t end = i + 1;
            while (true) {
                if (end >= src.size() || src[end] == '\n' || src[end] == '\r')
                    throw UnterminatedString(line);
                if (src[end] == '\'') {
                    if (end + 1 < src.size() && src[end + 1] == '\'') {
                        end += 2;  // '' escapes a quote
                        continue;
                    }
                    ++end;
                    break;
                }
                ++end;
            }
            emit(TokenKind::MString, i, end);
            continue;
        }
        if (digit(c) || (c == '.' && i + 1 < src.size() && digit(src[i + 1]))) {
            std::size_t end = i;
            while (end < src.size() && digit(src[end]))
                ++end;
            if (end < src.size() && src[end] == '.') {
                // not the start of an elementwise operator or .'
                char after = end + 1 < src.size() ? src[end + 1] : '\0';
                if (after != '*' && after != '/' && after != '\\' && after != '^' &&
                    after != '\'')
                    ++end;
                while (end < src.size() && digit(src[end]))
                    ++end;
            }
            if (end < src.size() && (src[end] == 'e' || src[end] == 'E')) {
                std::size_t exp = end + 1;
                if (exp < src.size() && (src[exp] == '+' || src[exp] == '-'))
                    ++exp;
                if (exp < src.size() && digit(src[exp])) {
                    while (exp < src.size() && digit(src[exp]))
                        ++exp;
                    end = exp;
                }
            }
            if (end < src.size() && (src[end] == 'i' || src[end] == 'j') &&
                (end + 1 >= src.size() || !ident_char(src[end + 1])))
                ++end;
            emit(TokenKind::Number, i, end);
            continue;
        }
        if (ident_start(c)) {
            std::size_t end = i;
            while (end < src.size() && ident_char(src[end]))
                ++end;
            emit(TokenKind::Ident, i, end);
            continue;
        }
        if (i + 1 < src.size() &&
            two_char_ops().count(std::string(src.substr(i, 2)))) {
            emit(TokenKind::Op, i, i + 2);
            continue;
        }
        switch (c) {
            case '+': case '-': case '*': case '/': case '\\': case '^':
            case '<': case '>': case '=': case '~': case '&': case '|':
                emit(TokenKind::Op, i, i + 1);
                continue;
            default:
                emit(TokenKind::Punct, i, i + 1);
                continue;
        }
    }
    return tokens;
}

// ---------------------------------------------------------------------------
// conversion

namespace {

using TokenList = std::vector<Token>;

const std::map<std::string, std::string>& call_renames() {
    static const std::map<std::string, std::string> names = {
        {"disp", "print"},       {"length", "len"},
        {"zeros", "np.zeros"},   {"ones", "np.ones"},
        {"linspace", "np.linspace"},
    };
    return names;
}

const std::map<std::string, std::string>& op_renames() {
    static const std::map<std::string, std::string> ops = {
        {"~=", "!="}, {"&&", "and"}, {"||", "or"},
        {".*", "*"},  {"./", "/"},   {".^", "**"}, {"^", "**"},
    };
    return ops;
}

Token synth(std::string text) {
    return {TokenKind::Ident, std::move(text), 0, 0};
}

bool is_code(const Token& t) {
    return t.kind != TokenKind::Whitespace && t.kind != TokenKind::Comment &&
           t.kind != TokenKind::Newline;
}

std::string join_tokens(const TokenList& tokens, std::size_t begin,
                        std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end && i < tokens.size(); ++i)
        out += tokens[i].text;
    return out;
}

// strip whitespace tokens from both ends of [begin, end)
void trim_range(const TokenList& tokens, std::size_t& begin, std::size_t& end) {
    while (begin < end && tokens[begin].kind == TokenKind::Whitespace)
        ++begin;
    while (end > begin && tokens[end - 1].kind == TokenKind::Whitespace)
        --end;
}

class Converter {
public:
    explicit Converter(std::string_view source) : tokens_(tokenize(source)) {}

    ConversionReport run() {
        std::size_t i = 0;
        while (i < tokens_.size()) {
            std::size_t end = i;
            while (end < tokens_.size() && tokens_[end].kind != TokenKind::Newline)
                ++end;
            const Token* newline = end < tokens_.size() ? &tokens_[end] : nullptr;
            process_line(TokenList(tokens_.begin() + static_cast<long>(i),
                                   tokens_.begin() + static_cast<long>(end)),
                         newline);
            i = end + (newline ? 1 : 0);
        }
        return {std::move(output_), std::move(applications_)};
    }

private:
    void note(std::string rule, int line, std::string before, std::string after) {
        applications_.push_back(
            {std::move(rule), line, std::move(before), std::move(after)});
    }

    int line_number(const TokenList& line) const {
        return line.empty() ? 1 : line.front().line;
    }

    // ---- structural pass (R3) -------------------------------------------

    void process_line(TokenList line, const Token* newline) {
        remember_array_names(line);
        token_pass(line);

        std::size_t first = 0;
        while (first < line.size() && !is_code(line[first]))
            ++first;
        bool needs_colon = false;

        if (first < line.size() && line[first].kind == TokenKind::Ident) {
            const std::string& word = line[first].text;
            if (word == "if" || word == "while") {
                needs_colon = true;
            } else if (word == "elseif") {
                std::string before = line[first].text;
                line[first].text = "elif";
                needs_colon = true;
                note("R3", line_number(line), before, "elif");
            } else if (word == "else") {
                needs_colon = true;
            } else if (word == "for") {
                needs_colon = !rewrite_for(line, first);
            } else if (word == "function") {
                if (rewrite_function(line, first, newline))
                    return;
            } else if (word == "end") {
                if (rewrite_end(line, first, newline))
                    return;
            }
        }

        strip_trailing_semicolon(line);
        if (needs_colon)
            append_colon(line);
        normalize_comment_gap(line);
        emit_line(line, newline);
    }

    // `for v = a:b` and friends; true when fully rewritten (colon included)
    bool rewrite_for(TokenList& line, std::size_t first) {
        std::size_t v = first + 1;
        while (v < line.size() && line[v].kind == TokenKind::Whitespace)
            ++v;
        if (v >= line.size() || line[v].kind != TokenKind::Ident)
            return false;
        std::size_t eq = v + 1;
        while (eq < line.size() && line[eq].kind == TokenKind::Whitespace)
            ++eq;
        if (eq >= line.size() || line[eq].kind != TokenKind::Op ||
            line[eq].text != "=")
            return false;

        // range expression: everything up to the trailing comment, minus a
        // trailing ';'
        std::size_t expr_end = line.size();
        if (expr_end > 0 && line[expr_end - 1].kind == TokenKind::Comment)
            --expr_end;
        trim_range(line, eq, expr_end);
        std::size_t expr_begin = eq + 1;
        trim_range(line, expr_begin, expr_end);
        if (expr_end > expr_begin && line[expr_end - 1].kind == TokenKind::Punct &&
            line[expr_end - 1].text == ";")
            --expr_end;
        trim_range(line, expr_begin, expr_end);
        if (expr_begin >= expr_end)
            return false;
        if (std::any_of(line.begin() + static_cast<long>(expr_begin),
                        line.begin() + static_cast<long>(expr_end),
                        [](const Token& t) {
                            return t.kind == TokenKind::Continuation;
                        }))
            return false;  // header spans lines; leave the general form

        // split on top-level colons
        std::vector<std::size_t> colons;
        int depth = 0;
        for (std::size_t k = expr_begin; k < expr_end; ++k) {
            const Token& t = line[k];
            if (t.kind != TokenKind::Punct)
                continue;
            if (t.text == "(" || t.text == "[" || t.text == "{")
                ++depth;
            else if (t.text == ")" || t.text == "]" || t.text == "}")
                --depth;
            else if (t.text == ":" && depth == 0)
                colons.push_back(k);
        }

        const std::string before = join_tokens(line, first, line.size());
        TokenList rebuilt(line.begin(), line.begin() + static_cast<long>(v + 1));
        rebuilt.push_back(synth(" in "));

        auto slice = [&](std::size_t b, std::size_t e) {
            trim_range(line, b, e);
            return join_tokens(line, b, e);
        };

        if (colons.empty()) {
            rebuilt.push_back(synth(slice(expr_begin, expr_end)));
        } else if (colons.size() == 1) {
            rebuilt.push_back(synth("range(" + slice(expr_begin, colons[0]) + ", " +
                                    slice(colons[0] + 1, expr_end) + " + 1)"));
        } else if (colons.size() == 2) {
            // matlab start:step:stop
            rebuilt.push_back(synth("range(" + slice(expr_begin, colons[0]) + ", " +
                                    slice(colons[1] + 1, expr_end) + " + 1, " +
                                    slice(colons[0] + 1, colons[1]) + ")"));
        } else {
            return false;
        }
        rebuilt.push_back(synth(":"));
        for (std::size_t k = expr_end; k < line.size(); ++k)
            if (line[k].kind == TokenKind::Comment)
                rebuilt.push_back(line[k]);
        note("R3", line_number(line), before,
             join_tokens(rebuilt, first, rebuilt.size()));
        line = std::move(rebuilt);
        return true;
    }

    // true when the header was recognized and emitted
    bool rewrite_function(TokenList& line, std::size_t first, const Token* newline) {
        std::size_t k = first + 1;
        auto skip_ws = [&] {
            while (k < line.size() && line[k].kind == TokenKind::Whitespace)
                ++k;
        };
        skip_ws();

        std::vector<std::string> outputs;
        std::size_t probe = k;
        if (probe < line.size() && line[probe].kind == TokenKind::Punct &&
            line[probe].text == "[") {
            ++probe;
            while (probe < line.size() &&
                   !(line[probe].kind == TokenKind::Punct &&
                     line[probe].text == "]")) {
                if (line[probe].kind == TokenKind::Ident)
                    outputs.push_back(line[probe].text);
                ++probe;
            }
            ++probe;
            while (probe < line.size() && line[probe].kind == TokenKind::Whitespace)
                ++probe;
            if (probe < line.size() && line[probe].kind == TokenKind::Op &&
                line[probe].text == "=") {
                k = probe + 1;
            } else {
                outputs.clear();
            }
        } else if (probe < line.size() && line[probe].kind == TokenKind::Ident) {
            std::size_t after = probe + 1;
            while (after < line.size() && line[after].kind == TokenKind::Whitespace)
                ++after;
            if (after < line.size() && line[after].kind == TokenKind::Op &&
                line[after].text == "=") {
                outputs.push_back(line[probe].text);
                k = after + 1;
            }
        }
        skip_ws();

        std::string name;
        if (k < line.size() && line[k].kind == TokenKind::Ident)
            name = line[k++].text;
        std::string args;
        skip_ws();
        if (k < line.size() && line[k].kind == TokenKind::Punct &&
            line[k].text == "(") {
            std::size_t open = ++k;
            int depth = 1;
            while (k < line.size() && depth > 0) {
                if (line[k].kind == TokenKind::Punct && line[k].text == "(")
                    ++depth;
                else if (line[k].kind == TokenKind::Punct && line[k].text == ")")
                    --depth;
                if (depth > 0)
                    ++k;
            }
            std::size_t close = k;
            trim_range(line, open, close);
            args = join_tokens(line, open, close);
        }

        if (name.empty())
            return false;  // not a recognizable header; leave the line alone

        const std::string indent =
            first > 0 && line[0].kind == TokenKind::Whitespace ? line[0].text : "";
        const std::string before = join_tokens(line, first, line.size());
        std::string def_line = "def " + name + "(" + args + "):";
        note("R3", line_number(line), before, def_line);

        output_ += indent + def_line;
        for (const auto& t : line)
            if (t.kind == TokenKind::Comment)
                output_ += "  " + t.text;
        const std::string eol = newline ? newline->text : "\n";
        output_ += eol;
        if (!outputs.empty()) {
            std::string returns = "# mat2py: returns ";
            for (std::size_t o = 0; o < outputs.size(); ++o) {
                if (o)
                    returns += ", ";
                returns += outputs[o];
            }
            output_ += indent + returns + eol;
        }
        return true;
    }

    // true when the whole line was handled
    bool rewrite_end(TokenList& line, std::size_t first, const Token* newline) {
        std::size_t k = first + 1;
        while (k < line.size() && line[k].kind == TokenKind::Whitespace)
            ++k;
        if (k < line.size() && line[k].kind == TokenKind::Punct &&
            line[k].text == ";")
            ++k;
        while (k < line.size() && line[k].kind == TokenKind::Whitespace)
            ++k;
        const Token* comment = nullptr;
        if (k < line.size() && line[k].kind == TokenKind::Comment) {
            comment = &line[k];
            ++k;
        }
        if (k != line.size())
            return false;  // `end` is part of an expression; leave it alone

        note("R3", line_number(line), join_tokens(line, first, line.size()), "");
        if (comment) {
            TokenList kept;
            if (first > 0 && line[0].kind == TokenKind::Whitespace)
                kept.push_back(line[0]);
            kept.push_back(*comment);  // already converted by the token pass
            emit_line(kept, newline);
        }
        // no comment: the line disappears entirely, newline included
        return true;
    }

    // ---- token-level pass (R1, R2, R4, R5, R7, R8, R9) -------------------

    void token_pass(TokenList& line) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            Token& t = line[i];
            switch (t.kind) {
                case TokenKind::Comment: {
                    std::string before = t.text;
                    if (t.text.starts_with("%%"))
                        t.text = "# %%" + t.text.substr(2);
                    else
                        t.text = "#" + t.text.substr(1);
                    note("R1", t.line, before, t.text);
                    break;
                }
                case TokenKind::Continuation: {
                    note("R2", t.line, t.text, " \\");
                    t.text = " \\";
                    break;
                }
                case TokenKind::Op: {
                    if (t.text == "'" || t.text == ".'") {
                        note("R5", t.line, t.text, ".T");
                        t.text = ".T";
                        break;
                    }
                    auto it = op_renames().find(t.text);
                    if (it != op_renames().end()) {
                        note("R4", t.line, t.text, it->second);
                        t.text = it->second;
                    }
                    break;
                }
                case TokenKind::Ident: {
                    auto it = call_renames().find(t.text);
                    if (it == call_renames().end())
                        break;
                    std::size_t next = i + 1;
                    while (next < line.size() &&
                           line[next].kind == TokenKind::Whitespace)
                        ++next;
                    if (next < line.size() && line[next].kind == TokenKind::Punct &&
                        line[next].text == "(") {
                        note("R7", t.line, t.text, it->second);
                        t.text = it->second;
                    }
                    break;
                }
                default: break;  // R8 strings and R9 everything else: verbatim
            }
            if (t.kind == TokenKind::Ident && known_arrays_.count(t.text)) {
                std::size_t next = i + 1;
                if (next < line.size() && line[next].kind == TokenKind::Punct &&
                    line[next].text == "(")
                    note("note:index", t.line, t.text + "(",
                         "1-based indexing left unchanged");
            }
        }
    }

    // ---- R6 and layout ----------------------------------------------------

    void strip_trailing_semicolon(TokenList& line) {
        std::size_t end = line.size();
        if (end > 0 && line[end - 1].kind == TokenKind::Comment)
            --end;
        while (end > 0 && line[end - 1].kind == TokenKind::Whitespace)
            --end;
        if (end == 0 || line[end - 1].kind != TokenKind::Punct ||
            line[end - 1].text != ";")
            return;
        std::size_t semi = end - 1;
        note("R6", line[semi].line, ";", "");
        std::size_t erase_begin = semi;
        if (erase_begin > 0 && line[erase_begin - 1].kind == TokenKind::Whitespace)
            --erase_begin;
        line.erase(line.begin() + static_cast<long>(erase_begin),
                   line.begin() + static_cast<long>(semi + 1));
    }

    void append_colon(TokenList& line) {
        std::size_t end = line.size();
        if (end > 0 && line[end - 1].kind == TokenKind::Comment)
            --end;
        while (end > 0 && line[end - 1].kind == TokenKind::Whitespace)
            --end;
        if (end == 0)
            return;
        line.insert(line.begin() + static_cast<long>(end), synth(":"));
    }

    /// exactly two spaces between code and an inline comment
    void normalize_comment_gap(TokenList& line) {
        if (line.empty() || line.back().kind != TokenKind::Comment ||
            line.size() < 2)
            return;
        std::size_t comment = line.size() - 1;
        std::size_t last_code = comment;
        while (last_code > 0 && line[last_code - 1].kind == TokenKind::Whitespace)
            --last_code;
        if (last_code == 0)
            return;  // comment is the whole line; indentation stays verbatim
        line.erase(line.begin() + static_cast<long>(last_code),
                   line.begin() + static_cast<long>(comment));
        Token gap{TokenKind::Whitespace, "  ", line[last_code - 1].line, 0};
        line.insert(line.begin() + static_cast<long>(last_code), gap);
    }

    void remember_array_names(const TokenList& line) {
        for (std::size_t i = 0; i + 2 < line.size(); ++i) {
            if (line[i].kind != TokenKind::Ident)
                continue;
            std::size_t eq = i + 1;
            while (eq < line.size() && line[eq].kind == TokenKind::Whitespace)
                ++eq;
            if (eq >= line.size() || line[eq].kind != TokenKind::Op ||
                line[eq].text != "=")
                continue;
            std::size_t fn = eq + 1;
            while (fn < line.size() && line[fn].kind == TokenKind::Whitespace)
                ++fn;
            if (fn < line.size() && line[fn].kind == TokenKind::Ident &&
                (line[fn].text == "zeros" || line[fn].text == "ones" ||
                 line[fn].text == "linspace"))
                known_arrays_.insert(line[i].text);
        }
    }

    void emit_line(const TokenList& line, const Token* newline) {
        for (const auto& t : line)
            output_ += t.text;
        if (newline)
            output_ += newline->text;
    }

    std::vector<Token> tokens_;
    std::string output_;
    std::vector<RuleApplication> applications_;
    std::set<std::string> known_arrays_;
};

}  // namespace

ConversionReport convert_report(std::string_view source) {
    return Converter(source).run();
}

std::string convert(std::string_view source) {
    return convert_report(source).output;
}

std::string render_report(const ConversionReport& report) {
    std::string out;
    for (const auto& app : report.applications) {
        out += app.rule + "  line " + std::to_string(app.line) + "  `" +
               app.before + "` => `" + app.after + "`\n";
    }
    return out;
}

}  // namespace sciforge::mat2py
