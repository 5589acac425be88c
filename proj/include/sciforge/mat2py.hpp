#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sciforge/errors.hpp"

namespace sciforge::mat2py {

class UnterminatedString : public Error {
public:
    explicit UnterminatedString(int line)
        : Error("unterminated string on line " + std::to_string(line)),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

enum class TokenKind {
    Ident,
    Number,
    MString,
    Comment,
    Continuation,
    Op,
    Punct,
    Newline,
    Whitespace,
};

struct Token {
    TokenKind kind;
    std::string text;  // verbatim slice; concatenation reproduces the input
    int line;
    int col;
};

/// Matlab lexical rules: '%' opens a comment unless inside a string; a
/// quote is a string opener only when not immediately preceded by an
/// identifier, number, ')', ']', '}' or another quote (transpose
/// otherwise); '...' swallows the rest of the line as a continuation.
/// Lossless: joining token texts reproduces the input byte for byte.
std::vector<Token> tokenize(std::string_view source);

struct RuleApplication {
    std::string rule;  // "R1".."R9" or "note:index"
    int line;
    std::string before;
    std::string after;
};

struct ConversionReport {
    std::string output;
    std::vector<RuleApplication> applications;
};

/// The rewrite rules, applied on the token stream:
///   R1 comments '%' -> '#' ('%%' cell markers -> '# %%')
///   R2 '...' continuations -> ' \'
///   R3 block headers get ':'; for-ranges -> range(); function -> def;
///      standalone 'end' lines deleted
///   R4 operators: ~= && || .* ./ .^ ^ -> != and or * / ** **
///   R5 transpose ' -> .T
///   R6 trailing ';' removed (two spaces before an inline comment)
///   R7 call sites: disp->print, length->len, zeros/ones/linspace->np.*
///   R8 strings pass through unchanged
///   R9 everything else verbatim
ConversionReport convert_report(std::string_view source);
std::string convert(std::string_view source);

std::string render_report(const ConversionReport& report);

}  // namespace sciforge::mat2py
