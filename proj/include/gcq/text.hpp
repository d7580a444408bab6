// text.hpp -- UTF-8 handling, escapes, identifiers, line scanning
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gcq/errors.hpp"

namespace gcq {

using Char = char32_t;
using U32String = std::u32string;

namespace text {

inline void append_utf8(std::string& out, Char c) {
    uint32_t cp = static_cast<uint32_t>(c);
    if (cp <= 0x7f) {
        out.push_back(static_cast<char>(cp));
    } else if (cp <= 0x7ff) {
        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp <= 0xffff) {
        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp <= 0x10ffff) {
        out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        fail("SyntaxError", "code point out of range");
    }
}

inline std::string to_utf8(const U32String& s) {
    std::string out;
    out.reserve(s.size());
    for (Char c : s) append_utf8(out, c);
    return out;
}

inline std::string to_utf8(Char c) {
    std::string out;
    append_utf8(out, c);
    return out;
}

inline U32String from_utf8(const std::string& s) {
    U32String out;
    size_t i = 0;
    while (i < s.size()) {
        unsigned char b = static_cast<unsigned char>(s[i]);
        uint32_t cp;
        int extra;
        if (b < 0x80) {
            cp = b;
            extra = 0;
        } else if ((b & 0xe0) == 0xc0) {
            cp = b & 0x1f;
            extra = 1;
        } else if ((b & 0xf0) == 0xe0) {
            cp = b & 0x0f;
            extra = 2;
        } else if ((b & 0xf8) == 0xf0) {
            cp = b & 0x07;
            extra = 3;
        } else {
            fail("SyntaxError", "invalid UTF-8 byte");
        }
        if (i + extra >= s.size()) fail("SyntaxError", "truncated UTF-8 sequence");
        for (int k = 1; k <= extra; ++k) {
            unsigned char cb = static_cast<unsigned char>(s[i + k]);
            if ((cb & 0xc0) != 0x80) fail("SyntaxError", "invalid UTF-8 continuation");
            cp = (cp << 6) | (cb & 0x3f);
        }
        i += extra + 1;
        out.push_back(static_cast<Char>(cp));
    }
    return out;
}

inline bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

inline bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_identifier(const std::string& s) {
    if (s.empty() || !is_ident_start(s[0])) return false;
    for (char c : s)
        if (!is_ident_char(c)) return false;
    return true;
}

// Tokenizer for the line-oriented file formats. Splits on whitespace but
// keeps quoted characters ('a', '\n', '\u{1F600}') and {...} marker sets as
// single tokens. A # outside quotes starts a comment.
inline std::vector<std::string> split_line(const std::string& line, size_t line_no) {
    std::vector<std::string> toks;
    size_t i = 0;
    auto err = [&](const std::string& m) {
        fail("SyntaxError", "line " + std::to_string(line_no) + ": " + m);
    };
    while (i < line.size()) {
        char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') break;
        if (c == '\'') {
            size_t j = i + 1;
            while (j < line.size()) {
                if (line[j] == '\\') {
                    if (j + 1 >= line.size()) err("dangling backslash");
                    j += 2;
                } else if (line[j] == '\'') {
                    break;
                } else {
                    ++j;
                }
            }
            if (j >= line.size()) err("unterminated quoted character");
            toks.push_back(line.substr(i, j - i + 1));
            i = j + 1;
        } else if (c == '{') {
            size_t j = line.find('}', i);
            if (j == std::string::npos) err("unterminated { set");
            toks.push_back(line.substr(i, j - i + 1));
            i = j + 1;
        } else {
            size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
                   line[j] != '\r' && line[j] != '#' && line[j] != '\'' &&
                   line[j] != '{')
                ++j;
            toks.push_back(line.substr(i, j - i));
            i = j;
        }
    }
    return toks;
}

// Parses a 'c' token (with escapes) to the single character it denotes.
inline Char parse_quoted_char(const std::string& tok, size_t line_no) {
    auto err = [&](const std::string& m) {
        fail("SyntaxError", "line " + std::to_string(line_no) + ": " + m);
    };
    if (tok.size() < 3 || tok.front() != '\'' || tok.back() != '\'')
        err("expected quoted character, got " + tok);
    std::string body = tok.substr(1, tok.size() - 2);
    if (body[0] == '\\') {
        if (body.size() < 2) err("bad escape");
        switch (body[1]) {
            case '\'': if (body.size() != 2) err("bad escape"); return U'\'';
            case '\\': if (body.size() != 2) err("bad escape"); return U'\\';
            case 'n': if (body.size() != 2) err("bad escape"); return U'\n';
            case 't': if (body.size() != 2) err("bad escape"); return U'\t';
            case 'u': {
                if (body.size() < 5 || body[2] != '{' || body.back() != '}')
                    err("bad \\u escape");
                uint32_t cp = 0;
                for (size_t k = 3; k + 1 < body.size(); ++k) {
                    char h = body[k];
                    uint32_t d;
                    if (h >= '0' && h <= '9') d = h - '0';
                    else if (h >= 'a' && h <= 'f') d = 10 + h - 'a';
                    else if (h >= 'A' && h <= 'F') d = 10 + h - 'A';
                    else { err("bad hex digit in \\u escape"); return 0; }
                    cp = cp * 16 + d;
                    if (cp > 0x10ffff) err("\\u escape out of range");
                }
                return static_cast<Char>(cp);
            }
            default: err("unknown escape"); return 0;
        }
    }
    U32String decoded = from_utf8(body);
    if (decoded.size() != 1) err("quoted token must hold exactly one character");
    return decoded[0];
}

// Renders a character as a quoted token, escaping what the parser escapes.
inline std::string quote_char(Char c) {
    switch (c) {
        case U'\'': return "'\\''";
        case U'\\': return "'\\\\'";
        case U'\n': return "'\\n'";
        case U'\t': return "'\\t'";
        default: break;
    }
    if (c < 0x20) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "'\\u{%X}'", static_cast<uint32_t>(c));
        return buf;
    }
    return "'" + to_utf8(c) + "'";
}

// Splits text into lines, dropping the trailing newline of each.
inline std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t nl = s.find('\n', start);
        if (nl == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, nl - start));
        start = nl + 1;
    }
    return out;
}

}  // namespace text

// Checked signed arithmetic used by shift bookkeeping everywhere.
inline int64_t checked_add(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r)) fail("OverflowError", "shift arithmetic overflow");
    return r;
}

inline int64_t checked_sub(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) fail("OverflowError", "shift arithmetic overflow");
    return r;
}

}  // namespace gcq
