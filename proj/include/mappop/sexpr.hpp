#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mappop {

// Error with source position, thrown by the s-expression reader and by the
// AST builders on malformed input.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ")"),
          line(line),
          col(col) {}
    int line;
    int col;
};

struct SExpr {
    enum class Kind { Atom, List };
    Kind kind = Kind::Atom;
    std::string atom;          // Kind::Atom
    std::vector<SExpr> items;  // Kind::List
    int line = 0;
    int col = 0;

    bool is_atom() const { return kind == Kind::Atom; }
    bool is_list() const { return kind == Kind::List; }
    size_t size() const { return items.size(); }
    const SExpr& at(size_t i) const;
    // Atom text, or throw ParseError if this is a list.
    const std::string& atom_or_throw(const char* what) const;
};

// Reads one s-expression; trailing non-whitespace input is an error.
SExpr read_sexpr(const std::string& text);

// Reads a whole file of s-expressions (used nowhere yet; the task files each
// hold a single form).
std::vector<SExpr> read_all_sexprs(const std::string& text);

std::string print_sexpr(const SExpr& e);

}  // namespace mappop
