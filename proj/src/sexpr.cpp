#include "mappop/sexpr.hpp"

#include <cctype>
#include <sstream>

namespace mappop {

const SExpr& SExpr::at(size_t i) const {
    if (kind != Kind::List || i >= items.size())
        throw ParseError("expected a longer list", line, col);
    return items[i];
}

const std::string& SExpr::atom_or_throw(const char* what) const {
    if (kind != Kind::Atom)
        throw ParseError(std::string("expected ") + what, line, col);
    return atom;
}

namespace {

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    SExpr read() {
        skip_ws();
        if (eof())
            throw ParseError("unexpected end of input", line_, col_);
        if (peek() == '(')
            return read_list();
        if (peek() == ')')
            throw ParseError("unexpected ')'", line_, col_);
        return read_atom();
    }

    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == ';') {
                while (!eof() && peek() != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    bool eof() const { return pos_ >= text_.size(); }
    int line() const { return line_; }
    int col() const { return col_; }

private:
    char peek() const { return text_[pos_]; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    SExpr read_list() {
        SExpr e;
        e.kind = SExpr::Kind::List;
        e.line = line_;
        e.col = col_;
        advance();  // '('
        for (;;) {
            skip_ws();
            if (eof())
                throw ParseError("unclosed '('", e.line, e.col);
            if (peek() == ')') {
                advance();
                return e;
            }
            e.items.push_back(read());
        }
    }

    SExpr read_atom() {
        SExpr e;
        e.kind = SExpr::Kind::Atom;
        e.line = line_;
        e.col = col_;
        while (!eof()) {
            char c = peek();
            if (c == '(' || c == ')' || c == ';' ||
                std::isspace(static_cast<unsigned char>(c)))
                break;
            e.atom.push_back(c);
            advance();
        }
        return e;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

SExpr read_sexpr(const std::string& text) {
    Reader r(text);
    SExpr e = r.read();
    r.skip_ws();
    if (!r.eof())
        throw ParseError("trailing input after expression", r.line(), r.col());
    return e;
}

std::vector<SExpr> read_all_sexprs(const std::string& text) {
    Reader r(text);
    std::vector<SExpr> out;
    r.skip_ws();
    while (!r.eof()) {
        out.push_back(r.read());
        r.skip_ws();
    }
    return out;
}

static void print_rec(const SExpr& e, std::ostringstream& os) {
    if (e.is_atom()) {
        os << e.atom;
        return;
    }
    os << '(';
    for (size_t i = 0; i < e.items.size(); ++i) {
        if (i)
            os << ' ';
        print_rec(e.items[i], os);
    }
    os << ')';
}

std::string print_sexpr(const SExpr& e) {
    std::ostringstream os;
    print_rec(e, os);
    return os.str();
}

}  // namespace mappop
