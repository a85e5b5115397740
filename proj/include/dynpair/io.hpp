#pragma once

#include <dynpair/poly_map.hpp>

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace dynpair {

// Map file format, one directive per line:
//
//   # comment
//   n 2
//   vars x y
//   map f
//   component y
//   component y^2 - x
//   map g
//   ...
//
// Expressions use + - * ^ ( ), integer or p/q literals, and the declared
// variable names. Printing a parsed file and re-parsing it reproduces the
// identical term maps.

struct MapFile {
    std::size_t n = 0;
    std::vector<std::string> vars;
    std::vector<std::pair<std::string, PolyMap>> maps;

    const PolyMap& by_name(const std::string& name) const {
        for (const auto& [k, v] : maps)
            if (k == name)
                return v;
        throw parse_error("no map named " + name + " in file");
    }
};

namespace detail {

struct Token {
    enum Kind { number, ident, op, end } kind = end;
    std::string text;
};

class Lexer {
  public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
        if (i_ >= s_.size())
            return {Token::end, ""};
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j])))
                ++j;
            // contiguous p/q is a rational literal
            if (j < s_.size() && s_[j] == '/') {
                std::size_t k = j + 1;
                while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k])))
                    ++k;
                if (k == j + 1)
                    throw parse_error("expected digits after '/'");
                Token t{Token::number, s_.substr(i_, k - i_)};
                i_ = k;
                return t;
            }
            Token t{Token::number, s_.substr(i_, j - i_)};
            i_ = j;
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
                ++j;
            Token t{Token::ident, s_.substr(i_, j - i_)};
            i_ = j;
            return t;
        }
        if (std::string("+-*^()").find(c) != std::string::npos) {
            ++i_;
            return {Token::op, std::string(1, c)};
        }
        throw parse_error(std::string("unexpected character '") + c + "' in expression");
    }

  private:
    const std::string& s_;
    std::size_t i_ = 0;
};

class ExprParser {
  public:
    ExprParser(const std::string& s, const std::vector<std::string>& vars)
        : lex_(s), vars_(vars) {
        advance();
    }

    QPoly parse() {
        QPoly p = expr();
        if (tok_.kind != Token::end)
            throw parse_error("trailing input after expression");
        return p;
    }

  private:
    void advance() { tok_ = lex_.next(); }

    bool is_op(const char* s) const { return tok_.kind == Token::op && tok_.text == s; }

    QPoly expr() {
        bool neg = false;
        if (is_op("-")) {
            neg = true;
            advance();
        } else if (is_op("+")) {
            advance();
        }
        QPoly acc = term();
        if (neg)
            acc = -acc;
        while (is_op("+") || is_op("-")) {
            bool minus = tok_.text == "-";
            advance();
            QPoly t = term();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    QPoly term() {
        QPoly acc = factor();
        while (is_op("*")) {
            advance();
            acc = acc * factor();
        }
        return acc;
    }

    QPoly factor() {
        QPoly base = atom();
        if (is_op("^")) {
            advance();
            if (tok_.kind != Token::number || tok_.text.find('/') != std::string::npos)
                throw parse_error("exponent must be a nonnegative integer");
            unsigned long e = std::stoul(tok_.text);
            advance();
            return base.pow(e);
        }
        return base;
    }

    QPoly atom() {
        if (tok_.kind == Token::number) {
            Rat q = parse_rational(tok_.text);
            advance();
            return QPoly::constant(vars_.size(), q);
        }
        if (tok_.kind == Token::ident) {
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == tok_.text) {
                    advance();
                    return QPoly::variable(vars_.size(), i);
                }
            throw parse_error("unknown variable: " + tok_.text);
        }
        if (is_op("(")) {
            advance();
            QPoly p = expr();
            if (!is_op(")"))
                throw parse_error("expected ')'");
            advance();
            return p;
        }
        if (is_op("-")) {
            advance();
            return -factor();
        }
        throw parse_error("expected a number, variable, or '('");
    }

    Lexer lex_;
    Token tok_;
    const std::vector<std::string>& vars_;
};

}  // namespace detail

inline QPoly parse_poly(const std::string& expr, const std::vector<std::string>& vars) {
    return detail::ExprParser(expr, vars).parse();
}

inline MapFile parse_map_document(std::istream& in) {
    MapFile mf;
    std::string line;
    std::string current_name;
    std::vector<QPoly> current;
    auto flush = [&]() {
        if (current_name.empty())
            return;
        mf.maps.emplace_back(current_name, PolyMap(mf.n, std::move(current)));
        current.clear();
        current_name.clear();
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#')
            continue;
        if (key == "n") {
            if (!(ls >> mf.n) || mf.n == 0)
                throw parse_error("bad dimension line");
        } else if (key == "vars") {
            std::string v;
            while (ls >> v)
                mf.vars.push_back(v);
            if (mf.vars.size() != mf.n)
                throw parse_error("vars count differs from n");
        } else if (key == "map") {
            flush();
            if (!(ls >> current_name))
                throw parse_error("map line needs a name");
        } else if (key == "component") {
            if (current_name.empty())
                throw parse_error("component outside a map block");
            std::string rest;
            std::getline(ls, rest);
            current.push_back(parse_poly(rest, mf.vars));
        } else {
            throw parse_error("unknown directive: " + key);
        }
    }
    flush();
    if (mf.maps.empty())
        throw parse_error("no map blocks in document");
    return mf;
}

inline MapFile parse_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open " + path);
    return parse_map_document(in);
}

inline std::string print_poly(const QPoly& p, const std::vector<std::string>& vars) {
    if (p.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms) {
        Rat a = c;
        bool neg = a < 0;
        if (neg)
            a = -a;
        out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
        first = false;
        bool unit = (a == 1);
        bool constant = total_degree(m) == 0;
        if (!unit || constant)
            out += to_string(a);
        bool need_star = !unit || constant;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i])
                continue;
            if (need_star)
                out += "*";
            out += vars[i];
            if (m[i] > 1)
                out += "^" + std::to_string(m[i]);
            need_star = true;
        }
    }
    return out;
}

inline std::string print_map_document(const MapFile& mf) {
    std::string out;
    out += "n " + std::to_string(mf.n) + "\n";
    out += "vars";
    for (const auto& v : mf.vars)
        out += " " + v;
    out += "\n";
    for (const auto& [name, f] : mf.maps) {
        out += "map " + name + "\n";
        for (const auto& c : f.components)
            out += "component " + print_poly(c, mf.vars) + "\n";
    }
    return out;
}

/// Points for batch commands: one point per line, n whitespace-separated
/// rational literals.
inline std::vector<std::vector<Rat>> parse_points(std::istream& in, std::size_t n) {
    std::vector<std::vector<Rat>> pts;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string w;
        std::vector<Rat> p;
        while (ls >> w) {
            if (w[0] == '#')
                break;
            p.push_back(parse_rational(w));
        }
        if (p.empty())
            continue;
        if (p.size() != n)
            throw parse_error("point with wrong coordinate count");
        pts.push_back(std::move(p));
    }
    return pts;
}

}  // namespace dynpair
