#include "ilt/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "ilt/error.hpp"

namespace ilt {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }

    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= src_.size()) {
            cur_.kind = Tok::End;
            cur_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
            cur_.kind = Tok::Number;
            cur_.text = src_.substr(start, pos_ - start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                bump();
            cur_.kind = Tok::Ident;
            cur_.text = src_.substr(start, pos_ - start);
            return;
        }
        cur_.text = std::string(1, c);
        bump();
        switch (c) {
            case '+': cur_.kind = Tok::Plus; return;
            case '-': cur_.kind = Tok::Minus; return;
            case '*': cur_.kind = Tok::Star; return;
            case '/': cur_.kind = Tok::Slash; return;
            case '^': cur_.kind = Tok::Caret; return;
            case '(': cur_.kind = Tok::LParen; return;
            case ')': cur_.kind = Tok::RParen; return;
            default:
                throw Error(ErrorCode::SyntaxError, "unexpected character '" + std::string(1, c) + "' at " +
                                                        std::to_string(line_) + ":" + std::to_string(col_ - 1));
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_;
};

[[noreturn]] void syntax_error(const Token& t, const std::string& what) {
    throw Error(ErrorCode::SyntaxError,
                what + " at " + std::to_string(t.line) + ":" + std::to_string(t.col));
}

class Parser {
  public:
    Parser(const std::string& text, TowerPtr tower, const NameResolver& names)
        : lex_(text), tower_(std::move(tower)), names_(names) {}

    Lpdo parse_full() {
        Lpdo v = parse_sum();
        if (lex_.peek().kind != Tok::End) syntax_error(lex_.peek(), "unexpected token '" + lex_.peek().text + "'");
        return v;
    }

  private:
    Lpdo parse_sum() {
        Lpdo v = parse_product();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            Token op = lex_.next();
            Lpdo rhs = parse_product();
            v = (op.kind == Tok::Plus) ? v + rhs : v - rhs;
        }
        return v;
    }

    Lpdo parse_product() {
        Lpdo v = parse_unary();
        while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
            Token op = lex_.next();
            Lpdo rhs = parse_unary();
            if (op.kind == Tok::Star) {
                v = compose(v, rhs);
            } else {
                // Division is a field operation; derivations may not appear on
                // either side of '/'.
                if (v.order() > 0 || rhs.order() > 0)
                    syntax_error(op, "'/' requires function operands (operators are not invertible)");
                v = Lpdo::function(tower_, v.as_function() / rhs.as_function());
            }
        }
        return v;
    }

    Lpdo parse_unary() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.next();
            return -parse_unary();
        }
        return parse_power();
    }

    Lpdo parse_power() {
        Lpdo base = parse_atom();
        while (lex_.peek().kind == Tok::Caret) {
            Token caret = lex_.next();
            bool negative = false;
            if (lex_.peek().kind == Tok::Minus) {
                negative = true;
                lex_.next();
            }
            if (lex_.peek().kind != Tok::Number) syntax_error(lex_.peek(), "exponent must be an integer");
            Token expo = lex_.next();
            if (negative)
                throw Error(ErrorCode::NegativeExponent, "negative exponent at " + std::to_string(caret.line) +
                                                             ":" + std::to_string(caret.col));
            unsigned long k = std::stoul(expo.text);
            Lpdo v = Lpdo::function(tower_, RationalExpr::integer(tower_->num_symbols(), 1));
            for (unsigned long i = 0; i < k; ++i) v = compose(v, base);
            base = v;
        }
        return base;
    }

    Lpdo parse_atom() {
        Token t = lex_.next();
        switch (t.kind) {
            case Tok::Number:
                return Lpdo::function(tower_, RationalExpr::integer(tower_->num_symbols(), mpz_class(t.text)));
            case Tok::Ident: {
                if (t.text.size() > 1 && t.text[0] == 'D') {
                    std::string var = t.text.substr(1);
                    if (std::find(tower_->vars().begin(), tower_->vars().end(), var) != tower_->vars().end())
                        return Lpdo::derivation(tower_, var);
                }
                int sym = tower_->symbol_index(t.text);
                if (sym >= 0) return Lpdo::function(tower_, RationalExpr::symbol(tower_->num_symbols(), sym));
                if (names_) {
                    if (const Lpdo* named = names_(t.text)) return *named;
                }
                throw Error(ErrorCode::UnknownSymbol, "unknown symbol '" + t.text + "' at " +
                                                          std::to_string(t.line) + ":" + std::to_string(t.col));
            }
            case Tok::LParen: {
                Lpdo v = parse_sum();
                if (lex_.peek().kind != Tok::RParen) syntax_error(lex_.peek(), "expected ')'");
                lex_.next();
                return v;
            }
            default:
                syntax_error(t, "unexpected token '" + t.text + "'");
        }
    }

    Lexer lex_;
    TowerPtr tower_;
    const NameResolver& names_;
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Lpdo parse_operator(const std::string& text, const TowerPtr& tower, const NameResolver& names) {
    return Parser(text, tower, names).parse_full();
}

RationalExpr parse_expr(const std::string& text, const TowerPtr& tower, const NameResolver& names) {
    Lpdo op = parse_operator(text, tower, names);
    if (op.order() > 0)
        throw Error(ErrorCode::SyntaxError, "expected a field expression, got an operator: " + text);
    return op.as_function();
}

const Lpdo* Workspace::find_operator(const std::string& name) const {
    for (const auto& [n, op] : operators)
        if (n == name) return &op;
    return nullptr;
}

const RationalExpr* Workspace::find_expr(const std::string& name) const {
    for (const auto& [n, e] : exprs)
        if (n == name) return &e;
    return nullptr;
}

Workspace parse_workspace(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::vector<std::string> vars;
    // generator name -> list of (var, source); order of first mention matters
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> gens;
    std::vector<std::pair<std::string, std::string>> operator_lines, expr_lines;
    int lineno = 0;

    auto fail = [&](const std::string& msg) -> void {
        throw Error(ErrorCode::UsageError, "workspace line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "vars" && section != "generators" && section != "operators" && section != "exprs")
                fail("unknown section [" + section + "]");
            continue;
        }
        if (section == "vars") {
            std::string name;
            for (char c : line + ",") {
                if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
                    if (!name.empty()) vars.push_back(name);
                    name.clear();
                } else {
                    name += c;
                }
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'name = expression'");
        std::string name = trim(line.substr(0, eq));
        std::string body = trim(line.substr(eq + 1));
        if (name.empty() || body.empty()) fail("expected 'name = expression'");
        if (section == "generators") {
            auto dot = name.find('.');
            if (dot == std::string::npos) fail("generator lines read 'name.var = expression'");
            std::string gname = trim(name.substr(0, dot));
            std::string var = trim(name.substr(dot + 1));
            auto it = std::find_if(gens.begin(), gens.end(), [&](const auto& g) { return g.first == gname; });
            if (it == gens.end()) {
                gens.push_back({gname, {{var, body}}});
            } else {
                it->second.push_back({var, body});
            }
        } else if (section == "operators") {
            operator_lines.push_back({name, body});
        } else if (section == "exprs") {
            expr_lines.push_back({name, body});
        } else {
            fail("entry outside of any section");
        }
    }

    Workspace ws;
    ws.tower = FieldTower::create(vars);
    for (const auto& [gname, partial_sources] : gens) {
        ws.tower = ws.tower->declare_generator(gname, [&](const FieldTower& provisional) {
            auto provisional_ptr = std::make_shared<const FieldTower>(provisional);
            std::map<std::string, RationalExpr> table;
            for (const auto& [var, src] : partial_sources) {
                if (table.count(var))
                    throw Error(ErrorCode::UsageError,
                                "duplicate partial " + gname + "." + var + " in workspace");
                table[var] = parse_expr(src, provisional_ptr);
            }
            return table;
        });
    }
    auto check_unique = [&](const std::string& name) {
        if (ws.tower->symbol_index(name) >= 0)
            throw Error(ErrorCode::UsageError, "name '" + name + "' shadows a tower symbol");
        if (ws.find_operator(name) || ws.find_expr(name))
            throw Error(ErrorCode::UsageError, "duplicate name '" + name + "' in workspace");
    };
    // Entries may reference earlier entries by name.
    std::map<std::string, Lpdo> named;
    NameResolver resolver = [&named](const std::string& name) -> const Lpdo* {
        auto it = named.find(name);
        return it == named.end() ? nullptr : &it->second;
    };
    for (const auto& [name, src] : operator_lines) {
        check_unique(name);
        Lpdo op = parse_operator(src, ws.tower, resolver);
        named.emplace(name, op);
        ws.operators.push_back({name, std::move(op)});
    }
    for (const auto& [name, src] : expr_lines) {
        check_unique(name);
        RationalExpr e = parse_expr(src, ws.tower, resolver);
        named.emplace(name, Lpdo::function(ws.tower, e));
        ws.exprs.push_back({name, std::move(e)});
    }
    return ws;
}

Workspace load_workspace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::UsageError, "cannot open workspace file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_workspace(buf.str());
}

}  // namespace ilt
