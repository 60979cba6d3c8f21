#include "divcw/mso/formula.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "divcw/errors.hpp"

namespace divcw::mso {

int Formula::num_vertex_vars() const {
    int n = 0;
    for (const Quantifier& q : prefix)
        if (q.sort == VarSort::Vertex) ++n;
    return n;
}

int Formula::num_set_vars() const {
    int n = 0;
    for (const Quantifier& q : prefix)
        if (q.sort == VarSort::Set) ++n;
    return n;
}

int Formula::sort_index(int i) const {
    int n = 0;
    for (int j = 0; j < i; ++j)
        if (prefix[j].sort == prefix[i].sort) ++n;
    return n;
}

namespace {

struct Token {
    enum class Kind { Ident, Keyword, Punct, End };
    Kind kind;
    std::string text;
    int line, column;
};

const char* kKeywords[] = {"exists", "forall", "set", "vertex", "adj", "in"};

bool is_keyword(const std::string& s) {
    for (const char* k : kKeywords)
        if (s == k) return true;
    return false;
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {  // comment to end of line
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++line_;
                column_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++column_;
                ++pos_;
            } else {
                break;
            }
        }
        current_.line = line_;
        current_.column = column_;
        if (pos_ >= text_.size()) {
            current_.kind = Token::Kind::End;
            current_.text.clear();
            return;
        }
        char c = text_[pos_];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                word += text_[pos_++];
                ++column_;
            }
            current_.kind = is_keyword(word) ? Token::Kind::Keyword : Token::Kind::Ident;
            current_.text = std::move(word);
            return;
        }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            current_ = {Token::Kind::Punct, "->", line_, column_};
            pos_ += 2;
            column_ += 2;
            return;
        }
        if (std::string("():,=!&|").find(c) != std::string::npos) {
            current_ = {Token::Kind::Punct, std::string(1, c), line_, column_};
            ++pos_;
            ++column_;
            return;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", line_, column_);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1, column_ = 1;
    Token current_{Token::Kind::End, "", 1, 1};
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    Formula parse() {
        Formula f;
        // Prefix: at least one quantifier, then ':'.
        while (true) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Kind::Keyword && (t.text == "exists" || t.text == "forall")) {
                f.prefix.push_back(quantifier());
            } else {
                break;
            }
        }
        if (f.prefix.empty()) {
            const Token& t = lex_.peek();
            throw parse_error("formula must start with a quantifier prefix", t.line, t.column);
        }
        expect_punct(":");
        f.matrix = implies();
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::End) throw parse_error("trailing input after formula", t.line, t.column);
        return f;
    }

private:
    Quantifier quantifier() {
        Token kw = lex_.take();
        Quantifier q;
        q.kind = kw.text == "exists" ? QuantKind::Exists : QuantKind::Forall;
        Token sort = lex_.take();
        if (sort.kind != Token::Kind::Keyword || (sort.text != "set" && sort.text != "vertex"))
            throw parse_error("expected 'set' or 'vertex' after '" + kw.text + "'", sort.line, sort.column);
        q.sort = sort.text == "set" ? VarSort::Set : VarSort::Vertex;
        Token name = lex_.take();
        if (name.kind != Token::Kind::Ident)
            throw parse_error("expected a variable name, got '" + name.text + "'", name.line, name.column);
        auto [it, fresh] = vars_.try_emplace(name.text, Binding{q.sort, 0});
        if (!fresh) throw parse_error("duplicate variable '" + name.text + "'", name.line, name.column);
        it->second.index = q.sort == VarSort::Vertex ? num_vertex_++ : num_set_++;
        q.name = name.text;
        return q;
    }

    void expect_punct(const std::string& p) {
        Token t = lex_.take();
        if (t.kind != Token::Kind::Punct || t.text != p)
            throw parse_error("expected '" + p + "', got '" + (t.text.empty() ? "end of input" : t.text) + "'",
                              t.line, t.column);
    }

    std::unique_ptr<Expr> implies() {
        std::unique_ptr<Expr> left = disjunction();
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Punct && t.text == "->") {
            lex_.take();
            auto node = std::make_unique<Expr>();
            node->op = Expr::Op::Implies;
            node->left = std::move(left);
            node->right = implies();  // right-associative
            return node;
        }
        return left;
    }

    std::unique_ptr<Expr> disjunction() {
        std::unique_ptr<Expr> left = conjunction();
        while (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "|") {
            lex_.take();
            auto node = std::make_unique<Expr>();
            node->op = Expr::Op::Or;
            node->left = std::move(left);
            node->right = conjunction();
            left = std::move(node);
        }
        return left;
    }

    std::unique_ptr<Expr> conjunction() {
        std::unique_ptr<Expr> left = unary();
        while (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "&") {
            lex_.take();
            auto node = std::make_unique<Expr>();
            node->op = Expr::Op::And;
            node->left = std::move(left);
            node->right = unary();
            left = std::move(node);
        }
        return left;
    }

    std::unique_ptr<Expr> unary() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Punct && t.text == "!") {
            lex_.take();
            auto node = std::make_unique<Expr>();
            node->op = Expr::Op::Not;
            node->left = unary();
            return node;
        }
        if (t.kind == Token::Kind::Punct && t.text == "(") {
            lex_.take();
            std::unique_ptr<Expr> inner = implies();
            expect_punct(")");
            return inner;
        }
        return atom();
    }

    struct Binding {
        VarSort sort;
        int index;
    };

    Binding lookup(const Token& name, VarSort want) {
        if (name.kind == Token::Kind::Keyword && (name.text == "exists" || name.text == "forall"))
            throw parse_error("quantifiers must appear in the prefix, not inside the matrix", name.line,
                              name.column);
        if (name.kind != Token::Kind::Ident)
            throw parse_error("expected a variable name, got '" + (name.text.empty() ? "end of input" : name.text) +
                                  "'",
                              name.line, name.column);
        auto it = vars_.find(name.text);
        if (it == vars_.end()) throw parse_error("unknown variable '" + name.text + "'", name.line, name.column);
        if (it->second.sort != want)
            throw parse_error("variable '" + name.text + "' has the wrong sort (" +
                                  (want == VarSort::Vertex ? "vertex" : "set") + " expected)",
                              name.line, name.column);
        return it->second;
    }

    std::unique_ptr<Expr> atom() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Keyword && t.text == "adj") {
            lex_.take();
            expect_punct("(");
            Token x = lex_.take();
            expect_punct(",");
            Token y = lex_.take();
            expect_punct(")");
            auto node = std::make_unique<Expr>();
            node->op = Expr::Op::Adj;
            node->lhs_vertex = lookup(x, VarSort::Vertex).index;
            node->rhs_vertex = lookup(y, VarSort::Vertex).index;
            return node;
        }
        if (t.kind == Token::Kind::Keyword && (t.text == "exists" || t.text == "forall"))
            throw parse_error("quantifiers must appear in the prefix, not inside the matrix", t.line, t.column);
        Token x = lex_.take();
        if (x.kind != Token::Kind::Ident)
            throw parse_error("expected an atom, got '" + (x.text.empty() ? "end of input" : x.text) + "'", x.line,
                              x.column);
        Token op = lex_.take();
        if (op.kind == Token::Kind::Punct && op.text == "=") {
            Token y = lex_.take();
            auto node = std::make_unique<Expr>();
            node->op = Expr::Op::Eq;
            node->lhs_vertex = lookup(x, VarSort::Vertex).index;
            node->rhs_vertex = lookup(y, VarSort::Vertex).index;
            return node;
        }
        if (op.kind == Token::Kind::Keyword && op.text == "in") {
            Token s = lex_.take();
            auto node = std::make_unique<Expr>();
            node->op = Expr::Op::In;
            node->lhs_vertex = lookup(x, VarSort::Vertex).index;
            node->set_var = lookup(s, VarSort::Set).index;
            return node;
        }
        throw parse_error("expected '=' or 'in' after '" + x.text + "'", op.line, op.column);
    }

    Lexer lex_;
    std::map<std::string, Binding> vars_;
    int num_vertex_ = 0;
    int num_set_ = 0;
};

}  // namespace

Formula parse_formula(const std::string& text) {
    Parser parser(text);
    Formula f = parser.parse();
    f.text = text;
    return f;
}

Formula parse_formula_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open formula file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_formula(buffer.str());
}

}  // namespace divcw::mso
