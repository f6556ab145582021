#include <cctype>
#include <charconv>
#include <cstdlib>

#include "sketchlab/little.hpp"

namespace sketchlab {
namespace {

enum class Tok { LParen, RParen, LBracket, RBracket, Number, String, Ident, Comment, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Annotation annot = Annotation::Plain;
    SrcPos pos;
    bool newlineBefore = false;  // a line break separates it from the previous token
};

constexpr std::string_view kLambdaUtf8 = "\xCE\xBB";

bool identStart(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool identChar(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }
bool opChar(char c) {
    return c == '+' || c == '-' || c == '*' || c == '/' || c == '<' || c == '>' || c == '=';
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        bool nl = false;
        while (true) {
            while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) {
                if (src_[i_] == '\n') nl = true;
                advance();
            }
            Token t;
            t.pos = {line_, col_};
            t.newlineBefore = nl;
            nl = false;
            if (i_ >= src_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            char c = src_[i_];
            if (c == ';') {
                size_t start = i_ + 1;
                while (i_ < src_.size() && src_[i_] != '\n') advance();
                t.kind = Tok::Comment;
                t.text = std::string(src_.substr(start, i_ - start));
                while (!t.text.empty() && (t.text.back() == '\r' || t.text.back() == ' '))
                    t.text.pop_back();
                if (!t.text.empty() && t.text.front() == ' ') t.text.erase(0, 1);
            } else if (c == '(' || c == ')' || c == '[' || c == ']') {
                t.kind = c == '(' ? Tok::LParen : c == ')' ? Tok::RParen
                       : c == '[' ? Tok::LBracket : Tok::RBracket;
                advance();
            } else if (c == '\'' || c == '"') {
                advance();
                size_t start = i_;
                while (i_ < src_.size() && src_[i_] != c) {
                    if (src_[i_] == '\n') throw ParseError("unterminated string", t.pos);
                    advance();
                }
                if (i_ >= src_.size()) throw ParseError("unterminated string", t.pos);
                t.kind = Tok::String;
                t.text = std::string(src_.substr(start, i_ - start));
                advance();
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       ((c == '-' || c == '.') && i_ + 1 < src_.size() &&
                        (std::isdigit(static_cast<unsigned char>(src_[i_ + 1])) ||
                         (src_[i_ + 1] == '.' && c == '-')))) {
                lexNumber(t);
            } else if (src_.substr(i_, kLambdaUtf8.size()) == kLambdaUtf8) {
                t.kind = Tok::Ident;
                t.text = "\\";
                advance();
                advance();
            } else if (c == '\\') {
                t.kind = Tok::Ident;
                t.text = "\\";
                advance();
            } else if (identStart(static_cast<unsigned char>(c))) {
                size_t start = i_;
                while (i_ < src_.size() && identChar(static_cast<unsigned char>(src_[i_]))) advance();
                t.kind = Tok::Ident;
                t.text = std::string(src_.substr(start, i_ - start));
            } else if (opChar(c)) {
                size_t start = i_;
                while (i_ < src_.size() && opChar(src_[i_])) advance();
                t.kind = Tok::Ident;
                t.text = std::string(src_.substr(start, i_ - start));
            } else {
                throw ParseError(std::string("unexpected character '") + c + "'", t.pos);
            }
            out.push_back(std::move(t));
        }
    }

private:
    void advance() {
        if (src_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    void lexNumber(Token& t) {
        size_t start = i_;
        if (src_[i_] == '-') advance();
        bool digits = false, dot = false;
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                digits = true;
                advance();
            } else if (c == '.' && !dot) {
                dot = true;
                advance();
            } else {
                break;
            }
        }
        std::string text(src_.substr(start, i_ - start));
        if (!digits || text.back() == '.') throw ParseError("bad number '" + text + "'", t.pos);
        if (i_ < src_.size() && (src_[i_] == '!' || src_[i_] == '?')) {
            t.annot = src_[i_] == '!' ? Annotation::Frozen : Annotation::Thawed;
            advance();
        }
        if (i_ < src_.size() && (identChar(static_cast<unsigned char>(src_[i_])) || src_[i_] == '.'))
            throw ParseError("bad number '" + text + src_[i_] + "'", t.pos);
        t.kind = Tok::Number;
        t.text = std::move(text);
    }

    std::string_view src_;
    size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Expr program() {
        Expr e = sequence(/*topLevel=*/true);
        if (peek().kind != Tok::End) throw ParseError("unbalanced ')'", peek().pos);
        return e;
    }

    Expr single() {
        Expr e = expr();
        flushComments();
        if (peek().kind != Tok::End) throw ParseError("trailing input", peek().pos);
        return e;
    }

private:
    const Token& peek(size_t ahead = 0) {
        skipComments();
        size_t j = i_;
        for (size_t n = 0;; ++j) {
            if (toks_[j].kind == Tok::End) return toks_[j];
            if (toks_[j].kind == Tok::Comment) continue;
            if (n++ == ahead) return toks_[j];
        }
    }

    void skipComments() {
        while (toks_[i_].kind == Tok::Comment) {
            pending_.push_back(toks_[i_].text);
            ++i_;
        }
    }

    Token next() {
        skipComments();
        Token t = toks_[i_];
        if (t.kind != Tok::End) ++i_;
        prevLine_ = t.pos.line;
        return t;
    }

    void expect(Tok k, const char* what) {
        const Token& t = peek();
        if (t.kind != k) {
            if (t.kind == Tok::End) throw ParseError(std::string("unbalanced: expected ") + what, t.pos);
            throw ParseError(std::string("expected ") + what, t.pos);
        }
        next();
    }

    void attachPending(Expr& e) {
        if (pending_.empty()) return;
        e.comments.insert(e.comments.end(), pending_.begin(), pending_.end());
        pending_.clear();
    }

    void flushComments() { skipComments(); }

    // Pull a comment that sits on the same line as the token just consumed.
    void takeTrailing(Expr& e) {
        if (toks_[i_].kind == Tok::Comment && !toks_[i_].newlineBefore) {
            e.trailing = toks_[i_].text;
            ++i_;
        }
    }

    bool atDef() {
        return peek().kind == Tok::LParen && peek(1).kind == Tok::Ident && peek(1).text == "def";
    }

    // defs* expr, folded into nested def-lets.
    Expr sequence(bool topLevel) {
        std::vector<Expr> defs;
        while (atDef()) {
            skipComments();
            std::vector<std::string> lead = std::move(pending_);
            pending_.clear();
            SrcPos p = next().pos;
            next();  // def
            Pattern pat = pattern();
            Expr bound = sequence(false);
            expect(Tok::RParen, "')' closing def");
            Expr d = Expr::let(std::move(pat), std::move(bound), Expr::list({}), true);
            d.pos = p;
            d.comments = std::move(lead);
            takeTrailing(d);
            defs.push_back(std::move(d));
        }
        if (peek().kind == Tok::End || peek().kind == Tok::RParen) {
            throw ParseError(topLevel ? "program has no main expression"
                                      : "definition block has no final expression",
                             peek().pos);
        }
        Expr result = expr();
        if (!defs.empty() || topLevel) takeTrailing(result);
        for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
            it->kids[1] = std::move(result);
            result = std::move(*it);
        }
        return result;
    }

    Pattern pattern() {
        Token t = next();
        if (t.kind == Tok::Ident && isIdentifier(t.text)) return Pattern::var(t.text);
        if (t.kind == Tok::LBracket) {
            std::vector<Pattern> ps;
            while (peek().kind != Tok::RBracket) {
                if (peek().kind == Tok::End) throw ParseError("unbalanced '[' in pattern", t.pos);
                ps.push_back(pattern());
            }
            next();
            return Pattern::list(std::move(ps));
        }
        throw ParseError("bad pattern", t.pos);
    }

    Expr expr() {
        skipComments();
        std::vector<std::string> lead = std::move(pending_);
        pending_.clear();
        Expr e = exprInner();
        if (!lead.empty()) e.comments.insert(e.comments.begin(), lead.begin(), lead.end());
        return e;
    }

    Expr exprInner() {
        Token t = next();
        Expr e;
        switch (t.kind) {
            case Tok::Number: {
                double v = std::strtod(t.text.c_str(), nullptr);
                e = Expr::number(v, t.text, t.annot);
                break;
            }
            case Tok::String:
                e = Expr::string(t.text);
                break;
            case Tok::Ident:
                if (t.text == "true" || t.text == "false") {
                    e.kind = ExprKind::Bool;
                    e.boolean = t.text == "true";
                } else if (t.text == "\\" || t.text == "def" || t.text == "let" ||
                           t.text == "letrec" || t.text == "if") {
                    throw ParseError("keyword '" + t.text + "' used as expression", t.pos);
                } else {
                    e = Expr::var(t.text);
                }
                break;
            case Tok::LBracket: {
                std::vector<Expr> xs;
                while (peek().kind != Tok::RBracket) {
                    if (peek().kind == Tok::End) throw ParseError("unbalanced '['", t.pos);
                    if (peek().kind == Tok::RParen) throw ParseError("mismatched ')' in list", peek().pos);
                    xs.push_back(expr());
                }
                next();
                e = Expr::list(std::move(xs));
                break;
            }
            case Tok::LParen:
                e = form(t.pos);
                break;
            case Tok::RParen:
            case Tok::RBracket:
                throw ParseError("unbalanced closing bracket", t.pos);
            case Tok::End:
                throw ParseError("unexpected end of input", t.pos);
            default:
                throw ParseError("unexpected token", t.pos);
        }
        e.pos = t.pos;
        return e;
    }

    Expr form(SrcPos open) {
        const Token& h = peek();
        if (h.kind == Tok::Ident) {
            std::string kw = h.text;
            if (kw == "let" || kw == "letrec") {
                next();
                Pattern p = pattern();
                Expr bound = expr();
                Expr body = expr();
                expect(Tok::RParen, "')' closing let");
                Expr e = Expr::let(std::move(p), std::move(bound), std::move(body));
                e.rec = kw == "letrec";
                return e;
            }
            if (kw == "\\") {
                next();
                std::vector<Pattern> ps;
                if (peek().kind == Tok::LParen) {
                    next();
                    while (peek().kind != Tok::RParen) {
                        if (peek().kind == Tok::End) throw ParseError("unbalanced parameter list", open);
                        ps.push_back(pattern());
                    }
                    next();
                } else {
                    ps.push_back(pattern());
                }
                Expr body = sequence(false);
                expect(Tok::RParen, "')' closing lambda");
                return Expr::lambda(std::move(ps), std::move(body));
            }
            if (kw == "if") {
                next();
                Expr e;
                e.kind = ExprKind::If;
                e.kids.push_back(expr());
                e.kids.push_back(expr());
                e.kids.push_back(expr());
                expect(Tok::RParen, "')' closing if");
                return e;
            }
            if (kw == "def") throw ParseError("def is only allowed in a definition block", open);
            if (opChar(kw[0]) && peek(1).kind != Tok::RParen) {
                next();
                std::vector<Expr> args;
                while (peek().kind != Tok::RParen) {
                    if (peek().kind == Tok::End) throw ParseError("unbalanced '('", open);
                    args.push_back(expr());
                }
                next();
                return Expr::op(kw, std::move(args));
            }
        }
        if (h.kind == Tok::RParen) throw ParseError("empty application", open);
        Expr fn = expr();
        std::vector<Expr> args;
        while (peek().kind != Tok::RParen) {
            if (peek().kind == Tok::End) throw ParseError("unbalanced '('", open);
            if (peek().kind == Tok::RBracket) throw ParseError("mismatched ']'", peek().pos);
            args.push_back(expr());
        }
        next();
        return Expr::app(std::move(fn), std::move(args));
    }

    std::vector<Token> toks_;
    size_t i_ = 0;
    int prevLine_ = 0;
    std::vector<std::string> pending_;
};

}  // namespace

bool isIdentifier(std::string_view s) {
    if (s.empty()) return false;
    if (opChar(s[0])) {
        for (char c : s)
            if (!opChar(c)) return false;
        return true;
    }
    if (!identStart(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!identChar(static_cast<unsigned char>(c))) return false;
    return s != "def" && s != "let" && s != "letrec" && s != "if" && s != "true" && s != "false";
}

Program parse(std::string_view source) {
    Parser ps(Lexer(source).run());
    Program p;
    p.root = ps.program();
    assignLocs(p);
    return p;
}

Expr parseExpr(std::string_view source) {
    Parser ps(Lexer(source).run());
    Expr e = ps.single();
    assignLocs(e);
    return e;
}

}  // namespace sketchlab
