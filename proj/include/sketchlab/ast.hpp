#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sketchlab {

using LocId = std::int32_t;
inline constexpr LocId kNoLoc = -1;

enum class Annotation { Plain, Frozen, Thawed };

struct SrcPos {
    int line = 0;
    int col = 0;
};

/// Binding pattern: a variable, or a fixed-length list of patterns.
struct Pattern {
    std::string name;
    std::vector<Pattern> elems;
    bool isList = false;

    static Pattern var(std::string n) { return Pattern{std::move(n), {}, false}; }
    static Pattern list(std::vector<Pattern> ps) { return Pattern{{}, std::move(ps), true}; }

    void boundNames(std::vector<std::string>& out) const;
    bool binds(const std::string& n) const;
    bool operator==(const Pattern& o) const = default;
};

enum class ExprKind { Num, Str, Bool, Var, List, Op, Lambda, App, Let, If };

/// One node of a `little` program.
///
/// Children live in `kids`:
///   List  elements
///   Op    operands (name in `text`)
///   Lambda  [body], params in `params`
///   App   [fn, arg1, ...]
///   Let   [bound, body], pattern in `pat`; `isDef` marks `(def p e)` sugar
///   If    [cond, then, else]
struct Expr {
    ExprKind kind = ExprKind::Num;

    double num = 0.0;
    LocId loc = kNoLoc;
    Annotation annot = Annotation::Plain;

    // Num: literal text as written; Str: contents; Var: name; Op: operator.
    std::string text;
    bool boolean = false;

    Pattern pat;
    std::vector<Pattern> params;
    bool rec = false;
    bool isDef = false;

    std::vector<Expr> kids;

    std::vector<std::string> comments;  // leading `;` lines, without the `;`
    std::string trailing;               // same-line comment after the node
    SrcPos pos;

    static Expr number(double v, std::string text, Annotation a = Annotation::Plain);
    static Expr number(double v, Annotation a = Annotation::Plain);
    static Expr string(std::string s);
    static Expr var(std::string n);
    static Expr list(std::vector<Expr> xs);
    static Expr op(std::string name, std::vector<Expr> args);
    static Expr app(Expr fn, std::vector<Expr> args);
    static Expr lambda(std::vector<Pattern> params, Expr body);
    static Expr let(Pattern p, Expr bound, Expr body, bool isDef = false);

    Expr& bound() { return kids.at(0); }
    const Expr& bound() const { return kids.at(0); }
    Expr& body() { return kind == ExprKind::Lambda ? kids.at(0) : kids.at(1); }
    const Expr& body() const { return kind == ExprKind::Lambda ? kids.at(0) : kids.at(1); }

    bool isAtom() const {
        return kind == ExprKind::Num || kind == ExprKind::Str || kind == ExprKind::Bool ||
               kind == ExprKind::Var;
    }
};

/// Structural equality ignoring positions, comments and LocIds.
bool sameStructure(const Expr& a, const Expr& b);

/// A whole program. The root is a chain of `def` lets ending in the main
/// expression.
struct Program {
    Expr root;
    /// Default arguments for abstracted functions, recorded when Abstract runs
    /// and used by the Lambda tool when no call to the function remains.
    std::map<std::string, std::vector<Expr>> lambdaDefaults;
};

/// Flat view of a program's top-level structure.
struct TopLevel {
    std::vector<Expr> defs;  // Let nodes with isDef; body is a placeholder
    Expr main;

    static TopLevel split(const Expr& root);
    Expr join() const;
};

/// Renumber every numeric literal in pre-order starting at 0.
void assignLocs(Expr& root);
inline void assignLocs(Program& p) { assignLocs(p.root); }

/// Pre-order visit of every node, mutable and const.
template <typename F>
void forEachNode(Expr& e, F&& f) {
    f(e);
    for (auto& k : e.kids) forEachNode(k, f);
}
template <typename F>
void forEachNode(const Expr& e, F&& f) {
    f(e);
    for (const auto& k : e.kids) forEachNode(k, f);
}

Expr* findLoc(Expr& root, LocId loc);
const Expr* findLoc(const Expr& root, LocId loc);

/// Canonical decimal rendering used when the engine writes a number.
std::string formatNumber(double v, int maxDecimals = 6);

/// True if the main expression is `(blobs [ ... ])`.
bool isSimple(const Program& p);

}  // namespace sketchlab
