#include "sketchlab/ast.hpp"

#include <cmath>
#include <cstdio>

namespace sketchlab {

void Pattern::boundNames(std::vector<std::string>& out) const {
    if (!isList) {
        out.push_back(name);
        return;
    }
    for (const auto& e : elems) e.boundNames(out);
}

bool Pattern::binds(const std::string& n) const {
    if (!isList) return name == n;
    for (const auto& e : elems)
        if (e.binds(n)) return true;
    return false;
}

Expr Expr::number(double v, std::string text, Annotation a) {
    Expr e;
    e.kind = ExprKind::Num;
    e.num = v;
    e.text = std::move(text);
    e.annot = a;
    return e;
}

Expr Expr::number(double v, Annotation a) { return number(v, formatNumber(v), a); }

Expr Expr::string(std::string s) {
    Expr e;
    e.kind = ExprKind::Str;
    e.text = std::move(s);
    return e;
}

Expr Expr::var(std::string n) {
    Expr e;
    e.kind = ExprKind::Var;
    e.text = std::move(n);
    return e;
}

Expr Expr::list(std::vector<Expr> xs) {
    Expr e;
    e.kind = ExprKind::List;
    e.kids = std::move(xs);
    return e;
}

Expr Expr::op(std::string name, std::vector<Expr> args) {
    Expr e;
    e.kind = ExprKind::Op;
    e.text = std::move(name);
    e.kids = std::move(args);
    return e;
}

Expr Expr::app(Expr fn, std::vector<Expr> args) {
    Expr e;
    e.kind = ExprKind::App;
    e.kids.reserve(args.size() + 1);
    e.kids.push_back(std::move(fn));
    for (auto& a : args) e.kids.push_back(std::move(a));
    return e;
}

Expr Expr::lambda(std::vector<Pattern> params, Expr body) {
    Expr e;
    e.kind = ExprKind::Lambda;
    e.params = std::move(params);
    e.kids.push_back(std::move(body));
    return e;
}

Expr Expr::let(Pattern p, Expr bound, Expr body, bool isDef) {
    Expr e;
    e.kind = ExprKind::Let;
    e.pat = std::move(p);
    e.isDef = isDef;
    e.kids.push_back(std::move(bound));
    e.kids.push_back(std::move(body));
    return e;
}

bool sameStructure(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::Num:
            return a.num == b.num && a.annot == b.annot && a.text == b.text;
        case ExprKind::Str:
        case ExprKind::Var:
            return a.text == b.text;
        case ExprKind::Bool:
            return a.boolean == b.boolean;
        case ExprKind::Op:
            if (a.text != b.text) return false;
            break;
        case ExprKind::Lambda:
            if (a.params != b.params) return false;
            break;
        case ExprKind::Let:
            if (!(a.pat == b.pat) || a.rec != b.rec || a.isDef != b.isDef) return false;
            break;
        default:
            break;
    }
    if (a.kids.size() != b.kids.size()) return false;
    for (size_t i = 0; i < a.kids.size(); ++i)
        if (!sameStructure(a.kids[i], b.kids[i])) return false;
    return true;
}

TopLevel TopLevel::split(const Expr& root) {
    TopLevel t;
    const Expr* cur = &root;
    while (cur->kind == ExprKind::Let && cur->isDef) {
        // Copy the def without the rest of the program.
        Expr d;
        d.kind = cur->kind;
        d.pat = cur->pat;
        d.rec = cur->rec;
        d.isDef = true;
        d.comments = cur->comments;
        d.trailing = cur->trailing;
        d.pos = cur->pos;
        d.kids = {cur->kids[0], Expr::list({})};
        t.defs.push_back(std::move(d));
        cur = &cur->kids[1];
    }
    t.main = *cur;
    return t;
}

Expr TopLevel::join() const {
    Expr acc = main;
    for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
        Expr d = *it;
        d.isDef = true;
        d.kids[1] = std::move(acc);
        acc = std::move(d);
    }
    return acc;
}

void assignLocs(Expr& root) {
    LocId next = 0;
    forEachNode(root, [&](Expr& e) {
        if (e.kind == ExprKind::Num) e.loc = next++;
    });
}

Expr* findLoc(Expr& root, LocId loc) {
    Expr* found = nullptr;
    forEachNode(root, [&](Expr& e) {
        if (!found && e.kind == ExprKind::Num && e.loc == loc) found = &e;
    });
    return found;
}

const Expr* findLoc(const Expr& root, LocId loc) {
    return findLoc(const_cast<Expr&>(root), loc);
}

std::string formatNumber(double v, int maxDecimals) {
    if (std::isnan(v)) return "0";
    double scale = std::pow(10.0, maxDecimals);
    double r = std::round(v * scale) / scale;
    if (r == 0.0) r = 0.0;  // drop negative zero
    if (std::abs(r) < 1e15 && r == std::floor(r)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", r);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", maxDecimals, r);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

bool isSimple(const Program& p) {
    TopLevel t = TopLevel::split(p.root);
    const Expr& m = t.main;
    return m.kind == ExprKind::App && m.kids.size() == 2 && m.kids[0].kind == ExprKind::Var &&
           m.kids[0].text == "blobs" && m.kids[1].kind == ExprKind::List;
}

}  // namespace sketchlab
