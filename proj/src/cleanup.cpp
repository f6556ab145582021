#include <algorithm>
#include <regex>

#include "sketchlab/little.hpp"
#include "sketchlab/prelude.hpp"
#include "sketchlab/relate.hpp"
#include "sketchlab/scope.hpp"

namespace sketchlab {
namespace {

// A let binds either one pattern to its bound, or a tuple pattern to a list
// literal of the same length; in the latter case each position is an element.
size_t elemCount(const Expr& let) {
    if (!let.pat.isList) return 1;
    const Expr& b = let.kids[0];
    if (b.kind == ExprKind::List && b.kids.size() == let.pat.elems.size()) return b.kids.size();
    return 0;
}

const Pattern& elemPat(const Expr& let, size_t i) { return let.pat.isList ? let.pat.elems[i] : let.pat; }
Expr& elemBound(Expr& let, size_t i) { return let.pat.isList ? let.kids[0].kids[i] : let.kids[0]; }

void replaceByBody(Expr& let) {
    Expr body = std::move(let.kids[1]);
    if (!let.comments.empty()) body.comments.insert(body.comments.begin(), let.comments.begin(), let.comments.end());
    let = std::move(body);
}

void collapse(Expr& let) {
    if (!let.pat.isList || let.kids[0].kind != ExprKind::List || let.kids[0].kids.size() != let.pat.elems.size())
        return;
    if (let.pat.elems.empty()) {
        replaceByBody(let);
    } else if (let.pat.elems.size() == 1) {
        Pattern p = let.pat.elems[0];
        Expr b = std::move(let.kids[0].kids[0]);
        let.pat = std::move(p);
        let.kids[0] = std::move(b);
    }
}

void removeElem(Expr& let, size_t i) {
    if (!let.pat.isList) {
        replaceByBody(let);
        return;
    }
    let.pat.elems.erase(let.pat.elems.begin() + static_cast<long>(i));
    let.kids[0].kids.erase(let.kids[0].kids.begin() + static_cast<long>(i));
    collapse(let);
}

bool containsApp(const Expr& e) {
    bool found = false;
    forEachNode(e, [&](const Expr& n) { found = found || n.kind == ExprKind::App || n.kind == ExprKind::Lambda; });
    return found;
}

bool isKName(const std::string& n) {
    static const std::regex re("k[0-9]+");
    return std::regex_match(n, re);
}

std::set<std::string> keys(const std::map<std::string, int>& m) {
    std::set<std::string> s;
    for (const auto& [k, v] : m) s.insert(k);
    return s;
}

struct Ctx {
    std::set<std::string> idents;  // every identifier in the program
    bool aliasesOnly = false;
};

// Rules, each trying one rewrite on a let node.

bool ruleAlias(Expr& let, const Ctx&) {
    if (bindsInBound(let)) return false;
    for (size_t i = 0; i < elemCount(let); ++i) {
        const Pattern& p = elemPat(let, i);
        const Expr& b = elemBound(let, i);
        if (p.isList || b.kind != ExprKind::Var) continue;
        std::string y = b.text;
        if (y != p.name && let.pat.binds(y)) continue;
        if (!canSubstitute(let.kids[1], p.name, {y})) continue;
        std::string n = p.name;
        substituteFree(let.kids[1], n, Expr::var(y));
        removeElem(let, i);
        return true;
    }
    return false;
}

bool ruleUnused(Expr& let, const Ctx&) {
    for (size_t i = 0; i < elemCount(let); ++i) {
        const Pattern& p = elemPat(let, i);
        if (p.isList) continue;
        if (countFree(let.kids[1], p.name) > 0) continue;
        // Definitions that build shapes or functions stay even when unused.
        if (let.isDef && containsApp(elemBound(let, i))) continue;
        removeElem(let, i);
        return true;
    }
    return false;
}

bool ruleInlinePrimed(Expr& let, const Ctx&) {
    if (bindsInBound(let)) return false;
    for (size_t i = 0; i < elemCount(let); ++i) {
        const Pattern& p = elemPat(let, i);
        if (p.isList || p.name.empty() || p.name.back() != '\'') continue;
        if (!singleUseAtBinderSite(let.kids[1], p.name)) continue;
        Expr e = elemBound(let, i);
        auto fv = keys(freeVars(e));
        bool clash = std::any_of(fv.begin(), fv.end(), [&](const std::string& v) { return let.pat.binds(v); });
        if (clash || !canSubstitute(let.kids[1], p.name, fv)) continue;
        std::string n = p.name;
        substituteFree(let.kids[1], n, e);
        removeElem(let, i);
        return true;
    }
    return false;
}

bool ruleUnprime(Expr& let, const Ctx& ctx) {
    for (size_t i = 0; i < elemCount(let); ++i) {
        const Pattern& p = elemPat(let, i);
        if (p.isList || p.name.size() < 2 || p.name.back() != '\'') continue;
        std::string base = p.name.substr(0, p.name.size() - 1);
        if (ctx.idents.count(base) || isPreludeName(base)) continue;
        std::string old = p.name;
        Pattern& mp = let.pat.isList ? let.pat.elems[i] : let.pat;
        mp.name = base;
        substituteFree(let.kids[1], old, Expr::var(base));
        if (bindsInBound(let)) substituteFree(let.kids[0], old, Expr::var(base));
        return true;
    }
    return false;
}

bool ruleUnlift(Expr& let, const Ctx&) {
    if (!let.isDef) return false;
    for (size_t i = 0; i < elemCount(let); ++i) {
        const Pattern& p = elemPat(let, i);
        const Expr& b = elemBound(let, i);
        if (p.isList || b.kind != ExprKind::Num || isKName(p.name)) continue;
        if (!singleUseAtBinderSite(let.kids[1], p.name)) continue;
        Expr lit = b;
        std::string n = p.name;
        substituteFree(let.kids[1], n, lit);
        removeElem(let, i);
        return true;
    }
    return false;
}

bool ruleSplit(Expr& let, const Ctx&) {
    if (let.isDef || let.rec || !let.pat.isList) return false;
    size_t n = elemCount(let);
    if (n < 2) return false;
    std::set<std::string> earlier;
    for (size_t i = 0; i < n; ++i) {
        const Pattern& p = let.pat.elems[i];
        const Expr& b = let.kids[0].kids[i];
        if (p.isList || b.isAtom()) return false;
        for (const auto& [v, c] : freeVars(b))
            if (earlier.count(v)) return false;
        if (earlier.count(p.name)) return false;
        earlier.insert(p.name);
    }
    Expr body = std::move(let.kids[1]);
    for (size_t i = n; i-- > 0;)
        body = Expr::let(let.pat.elems[i], std::move(let.kids[0].kids[i]), std::move(body));
    body.comments = let.comments;
    let = std::move(body);
    return true;
}

bool ruleCollapse(Expr& let, const Ctx&) {
    if (!let.pat.isList || elemCount(let) > 1 || let.kids[0].kind != ExprKind::List) return false;
    if (let.kids[0].kids.size() != let.pat.elems.size()) return false;
    collapse(let);
    return true;
}

using Rule = bool (*)(Expr&, const Ctx&);

bool applyAnywhere(Expr& e, Rule rule, const Ctx& ctx) {
    if (e.kind == ExprKind::Let && rule(e, ctx)) return true;
    for (auto& k : e.kids)
        if (applyAnywhere(k, rule, ctx)) return true;
    return false;
}

Program rewrite(const Program& p, bool aliasesOnly) {
    static const Rule all[] = {ruleInlinePrimed, ruleAlias, ruleUnused, ruleUnprime, ruleUnlift, ruleSplit, ruleCollapse};
    static const Rule aliases[] = {ruleAlias};
    Program out = p;
    Ctx ctx;
    ctx.aliasesOnly = aliasesOnly;
    for (int guard = 0; guard < 100000; ++guard) {
        ctx.idents = identifiersOf(out.root);
        bool changed = false;
        if (aliasesOnly) {
            for (Rule r : aliases) changed = changed || applyAnywhere(out.root, r, ctx);
        } else {
            for (Rule r : all) {
                if (applyAnywhere(out.root, r, ctx)) {
                    changed = true;
                    break;
                }
            }
        }
        if (!changed) break;
    }
    assignLocs(out);
    return out;
}

}  // namespace

Program cleanUp(const Program& p) { return rewrite(p, false); }

Program inlineAliases(const Program& p) { return rewrite(p, true); }

}  // namespace sketchlab
