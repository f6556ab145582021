#include "sketchlab/scope.hpp"

#include <functional>
#include <vector>

namespace sketchlab {
namespace {

bool patBinds(const std::vector<Pattern>& ps, const std::string& n) {
    for (const auto& p : ps)
        if (p.binds(n)) return true;
    return false;
}

void addNames(const Pattern& p, std::multiset<std::string>& bound) {
    std::vector<std::string> ns;
    p.boundNames(ns);
    bound.insert(ns.begin(), ns.end());
}

void removeNames(const Pattern& p, std::multiset<std::string>& bound) {
    std::vector<std::string> ns;
    p.boundNames(ns);
    for (const auto& n : ns) bound.erase(bound.find(n));
}

// Visit free variable occurrences. `f(var, boundHere, direct)` where
// boundHere holds names bound between the root and the occurrence and
// `direct` marks binder-element positions.
using Visitor = std::function<void(const Expr&, const std::multiset<std::string>&, bool)>;

void visitFree(const Expr& e, std::multiset<std::string>& bound, const Visitor& f, bool direct = false) {
    switch (e.kind) {
        case ExprKind::Var:
            if (!bound.count(e.text)) f(e, bound, direct);
            return;
        case ExprKind::Lambda:
            for (const auto& p : e.params) addNames(p, bound);
            visitFree(e.kids[0], bound, f);
            for (const auto& p : e.params) removeNames(p, bound);
            return;
        case ExprKind::Let: {
            bool selfScope = bindsInBound(e);
            if (selfScope) addNames(e.pat, bound);
            const Expr& b = e.kids[0];
            if (e.pat.isList && b.kind == ExprKind::List && b.kids.size() == e.pat.elems.size()) {
                for (const auto& k : b.kids) visitFree(k, bound, f, true);
            } else {
                visitFree(b, bound, f, !e.pat.isList);
            }
            if (!selfScope) addNames(e.pat, bound);
            visitFree(e.kids[1], bound, f);
            removeNames(e.pat, bound);
            return;
        }
        default:
            for (const auto& k : e.kids) visitFree(k, bound, f);
    }
}

}  // namespace

bool bindsInBound(const Expr& let) {
    return (let.rec || let.isDef) && !let.pat.isList && let.kids[0].kind == ExprKind::Lambda;
}

std::map<std::string, int> freeVars(const Expr& e) {
    std::map<std::string, int> out;
    std::multiset<std::string> bound;
    visitFree(e, bound, [&](const Expr& v, const auto&, bool) { ++out[v.text]; });
    return out;
}

int countFree(const Expr& e, const std::string& name) {
    int n = 0;
    std::multiset<std::string> bound;
    visitFree(e, bound, [&](const Expr& v, const auto&, bool) { n += v.text == name; });
    return n;
}

bool canSubstitute(const Expr& e, const std::string& name, const std::set<std::string>& replFree) {
    bool ok = true;
    std::multiset<std::string> bound;
    visitFree(e, bound, [&](const Expr& v, const std::multiset<std::string>& b, bool) {
        if (v.text != name) return;
        for (const auto& r : replFree)
            if (b.count(r)) ok = false;
    });
    return ok;
}

void substituteFree(Expr& e, const std::string& name, const Expr& repl) {
    switch (e.kind) {
        case ExprKind::Var:
            if (e.text == name) {
                auto comments = std::move(e.comments);
                e = repl;
                if (!comments.empty()) e.comments = std::move(comments);
            }
            return;
        case ExprKind::Lambda:
            if (!patBinds(e.params, name)) substituteFree(e.kids[0], name, repl);
            return;
        case ExprKind::Let: {
            bool shadows = e.pat.binds(name);
            if (!(shadows && bindsInBound(e))) substituteFree(e.kids[0], name, repl);
            if (!shadows) substituteFree(e.kids[1], name, repl);
            return;
        }
        default:
            for (auto& k : e.kids) substituteFree(k, name, repl);
    }
}

bool renameFree(Expr& e, const std::string& from, const std::string& to) {
    if (!canSubstitute(e, from, {to})) return false;
    substituteFree(e, from, Expr::var(to));
    return true;
}

bool singleUseAtBinderSite(const Expr& e, const std::string& name) {
    int n = 0;
    bool direct = false;
    std::multiset<std::string> bound;
    visitFree(e, bound, [&](const Expr& v, const auto&, bool d) {
        if (v.text != name) return;
        ++n;
        direct = d;
    });
    return n == 1 && direct;
}

}  // namespace sketchlab
