#include "sketchlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sketchlab {
namespace {

using K = TraceNode::Kind;

bool isConst(const Trace& t, double v) { return t->kind == K::Opaque && t->value == v; }
bool isConst(const Trace& t) { return t->kind == K::Opaque; }

int occurrences(const Trace& t, LocId loc) {
    if (t->kind == K::Loc) return t->loc == loc ? 1 : 0;
    int n = 0;
    for (const auto& a : t->args) n += occurrences(a, loc);
    return n;
}

Trace op(const char* o, Trace a, Trace b) { return opNode(o, {std::move(a), std::move(b)}); }

// Unwind the single path to `target`, applying inverse operations to `other`.
std::optional<Trace> isolate(const Trace& side, Trace other, LocId target) {
    Trace cur = side;
    while (cur->kind == K::Op) {
        const Trace& a = cur->args[0];
        const Trace& b = cur->args[1];
        bool left = traceContains(a, target);
        const std::string& o = cur->op;
        if (left) {
            if (o == "+") other = op("-", other, b);
            else if (o == "-") other = op("+", other, b);
            else if (o == "*") other = op("/", other, b);
            else if (o == "/") other = op("*", other, b);
            else return std::nullopt;
            cur = a;
        } else {
            if (o == "+") other = op("-", other, a);
            else if (o == "-") other = op("-", a, other);
            else if (o == "*") other = op("/", other, a);
            else if (o == "/") other = op("/", a, other);
            else return std::nullopt;
            cur = b;
        }
    }
    if (cur->kind != K::Loc || cur->loc != target) return std::nullopt;
    return other;
}

// a*t + b, with null meaning zero.
struct Linear {
    Trace coef;
    Trace rest;
};

Trace add(const Trace& x, const Trace& y) {
    if (!x) return y;
    if (!y) return x;
    return op("+", x, y);
}

Trace sub(const Trace& x, const Trace& y) {
    if (!y) return x;
    if (!x) return op("-", opaque(0), y);
    return op("-", x, y);
}

Trace mul(const Trace& x, const Trace& k) { return x ? op("*", x, k) : nullptr; }
Trace divide(const Trace& x, const Trace& k) { return x ? op("/", x, k) : nullptr; }

std::optional<Linear> linearize(const Trace& t, LocId target) {
    if (t->kind == K::Loc && t->loc == target) return Linear{opaque(1), nullptr};
    if (!traceContains(t, target)) return Linear{nullptr, t};
    auto l = linearize(t->args[0], target);
    auto r = linearize(t->args[1], target);
    if (!l || !r) return std::nullopt;
    const std::string& o = t->op;
    if (o == "+") return Linear{add(l->coef, r->coef), add(l->rest, r->rest)};
    if (o == "-") return Linear{sub(l->coef, r->coef), sub(l->rest, r->rest)};
    if (o == "*") {
        if (l->coef && r->coef) return std::nullopt;
        if (!l->coef) {
            Trace k = l->rest ? l->rest : opaque(0);
            return Linear{mul(r->coef, k), mul(r->rest, k)};
        }
        Trace k = r->rest ? r->rest : opaque(0);
        return Linear{mul(l->coef, k), mul(l->rest, k)};
    }
    if (o == "/") {
        if (r->coef) return std::nullopt;
        Trace k = r->rest ? r->rest : opaque(0);
        return Linear{divide(l->coef, k), divide(l->rest, k)};
    }
    return std::nullopt;
}

double foldOrNan(const Trace& t, const LocValues& v) {
    try {
        return foldTrace(t, v);
    } catch (const std::exception&) {
        return std::nan("");
    }
}

Trace simplifyOnce(const Trace& t) {
    if (t->kind != K::Op) return t;
    Trace a = simplifyOnce(t->args[0]);
    Trace b = simplifyOnce(t->args[1]);
    const std::string& o = t->op;
    if (isConst(a) && isConst(b)) {
        if (auto r = applyArith(o, a->value, b->value)) return opaque(*r);
    }
    if (o == "+") {
        if (isConst(b, 0)) return a;
        if (isConst(a, 0)) return b;
    } else if (o == "-") {
        if (isConst(b, 0)) return a;
        if (sameTrace(a, b)) return opaque(0);
        // 0 - (0 - x)
        if (isConst(a, 0) && b->kind == K::Op && b->op == "-" && isConst(b->args[0], 0)) return b->args[1];
    } else if (o == "*") {
        if (isConst(b, 1)) return a;
        if (isConst(a, 1)) return b;
        if (isConst(a, 0) || isConst(b, 0)) return opaque(0);
    } else if (o == "/") {
        if (isConst(b, 1)) return a;
        if (sameTrace(a, b) && a->kind == K::Op && a->op == "-") return opaque(1);
    }
    if (a == t->args[0] && b == t->args[1]) return t;
    return opNode(o, {a, b});
}

}  // namespace

bool closeEnough(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(a));
}

std::vector<LocId> candidateLocs(const Equation& eq, const std::set<LocId>* allowed) {
    std::vector<LocId> locs;
    collectLocs(eq.lhs, locs);
    collectLocs(eq.rhs, locs);
    std::sort(locs.begin(), locs.end());
    locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
    auto annot = [&](LocId l) {
        auto it = eq.annots.find(l);
        return it == eq.annots.end() ? Annotation::Plain : it->second;
    };
    std::vector<LocId> out;
    for (int pass = 0; pass < 2; ++pass) {
        Annotation want = pass == 0 ? Annotation::Thawed : Annotation::Plain;
        for (LocId l : locs) {
            if (annot(l) != want) continue;
            if (allowed && !allowed->count(l)) continue;
            out.push_back(l);
        }
    }
    return out;
}

std::optional<LocId> chooseLoc(const Equation& eq, const std::set<LocId>* allowed) {
    auto c = candidateLocs(eq, allowed);
    if (c.empty()) return std::nullopt;
    return c.front();
}

std::optional<Trace> solveForLoc(const Equation& eq, LocId target) {
    int nl = occurrences(eq.lhs, target);
    int nr = occurrences(eq.rhs, target);
    if (nl + nr == 0) return std::nullopt;

    std::optional<Trace> sol;
    if (nl + nr == 1) {
        sol = nl ? isolate(eq.lhs, eq.rhs, target) : isolate(eq.rhs, eq.lhs, target);
    }
    if (!sol) {
        auto l = linearize(eq.lhs, target);
        auto r = linearize(eq.rhs, target);
        if (!l || !r) return std::nullopt;
        Trace a = l->coef ? l->coef : opaque(0);
        Trace c = r->coef ? r->coef : opaque(0);
        Trace b = l->rest ? l->rest : opaque(0);
        Trace d = r->rest ? r->rest : opaque(0);
        double diff = foldOrNan(op("-", a, c), eq.values);
        if (!(std::fabs(diff) > kZeroCoef)) return std::nullopt;
        sol = op("/", op("-", d, b), op("-", a, c));
    }
    Trace s = simplify(*sol);
    if (traceContains(s, target)) return std::nullopt;

    LocValues v = eq.values;
    double tv = foldOrNan(s, v);
    if (!std::isfinite(tv)) return std::nullopt;
    v[target] = tv;
    double lv = foldOrNan(eq.lhs, v);
    double rv = foldOrNan(eq.rhs, v);
    if (!std::isfinite(lv) || !std::isfinite(rv) || !closeEnough(lv, rv)) return std::nullopt;
    return s;
}

Trace simplify(const Trace& t) {
    Trace cur = t;
    for (int i = 0; i < 64; ++i) {
        Trace next = simplifyOnce(cur);
        if (next == cur) break;
        cur = next;
    }
    return cur;
}

}  // namespace sketchlab
