#include "sketchlab/group.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "sketchlab/draw.hpp"
#include "sketchlab/eval.hpp"
#include "sketchlab/features.hpp"
#include "sketchlab/little.hpp"
#include "sketchlab/prelude.hpp"
#include "sketchlab/relate.hpp"
#include "sketchlab/scope.hpp"

namespace sketchlab {
namespace {

const char* const kBoxNames[] = {"left", "top", "right", "bot"};

TopLevel requireSimple(const Program& p) {
    if (!isSimple(p)) throw ToolError("NotSimple", "the program's output is not a blobs list");
    return TopLevel::split(p.root);
}

std::vector<Expr>& blobList(TopLevel& t) { return t.main.kids[1].kids; }

std::optional<size_t> defIndex(const TopLevel& t, const std::string& name) {
    std::optional<size_t> found;
    for (size_t i = 0; i < t.defs.size(); ++i)
        if (!t.defs[i].pat.isList && t.defs[i].pat.name == name) found = i;
    return found;
}

// Definition behind a blob that is a plain name, if any.
std::optional<size_t> blobDef(const TopLevel& t, const Expr& blob) {
    if (blob.kind != ExprKind::Var) return std::nullopt;
    auto i = defIndex(t, blob.text);
    if (i && t.defs[*i].kids[0].kind == ExprKind::Lambda) return std::nullopt;
    return i;
}

void checkIndex(const TopLevel& t, size_t i) {
    if (i >= t.main.kids[1].kids.size()) throw ToolError("BadBlob", "no blob at index " + std::to_string(i));
}

std::vector<size_t> distinctSorted(const TopLevel& t, std::vector<size_t> sel) {
    for (size_t i : sel) checkIndex(t, i);
    std::sort(sel.begin(), sel.end());
    sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
    if (sel.size() < 2) throw ToolError("EmptySelection", "select at least two distinct blobs");
    return sel;
}

std::vector<std::string> defNames(const Expr& d) {
    std::vector<std::string> ns;
    d.pat.boundNames(ns);
    return ns;
}

bool mentions(const Expr& e, const std::vector<std::string>& names) {
    auto fv = freeVars(e);
    return std::any_of(names.begin(), names.end(), [&](const std::string& n) { return fv.count(n) > 0; });
}

void replaceByBody(Expr& let) {
    Expr body = std::move(let.kids[1]);
    if (!let.comments.empty()) body.comments.insert(body.comments.begin(), let.comments.begin(), let.comments.end());
    let = std::move(body);
}

void removeElement(Expr& let, size_t i) {
    if (!let.pat.isList) {
        replaceByBody(let);
        return;
    }
    let.pat.elems.erase(let.pat.elems.begin() + static_cast<long>(i));
    let.kids[0].kids.erase(let.kids[0].kids.begin() + static_cast<long>(i));
    if (let.pat.elems.empty()) {
        replaceByBody(let);
    } else if (let.pat.elems.size() == 1) {
        Pattern p = let.pat.elems[0];
        Expr b = std::move(let.kids[0].kids[0]);
        let.pat = std::move(p);
        let.kids[0] = std::move(b);
    }
}

Expr stripped(Expr e) {
    e.comments.clear();
    e.trailing.clear();
    return e;
}

struct Box {
    double l = std::numeric_limits<double>::infinity(), t = l;
    double r = -l, b = -l;
    void add(double x, double y) {
        l = std::min(l, x), r = std::max(r, x);
        t = std::min(t, y), b = std::max(b, y);
    }
    bool empty() const { return l > r; }
};

void extend(const SvgNode& n, Box& box) {
    auto v = [&](const char* a) { return n.num(a)->value; };
    if (n.num("left") && n.num("right") && n.num("top") && n.num("bot")) {
        box.add(v("left"), v("top"));
        box.add(v("right"), v("bot"));
    } else if (n.num("x1")) {
        box.add(v("x1"), v("y1"));
        box.add(v("x2"), v("y2"));
    } else if (n.num("x") && n.num("width")) {
        box.add(v("x"), v("y"));
        box.add(v("x") + v("width"), v("y") + v("height"));
    } else {
        for (const auto& pt : vertices(n)) box.add(pt.x.value, pt.y.value);
    }
    for (const auto& k : n.children) extend(k, box);
}

// Count binders of each name inside an expression.
void binderCounts(const Expr& e, std::map<std::string, int>& out) {
    std::vector<std::string> ns;
    if (e.kind == ExprKind::Let) e.pat.boundNames(ns);
    if (e.kind == ExprKind::Lambda)
        for (const auto& p : e.params) p.boundNames(ns);
    for (const auto& n : ns) ++out[n];
    for (const auto& k : e.kids) binderCounts(k, out);
}

// Rewrite literals that pin a coordinate to positions relative to the group
// bounds, unless the bound names are shadowed at the literal.
struct Relativizer {
    const std::map<LocId, Axis>& roles;
    Box box;

    Expr relative(double v, Axis a) const {
        double lo = a == Axis::X ? box.l : box.t;
        double hi = a == Axis::X ? box.r : box.b;
        const char* loName = a == Axis::X ? "left" : "top";
        const char* hiName = a == Axis::X ? "right" : "bot";
        if (v == lo) return Expr::var(loName);
        if (v == hi) return Expr::var(hiName);
        double pct = (v - lo) / (hi - lo);
        double rounded = std::round(pct * 100) / 100;
        Expr num = std::fabs(lo + rounded * (hi - lo) - v) <= 1e-6
                       ? Expr::number(rounded, Annotation::Thawed)
                       : Expr::number(pct, formatNumber(pct, 12), Annotation::Thawed);
        return Expr::app(Expr::var("scaleBetween"), {Expr::var(loName), Expr::var(hiName), std::move(num)});
    }

    void walk(Expr& e, std::multiset<std::string>& bound) {
        if (e.kind == ExprKind::Num) {
            auto it = roles.find(e.loc);
            if (it == roles.end() || e.annot == Annotation::Frozen) return;
            Axis a = it->second;
            double lo = a == Axis::X ? box.l : box.t, hi = a == Axis::X ? box.r : box.b;
            bool shadowed = std::any_of(std::begin(kBoxNames), std::end(kBoxNames),
                                        [&](const char* n) { return bound.count(n) > 0; }) ||
                            bound.count("scaleBetween");
            bool degenerate = hi == lo && e.num != lo;
            if (shadowed || degenerate) return;
            auto comments = std::move(e.comments);
            e = relative(e.num, a);
            e.comments = std::move(comments);
            return;
        }
        std::vector<std::string> ns;
        if (e.kind == ExprKind::Lambda) {
            for (const auto& p : e.params) p.boundNames(ns);
            bound.insert(ns.begin(), ns.end());
            walk(e.kids[0], bound);
        } else if (e.kind == ExprKind::Let) {
            e.pat.boundNames(ns);
            bool self = bindsInBound(e);
            if (self) bound.insert(ns.begin(), ns.end());
            walk(e.kids[0], bound);
            if (!self) bound.insert(ns.begin(), ns.end());
            walk(e.kids[1], bound);
        } else {
            for (auto& k : e.kids) walk(k, bound);
            return;
        }
        for (const auto& n : ns) bound.erase(bound.find(n));
    }
};

}  // namespace

Program group(const Program& p, const std::vector<size_t>& blobsSel) {
    TopLevel t = requireSimple(p);
    auto sel = distinctSorted(t, blobsSel);
    const auto& blobs = blobList(t);

    Canvas c = evaluate(p);
    if (c.blobSpans.size() != blobs.size()) throw ToolError("NotSimple", "blob list does not match the canvas");
    std::set<size_t> roots;
    {
        size_t off = 0;
        for (size_t i = 0; i < blobs.size(); ++i) {
            if (std::binary_search(sel.begin(), sel.end(), i))
                for (size_t k = 0; k < c.blobSpans[i]; ++k) roots.insert(off + k);
            off += c.blobSpans[i];
        }
    }
    Box box;
    for (size_t r : roots) extend(c.root[r], box);
    if (box.empty()) throw ToolError("EmptySelection", "the selected blobs draw nothing");

    // Coordinate role of each literal that alone determines an x or y attribute.
    std::map<LocId, std::set<Axis>> axes;
    for (const auto& f : featuresOf(p, c)) {
        if (f.nodePath.empty() || !roots.count(f.nodePath[0])) continue;
        if (f.equation->kind != TraceNode::Kind::Loc) continue;
        axes[f.equation->loc].insert(f.axis);
    }
    std::map<LocId, Axis> roles;
    for (const auto& [loc, as] : axes)
        if (as.size() == 1 && *as.begin() != Axis::Scalar) roles[loc] = *as.begin();

    // Definitions that move: the selected ones, plus helpers used only by moved code.
    std::set<size_t> moved;
    std::vector<Expr> concat;
    for (size_t i : sel) {
        if (auto d = blobDef(t, blobs[i])) moved.insert(*d);
        concat.push_back(c.blobIsShape[i] ? Expr::list({blobs[i]}) : blobs[i]);
    }
    std::set<size_t> selectedDefs = moved;
    Expr mainRest = t.main;
    {
        auto& rest = mainRest.kids[1].kids;
        for (size_t k = sel.size(); k-- > 0;) rest.erase(rest.begin() + static_cast<long>(sel[k]));
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t i = 0; i < t.defs.size(); ++i) {
            if (moved.count(i) || t.defs[i].kids[0].kind == ExprKind::Lambda) continue;
            auto names = defNames(t.defs[i]);
            bool usedByMoved = false, usedElsewhere = mentions(mainRest, names);
            for (size_t j = i + 1; j < t.defs.size(); ++j) {
                if (!mentions(t.defs[j].kids[0], names)) continue;
                (moved.count(j) ? usedByMoved : usedElsewhere) = true;
            }
            if (usedByMoved && !usedElsewhere) {
                moved.insert(i);
                changed = true;
            }
        }
    }

    TopLevel inner;
    std::vector<Expr> boxVals;
    for (double v : {box.l, box.t, box.r, box.b}) boxVals.push_back(Expr::number(v));
    std::vector<Pattern> boxPat;
    for (const char* n : kBoxNames) boxPat.push_back(Pattern::var(n));
    std::vector<Expr> boxVars;
    for (const char* n : kBoxNames) boxVars.push_back(Expr::var(n));
    inner.defs.push_back(Expr::let(Pattern::list(boxPat), Expr::list(std::move(boxVals)), Expr::var("_"), true));
    inner.defs.push_back(Expr::let(Pattern::var("bounds"), Expr::list(boxVars), Expr::var("_"), true));
    for (size_t i : moved)
        if (!selectedDefs.count(i)) inner.defs.push_back(t.defs[i]);
    for (size_t i : moved)
        if (selectedDefs.count(i)) inner.defs.push_back(t.defs[i]);
    inner.main = Expr::list({Expr::app(Expr::var("group"),
                                       {Expr::var("bounds"), Expr::app(Expr::var("concat"), {Expr::list(concat)})})});

    std::set<std::string> reserved = {"left", "top", "right", "bot", "bounds", "group", "concat"};
    for (size_t k = 2; k < inner.defs.size(); ++k)
        for (const auto& [v, n] : freeVars(inner.defs[k].kids[0]))
            if (reserved.count(v)) throw ToolError("NameClash", "grouped code refers to an outer '" + v + "'");
    for (const auto& e : concat)
        for (const auto& [v, n] : freeVars(e))
            if (reserved.count(v)) throw ToolError("NameClash", "grouped code refers to an outer '" + v + "'");

    Relativizer rel{roles, box};
    std::multiset<std::string> bound;
    for (size_t k = 2; k < inner.defs.size(); ++k) rel.walk(inner.defs[k].kids[0], bound);
    rel.walk(inner.main, bound);
    Expr body = inner.join();
    Program tidy{body, {}};
    body = inlineAliases(tidy).root;

    std::string name = nextShapeName(p, "newGroup");
    Expr groupDef = Expr::let(Pattern::var(name), std::move(body), Expr::var("_"), true);

    // The group sits where the last moved definition was, and after anything it uses.
    TopLevel out;
    size_t lastMoved = moved.empty() ? t.defs.size() : *moved.rbegin();
    size_t at = 0;
    for (size_t i = 0; i < t.defs.size(); ++i) {
        if (moved.count(i)) continue;
        out.defs.push_back(t.defs[i]);
        if (i < lastMoved) at = out.defs.size();
    }
    for (size_t i = 0; i < out.defs.size(); ++i)
        if (mentions(groupDef.kids[0], defNames(out.defs[i]))) at = std::max(at, i + 1);
    out.defs.insert(out.defs.begin() + static_cast<long>(at), std::move(groupDef));

    out.main = t.main;
    auto& ob = blobList(out);
    for (size_t k = sel.size(); k-- > 1;) ob.erase(ob.begin() + static_cast<long>(sel[k]));
    ob[sel[0]] = Expr::var(name);

    Program result{out.join(), p.lambdaDefaults};
    assignLocs(result);
    return result;
}

namespace {

struct Binding {
    Expr* let = nullptr;
    size_t elem = 0;
    bool box = false;
};

bool isBoxTuple(const Expr& let) {
    if (!let.pat.isList || let.pat.elems.size() != 4) return false;
    const Expr& b = let.kids[0];
    if (b.kind != ExprKind::List || b.kids.size() != 4) return false;
    for (size_t i = 0; i < 4; ++i) {
        if (let.pat.elems[i].isList || let.pat.elems[i].name != kBoxNames[i]) return false;
        if (b.kids[i].kind != ExprKind::Num || b.kids[i].annot == Annotation::Frozen) return false;
    }
    return true;
}

// First binder, in pre-order, of a non-frozen literal to a name.
std::optional<Binding> nextNamedConstant(Expr& e, bool boxTaken) {
    if (e.kind == ExprKind::Let) {
        if (!boxTaken && isBoxTuple(e)) return Binding{&e, 0, true};
        size_t n = e.pat.isList ? e.pat.elems.size() : 1;
        bool tuple = e.pat.isList && e.kids[0].kind == ExprKind::List && e.kids[0].kids.size() == n;
        for (size_t i = 0; i < n && (tuple || !e.pat.isList); ++i) {
            const Pattern& p = e.pat.isList ? e.pat.elems[i] : e.pat;
            const Expr& b = e.pat.isList ? e.kids[0].kids[i] : e.kids[0];
            if (!p.isList && b.kind == ExprKind::Num && b.annot != Annotation::Frozen) return Binding{&e, i, false};
        }
    }
    for (auto& k : e.kids)
        if (auto b = nextNamedConstant(k, boxTaken)) return b;
    return std::nullopt;
}

// Make the binder's name usable as a parameter of a function wrapping `root`.
std::string claimName(Expr& root, Expr& let, size_t elem, std::set<std::string>& params) {
    Pattern& p = let.pat.isList ? let.pat.elems[elem] : let.pat;
    std::map<std::string, int> binders;
    binderCounts(root, binders);
    bool clash = params.count(p.name) || binders[p.name] > 1 || isPreludeName(p.name);
    // The name must not already refer to something outside.
    clash = clash || freeVars(root).count(p.name) > 0;
    if (clash) {
        std::set<std::string> taken = identifiersOf(root);
        taken.insert(params.begin(), params.end());
        std::string fresh = freshName(taken, p.name);
        std::string old = p.name;
        p.name = fresh;
        substituteFree(let.kids[1], old, Expr::var(fresh));
        if (bindsInBound(let)) substituteFree(let.kids[0], old, Expr::var(fresh));
    }
    params.insert(p.name);
    return p.name;
}

}  // namespace

AbstractResult abstractBlob(const Program& p, size_t idx) {
    TopLevel t = requireSimple(p);
    checkIndex(t, idx);
    const Expr& blob = blobList(t)[idx];
    auto di = blobDef(t, blob);
    if (!di || t.defs[*di].pat.isList) throw ToolError("BadBlob", "only a blob naming a shape definition can be abstracted");
    const std::string name = t.defs[*di].pat.name;
    for (size_t j = 0; j < t.defs.size(); ++j)
        if (j != *di && freeVars(t.defs[j].kids[0]).count(name))
            throw ToolError("BadBlob", "'" + name + "' is used by other definitions");
    if (countFree(t.main, name) != 1) throw ToolError("BadBlob", "'" + name + "' appears more than once in the output");

    Expr body = t.defs[*di].kids[0];
    std::vector<Pattern> params;
    std::vector<Expr> args;
    std::optional<Pattern> boxParam;
    std::vector<Expr> boxArgs;
    std::set<std::string> taken;
    while (auto b = nextNamedConstant(body, boxParam.has_value())) {
        Expr& let = *b->let;
        if (b->box) {
            std::vector<Pattern> ps;
            for (size_t i = 0; i < 4; ++i) ps.push_back(Pattern::var(claimName(body, let, i, taken)));
            boxParam = Pattern::list(std::move(ps));
            for (auto& v : let.kids[0].kids) boxArgs.push_back(stripped(v));
            replaceByBody(let);
            continue;
        }
        std::string n = claimName(body, let, b->elem, taken);
        params.push_back(Pattern::var(n));
        args.push_back(stripped(let.pat.isList ? let.kids[0].kids[b->elem] : let.kids[0]));
        removeElement(let, b->elem);
    }
    if (boxParam) params.push_back(*boxParam);

    AbstractResult r;
    r.function = name;
    r.hasBounds = boxParam.has_value();
    Expr& def = t.defs[*di];
    def.kids[0] = Expr::lambda(std::move(params), std::move(body));
    Expr call = Expr::app(Expr::var(name), args);
    if (boxParam) call = Expr::app(std::move(call), {Expr::list(boxArgs)});
    blobList(t)[idx] = std::move(call);

    r.program = Program{t.join(), p.lambdaDefaults};
    r.program.lambdaDefaults[name] = args;
    assignLocs(r.program);
    return r;
}

Program duplicate(const Program& p, size_t idx) {
    TopLevel t = requireSimple(p);
    checkIndex(t, idx);
    Expr blob = blobList(t)[idx];
    auto di = blobDef(t, blob);
    if (di) {
        if (t.defs[*di].pat.isList) throw ToolError("BadBlob", "blob definition binds a tuple");
        std::string stem = t.defs[*di].pat.name;
        while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
        if (stem.empty()) stem = "shape";
        std::string name = nextShapeName(p, stem);
        Expr copy = t.defs[*di];
        copy.pat.name = name;
        copy.comments.clear();
        t.defs.push_back(std::move(copy));
        blob = Expr::var(name);
    }
    blob.comments.clear();
    blobList(t).push_back(std::move(blob));
    Program out{t.join(), p.lambdaDefaults};
    assignLocs(out);
    return out;
}

namespace {

[[noreturn]] void notEquivalent(const std::string& where) {
    throw ToolError("NotStructurallyEquivalent", "definitions differ at " + where);
}

// Literal positions (pre-order numbering) where the copies disagree.
void compareAll(const std::vector<const Expr*>& es, const std::string& where, size_t& numIdx,
                std::vector<size_t>& differing) {
    const Expr& a = *es[0];
    for (const Expr* b : es) {
        if (b->kind != a.kind) notEquivalent(where);
        bool same = true;
        switch (a.kind) {
            case ExprKind::Str:
            case ExprKind::Var:
            case ExprKind::Op:
                same = a.text == b->text;
                break;
            case ExprKind::Bool:
                same = a.boolean == b->boolean;
                break;
            case ExprKind::Let:
                same = a.pat == b->pat && a.rec == b->rec && a.isDef == b->isDef;
                break;
            case ExprKind::Lambda:
                same = a.params == b->params;
                break;
            default:
                break;
        }
        if (!same || b->kids.size() != a.kids.size()) notEquivalent(where);
    }
    if (a.kind == ExprKind::Num) {
        bool agree = std::all_of(es.begin(), es.end(),
                                 [&](const Expr* b) { return b->num == a.num && b->annot == a.annot; });
        if (!agree) differing.push_back(numIdx);
        ++numIdx;
        return;
    }
    for (size_t k = 0; k < a.kids.size(); ++k) {
        std::vector<const Expr*> sub;
        for (const Expr* b : es) sub.push_back(&b->kids[k]);
        std::string w = a.kind == ExprKind::Let && a.pat.name.size() ? a.pat.name : where;
        compareAll(sub, w, numIdx, differing);
    }
}

// Binder name for literals bound directly by a let element.
void directNames(const Expr& e, std::map<const Expr*, std::string>& out) {
    if (e.kind == ExprKind::Let) {
        const Expr& b = e.kids[0];
        if (!e.pat.isList) {
            if (b.kind == ExprKind::Num) out[&b] = e.pat.name;
        } else if (b.kind == ExprKind::List && b.kids.size() == e.pat.elems.size()) {
            for (size_t i = 0; i < b.kids.size(); ++i)
                if (!e.pat.elems[i].isList && b.kids[i].kind == ExprKind::Num) out[&b.kids[i]] = e.pat.elems[i].name;
        }
    }
    for (const auto& k : e.kids) directNames(k, out);
}

void collectNums(Expr& e, std::vector<Expr*>& out) {
    if (e.kind == ExprKind::Num) out.push_back(&e);
    for (auto& k : e.kids) collectNums(k, out);
}

void collectNums(const Expr& e, std::vector<const Expr*>& out) {
    if (e.kind == ExprKind::Num) out.push_back(&e);
    for (const auto& k : e.kids) collectNums(k, out);
}

// Drop `(let x x ...)` bindings introduced for parameters.
void dropSelfBindings(Expr& e, const std::set<std::string>& params) {
    for (auto& k : e.kids) dropSelfBindings(k, params);
    if (e.kind != ExprKind::Let || bindsInBound(e)) return;
    size_t n = e.pat.isList ? e.pat.elems.size() : 1;
    if (e.pat.isList && (e.kids[0].kind != ExprKind::List || e.kids[0].kids.size() != n)) return;
    for (size_t i = n; i-- > 0;) {
        const Pattern& p = e.pat.isList ? e.pat.elems[i] : e.pat;
        const Expr& b = e.pat.isList ? e.kids[0].kids[i] : e.kids[0];
        if (!p.isList && b.kind == ExprKind::Var && b.text == p.name && params.count(p.name)) {
            removeElement(e, i);
            if (e.kind != ExprKind::Let) return;
        }
    }
}

}  // namespace

Program merge(const Program& p, const std::vector<size_t>& blobsSel) {
    TopLevel t = requireSimple(p);
    auto sel = distinctSorted(t, blobsSel);
    std::vector<size_t> defs;
    for (size_t i : sel) {
        auto d = blobDef(t, blobList(t)[i]);
        if (!d || t.defs[*d].pat.isList) throw ToolError("BadBlob", "only blobs naming shape definitions can be merged");
        if (std::find(defs.begin(), defs.end(), *d) == defs.end()) defs.push_back(*d);
    }
    std::sort(defs.begin(), defs.end());
    if (defs.size() < 2) throw ToolError("EmptySelection", "select at least two distinct definitions");

    std::vector<const Expr*> bodies;
    for (size_t d : defs) bodies.push_back(&t.defs[d].kids[0]);
    size_t numIdx = 0;
    std::vector<size_t> differing;
    compareAll(bodies, t.defs[defs[0]].pat.name, numIdx, differing);

    std::vector<std::vector<const Expr*>> nums(bodies.size());
    for (size_t k = 0; k < bodies.size(); ++k) collectNums(*bodies[k], nums[k]);
    std::map<const Expr*, std::string> binderOf;
    directNames(*bodies[0], binderOf);
    std::map<std::string, int> binders;
    binderCounts(*bodies[0], binders);
    auto free0 = freeVars(*bodies[0]);

    std::set<std::string> taken = identifiersOf(p.root);
    std::set<std::string> chosen;
    std::vector<std::string> paramNames;
    for (size_t pos : differing) {
        auto it = binderOf.find(nums[0][pos]);
        std::string n;
        if (it != binderOf.end() && binders[it->second] == 1 && !chosen.count(it->second) &&
            !free0.count(it->second) && !isPreludeName(it->second)) {
            n = it->second;
        } else {
            n = freshName(taken, "k");
        }
        taken.insert(n);
        chosen.insert(n);
        paramNames.push_back(n);
    }

    Expr body = *bodies[0];
    std::vector<Expr*> slots;
    collectNums(body, slots);
    for (size_t k = 0; k < differing.size(); ++k) {
        Expr* s = slots[differing[k]];
        auto comments = std::move(s->comments);
        *s = Expr::var(paramNames[k]);
        s->comments = std::move(comments);
    }
    dropSelfBindings(body, chosen);

    std::string fn = nextShapeName(p, "merged");
    std::vector<Pattern> params;
    for (const auto& n : paramNames) params.push_back(Pattern::var(n));
    Expr fnDef = Expr::let(Pattern::var(fn), Expr::lambda(std::move(params), std::move(body)), Expr::var("_"), true);

    for (size_t k = 0; k < defs.size(); ++k) {
        std::vector<Expr> args;
        for (size_t pos : differing) args.push_back(stripped(*nums[k][pos]));
        t.defs[defs[k]].kids[0] = Expr::app(Expr::var(fn), std::move(args));
    }
    t.defs.insert(t.defs.begin() + static_cast<long>(defs[0]), std::move(fnDef));

    Program out{t.join(), p.lambdaDefaults};
    assignLocs(out);
    return out;
}

}  // namespace sketchlab
