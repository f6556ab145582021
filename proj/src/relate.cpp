#include "sketchlab/relate.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "sketchlab/eval.hpp"
#include "sketchlab/features.hpp"
#include "sketchlab/little.hpp"
#include "sketchlab/scope.hpp"
#include "sketchlab/solver.hpp"

namespace sketchlab {
namespace {

constexpr double kEqualTol = 1e-6;

std::vector<const Feature*> resolve(const Program& p, const Canvas& c, const std::vector<Feature>& all,
                                    const std::vector<std::string>& ids) {
    std::vector<const Feature*> out;
    auto points = pointsOf(p, c);
    for (const auto& id : ids) {
        if (const Feature* f = findFeature(all, id)) {
            out.push_back(f);
            continue;
        }
        // A point name stands for its two coordinates.
        auto pt = std::find_if(points.begin(), points.end(),
                               [&](const PointFeature& q) { return q.shapeName + "/" + q.name == id; });
        const Feature* fx = pt == points.end() ? nullptr : findFeature(all, pt->xFeature);
        const Feature* fy = pt == points.end() ? nullptr : findFeature(all, pt->yFeature);
        if (!fx || !fy) throw ToolError("UnknownFeature", "no feature named " + id);
        out.push_back(fx);
        out.push_back(fy);
    }
    return out;
}

// Where a literal lives: directly bound by a top-level def (already lifted),
// or somewhere below, with a name built from the enclosing binders.
struct Site {
    bool existing = false;
    size_t defIndex = 0;
    size_t elem = 0;
    std::string name;  // existing: bound name; fresh: suggested base ("" = k-name)
};

bool directElem(const Expr& let, LocId loc, size_t& idx) {
    const Expr& b = let.kids[0];
    if (!let.pat.isList) {
        idx = 0;
        return b.kind == ExprKind::Num && b.loc == loc;
    }
    if (b.kind != ExprKind::List || b.kids.size() != let.pat.elems.size()) return false;
    for (size_t i = 0; i < b.kids.size(); ++i) {
        if (b.kids[i].kind == ExprKind::Num && b.kids[i].loc == loc && !let.pat.elems[i].isList) {
            idx = i;
            return true;
        }
    }
    return false;
}

std::string joinName(const std::string& prefix, const std::string& n) { return prefix.empty() ? n : prefix + "_" + n; }

std::optional<std::string> binderName(const Expr& e, LocId loc, const std::string& prefix) {
    if (e.kind == ExprKind::Num) return e.loc == loc ? std::optional<std::string>("") : std::nullopt;
    if (e.kind == ExprKind::Let) {
        size_t i = 0;
        if (directElem(e, loc, i)) {
            const Pattern& p = e.pat.isList ? e.pat.elems[i] : e.pat;
            return joinName(prefix, p.name);
        }
    }
    for (const auto& k : e.kids)
        if (auto n = binderName(k, loc, prefix)) return n;
    return std::nullopt;
}

Site locate(const TopLevel& t, LocId loc) {
    for (size_t i = 0; i < t.defs.size(); ++i) {
        const Expr& d = t.defs[i];
        size_t idx = 0;
        if (directElem(d, loc, idx)) {
            const Pattern& p = d.pat.isList ? d.pat.elems[idx] : d.pat;
            return {true, i, idx, p.name};
        }
        std::string prefix = d.pat.isList ? "" : d.pat.name;
        if (auto n = binderName(d.kids[0], loc, prefix)) return {false, i, 0, *n};
    }
    auto n = binderName(t.main, loc, "");
    return {false, t.defs.size(), 0, n.value_or("")};
}

Expr tupleDef(const std::vector<std::string>& names, std::vector<Expr> values) {
    if (names.size() == 1) return Expr::let(Pattern::var(names[0]), std::move(values[0]), Expr::var("_"), true);
    std::vector<Pattern> ps;
    for (const auto& n : names) ps.push_back(Pattern::var(n));
    return Expr::let(Pattern::list(std::move(ps)), Expr::list(std::move(values)), Expr::var("_"), true);
}

void dropElement(Expr& def, size_t i) {
    if (!def.pat.isList) return;
    def.pat.elems.erase(def.pat.elems.begin() + static_cast<long>(i));
    def.kids[0].kids.erase(def.kids[0].kids.begin() + static_cast<long>(i));
    if (def.pat.elems.size() == 1) {
        Pattern p = def.pat.elems[0];
        Expr b = std::move(def.kids[0].kids[0]);
        def.pat = std::move(p);
        def.kids[0] = std::move(b);
    }
}

bool usesAny(const Expr& e, const std::set<std::string>& names) {
    for (const auto& [v, n] : freeVars(e))
        if (names.count(v)) return true;
    return false;
}

std::string derivedName(const Feature& f, std::set<std::string>& taken) {
    std::string n = f.shapeName + "_" + f.featureName;
    for (char& ch : n)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') ch = '_';
    if (taken.count(n)) n = freshName(taken, n);
    taken.insert(n);
    return n;
}

}  // namespace

Expr exprOfTrace(const Trace& t, const std::function<std::string(LocId)>& nameOf) {
    switch (t->kind) {
        case TraceNode::Kind::Loc:
            return Expr::var(nameOf(t->loc));
        case TraceNode::Kind::Opaque:
            return Expr::number(t->value, Annotation::Frozen);
        case TraceNode::Kind::Op: {
            std::vector<Expr> args;
            for (const auto& a : t->args) args.push_back(exprOfTrace(a, nameOf));
            return Expr::op(t->op, std::move(args));
        }
    }
    return Expr::number(t->value, Annotation::Frozen);
}

DigResult digHole(const Program& p, const std::vector<std::string>& featureIds) {
    Canvas c = evaluate(p);
    auto all = featuresOf(p, c);
    auto sel = resolve(p, c, all, featureIds);
    if (sel.size() < 2) throw ToolError("NeedTwoFeatures", "select at least two features");

    std::vector<LocId> locs;
    for (const Feature* f : sel) {
        std::vector<LocId> ls;
        collectLocs(f->equation, ls);
        for (LocId l : ls)
            if (std::find(locs.begin(), locs.end(), l) == locs.end()) locs.push_back(l);
    }
    if (locs.empty()) throw ToolError("NothingToLift", "every contributing constant is frozen");

    TopLevel t = TopLevel::split(p.root);
    std::set<std::string> taken = identifiersOf(p.root);

    struct Lift {
        LocId loc;
        Site site;
        std::string name;
        Expr literal;
    };
    std::vector<Lift> existing, fresh;
    for (LocId l : locs) {
        Site s = locate(t, l);
        Expr lit = *findLoc(p.root, l);
        lit.comments.clear();
        lit.trailing.clear();
        if (s.existing) {
            existing.push_back({l, s, s.name, std::move(lit)});
            continue;
        }
        std::string base = s.name.empty() ? "k" : s.name;
        std::string n = base;
        if (s.name.empty() || taken.count(n) || taken.count(n + "'")) n = freshName(taken, base);
        taken.insert(n);
        taken.insert(n + "'");
        fresh.push_back({l, s, n, std::move(lit)});
    }
    // Constants already bound at top level move first, most recently defined first.
    std::stable_sort(existing.begin(), existing.end(), [](const Lift& a, const Lift& b) {
        if (a.site.defIndex != b.site.defIndex) return a.site.defIndex > b.site.defIndex;
        return a.site.elem < b.site.elem;
    });

    HoleRecord hole;
    std::vector<Expr> liftedVals, holeVals;
    for (auto* group : {&existing, &fresh}) {
        for (const auto& lf : *group) {
            hole.liftedNames.push_back(lf.name);
            hole.primedNames.push_back(lf.name + "'");
            hole.locNames[lf.loc] = lf.name;
            liftedVals.push_back(lf.literal);
            holeVals.push_back(Expr::var(lf.name));
        }
    }

    // Fresh sites now read the primed variable.
    for (const auto& lf : fresh) {
        Expr* site = lf.site.defIndex < t.defs.size() ? findLoc(t.defs[lf.site.defIndex], lf.loc)
                                                       : findLoc(t.main, lf.loc);
        auto comments = site->comments;
        *site = Expr::var(lf.name + "'");
        site->comments = std::move(comments);
    }

    // Existing bindings leave their defs, highest element first per def.
    auto byElemDesc = existing;
    std::sort(byElemDesc.begin(), byElemDesc.end(), [](const Lift& a, const Lift& b) {
        if (a.site.defIndex != b.site.defIndex) return a.site.defIndex < b.site.defIndex;
        return a.site.elem > b.site.elem;
    });
    std::set<size_t> emptied;
    for (const auto& lf : byElemDesc) {
        Expr& d = t.defs[lf.site.defIndex];
        if (d.pat.isList && d.pat.elems.size() > 1)
            dropElement(d, lf.site.elem);
        else
            emptied.insert(lf.site.defIndex);
    }
    std::vector<Expr> kept;
    for (size_t i = 0; i < t.defs.size(); ++i)
        if (!emptied.count(i)) kept.push_back(std::move(t.defs[i]));
    t.defs = std::move(kept);

    Expr root = t.join();
    for (const auto& lf : existing) substituteFree(root, lf.name, Expr::var(lf.name + "'"));
    t = TopLevel::split(root);

    std::vector<Expr> inserted;
    inserted.push_back(tupleDef(hole.liftedNames, liftedVals));
    auto nameOf = [&](LocId l) { return hole.locNames.at(l); };
    for (const Feature* f : sel) {
        if (f->kind != FeatureKind::Derived) continue;
        std::string n = derivedName(*f, taken);
        hole.derivedDefs.push_back(n);
        inserted.push_back(Expr::let(Pattern::var(n), exprOfTrace(f->equation, nameOf), Expr::var("_"), true));
    }
    inserted.push_back(tupleDef(hole.primedNames, holeVals));

    std::set<std::string> primed(hole.primedNames.begin(), hole.primedNames.end());
    size_t at = t.defs.size();
    for (size_t i = 0; i < t.defs.size(); ++i) {
        if (usesAny(t.defs[i].kids[0], primed)) {
            at = i;
            break;
        }
    }
    t.defs.insert(t.defs.begin() + static_cast<long>(at), std::make_move_iterator(inserted.begin()),
                  std::make_move_iterator(inserted.end()));

    DigResult r{Program{t.join(), p.lambdaDefaults}, std::move(hole)};
    assignLocs(r.program);
    return r;
}

namespace {

// Solve one axis group: each later feature is made equal to the first.
// Returns solutions keyed by eliminated location, or nullopt.
std::optional<std::map<LocId, Trace>> solveGroup(const std::vector<const Feature*>& fs, const LocValues& values,
                                                 const std::map<LocId, Annotation>& annots) {
    std::map<LocId, Trace> sol;
    auto apply = [&](const Trace& t) {
        return substitute(t, [&](LocId l) -> Trace {
            auto it = sol.find(l);
            return it == sol.end() ? nullptr : it->second;
        });
    };
    for (size_t i = 1; i < fs.size(); ++i) {
        Equation eq{apply(fs[i]->equation), apply(fs[0]->equation), values, annots};
        if (sameTrace(eq.lhs, eq.rhs)) continue;
        std::vector<LocId> lhsLocs, rhsLocs;
        collectLocs(eq.lhs, lhsLocs);
        collectLocs(eq.rhs, rhsLocs);
        std::set<LocId> allowed;
        for (LocId l : lhsLocs)
            if (std::find(rhsLocs.begin(), rhsLocs.end(), l) == rhsLocs.end()) allowed.insert(l);
        // Locations only on the left come first; the rest are a fallback.
        auto cands = candidateLocs(eq, allowed.empty() ? nullptr : &allowed);
        for (LocId l : candidateLocs(eq))
            if (std::find(cands.begin(), cands.end(), l) == cands.end()) cands.push_back(l);
        std::optional<Trace> s;
        LocId target = kNoLoc;
        for (LocId l : cands) {
            if ((s = solveForLoc(eq, l))) {
                target = l;
                break;
            }
        }
        if (!s) return std::nullopt;
        for (auto& [l, t] : sol)
            t = simplify(substitute(t, [&](LocId x) { return x == target ? *s : nullptr; }));
        sol[target] = *s;
    }
    return sol;
}

std::optional<Program> equalizeGroup(const Program& p, const std::vector<std::string>& ids) {
    Canvas c = evaluate(p);
    auto all = featuresOf(p, c);
    auto fs = resolve(p, c, all, ids);
    bool same = std::all_of(fs.begin(), fs.end(), [&](const Feature* f) { return sameTrace(f->equation, fs[0]->equation); });
    if (same) return p;

    auto sol = solveGroup(fs, literalValues(p.root), literalAnnots(p.root));
    if (!sol) return std::nullopt;

    DigResult dug;
    try {
        dug = digHole(p, ids);
    } catch (const ToolError&) {
        return std::nullopt;
    }
    const HoleRecord& h = dug.hole;
    auto nameOf = [&](LocId l) { return h.locNames.at(l); };

    TopLevel t = TopLevel::split(dug.program.root);
    Expr* holeDef = nullptr;
    for (auto& d : t.defs) {
        const std::string& first = d.pat.isList ? d.pat.elems[0].name : d.pat.name;
        if (first == h.primedNames[0]) holeDef = &d;
    }
    if (!holeDef) return std::nullopt;
    for (const auto& [loc, expr] : *sol) {
        auto it = std::find(h.primedNames.begin(), h.primedNames.end(), h.locNames.at(loc) + "'");
        size_t i = static_cast<size_t>(it - h.primedNames.begin());
        Expr e;
        try {
            e = exprOfTrace(expr, nameOf);
        } catch (const std::out_of_range&) {
            return std::nullopt;
        }
        if (holeDef->pat.isList)
            holeDef->kids[0].kids[i] = std::move(e);
        else
            holeDef->kids[0] = std::move(e);
    }
    Program filled{t.join(), p.lambdaDefaults};
    assignLocs(filled);
    Program out = cleanUp(filled);

    try {
        Canvas c2 = evaluate(out);
        auto all2 = featuresOf(out, c2);
        auto fs2 = resolve(out, c2, all2, ids);
        for (const Feature* f : fs2)
            if (std::fabs(f->value - fs2[0]->value) > kEqualTol) return std::nullopt;
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return out;
}

}  // namespace

Program makeEqual(const Program& p, const std::vector<std::string>& featureIds) {
    std::vector<std::string> byAxis[3];
    {
        Canvas c = evaluate(p);
        auto all = featuresOf(p, c);
        auto fs = resolve(p, c, all, featureIds);
        if (fs.size() < 2) throw ToolError("NeedTwoFeatures", "select at least two features");
        for (const Feature* f : fs) byAxis[static_cast<int>(f->axis)].push_back(f->id());
    }
    Program cur = p;
    int attempted = 0, failed = 0;
    std::string failedAxes;
    static const char* axisNames[] = {"x", "y", "scalar"};
    for (int a = 0; a < 3; ++a) {
        if (byAxis[a].size() < 2) continue;
        ++attempted;
        if (auto next = equalizeGroup(cur, byAxis[a])) {
            cur = std::move(*next);
        } else {
            ++failed;
            failedAxes += std::string(failedAxes.empty() ? "" : ", ") + axisNames[a];
        }
    }
    if (attempted == 0) throw ToolError("NeedTwoFeatures", "no two selected features share an axis");
    if (failed == attempted) throw ToolError("SolverFailed", "could not relate " + failedAxes + " features");
    return cur;
}

}  // namespace sketchlab
