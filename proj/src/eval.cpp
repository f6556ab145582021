#include "sketchlab/eval.hpp"

#include <functional>
#include <memory>

#include "sketchlab/prelude.hpp"

namespace sketchlab {
namespace {

struct Value;
struct Env;
struct Closure;
struct Native;

using EnvPtr = std::shared_ptr<const Env>;
using ListPtr = std::shared_ptr<const std::vector<Value>>;
using ClosurePtr = std::shared_ptr<const Closure>;
using ShapePtr = std::shared_ptr<const SvgNode>;

struct NativeApp {
    const Native* fn = nullptr;
    std::vector<Value> args;
};
using NativePtr = std::shared_ptr<const NativeApp>;

struct Value {
    std::variant<NumVal, std::string, bool, ListPtr, ClosurePtr, NativePtr, ShapePtr> v;
};

struct Env {
    std::string name;
    Value val;
    EnvPtr next;
};

struct Closure {
    std::vector<Pattern> params;
    const Expr* body = nullptr;
    EnvPtr env;
    std::string selfName;  // bound to the closure itself on entry
};

class Interp;
using NativeFn = std::function<Value(Interp&, std::vector<Value>&, SrcPos)>;

struct Native {
    std::string name;
    size_t arity;
    NativeFn fn;
};

EnvPtr extend(EnvPtr env, std::string name, Value v) {
    return std::make_shared<const Env>(Env{std::move(name), std::move(v), std::move(env)});
}

Value mkList(std::vector<Value> xs) { return Value{std::make_shared<const std::vector<Value>>(std::move(xs))}; }
Value mkNum(double v, Trace t) { return Value{NumVal{v, std::move(t)}}; }
Value mkShape(SvgNode n) { return Value{std::make_shared<const SvgNode>(std::move(n))}; }

const char* kindName(const Value& v) {
    switch (v.v.index()) {
        case 0: return "number";
        case 1: return "string";
        case 2: return "boolean";
        case 3: return "list";
        case 6: return "shape";
        default: return "function";
    }
}

const NumVal& asNum(const Value& v, SrcPos pos, const char* ctx) {
    if (auto* n = std::get_if<NumVal>(&v.v)) return *n;
    throw EvalError(std::string(ctx) + ": expected number, got " + kindName(v), pos);
}

const std::vector<Value>& asList(const Value& v, SrcPos pos, const char* ctx) {
    if (auto* l = std::get_if<ListPtr>(&v.v)) return **l;
    throw EvalError(std::string(ctx) + ": expected list, got " + kindName(v), pos);
}

AttrValue asAttr(const Value& v, SrcPos pos, const char* ctx) {
    if (auto* n = std::get_if<NumVal>(&v.v)) return *n;
    if (auto* s = std::get_if<std::string>(&v.v)) return *s;
    throw EvalError(std::string(ctx) + ": expected number or string", pos);
}

void boundsAttrs(SvgNode& n, const Value& bounds, SrcPos pos, const char* ctx) {
    const auto& b = asList(bounds, pos, ctx);
    if (b.size() != 4) throw EvalError(std::string(ctx) + ": bounds must be [left top right bot]", pos);
    static const char* names[] = {"left", "top", "right", "bot"};
    for (size_t i = 0; i < 4; ++i) n.set(names[i], asNum(b[i], pos, ctx));
}

Point asPoint(const Value& v, SrcPos pos, const char* ctx) {
    const auto& xy = asList(v, pos, ctx);
    if (xy.size() != 2) throw EvalError(std::string(ctx) + ": point must be [x y]", pos);
    return Point{asNum(xy[0], pos, ctx), asNum(xy[1], pos, ctx)};
}

void collectShapes(const Value& v, std::vector<SvgNode>& out, SrcPos pos, const char* ctx) {
    if (auto* s = std::get_if<ShapePtr>(&v.v)) {
        out.push_back(**s);
        return;
    }
    for (const auto& x : asList(v, pos, ctx)) collectShapes(x, out, pos, ctx);
}

class Interp {
public:
    std::vector<size_t> blobSpans;
    std::vector<bool> blobIsShape;

    Value eval(const Expr& e, const EnvPtr& env) {
        switch (e.kind) {
            case ExprKind::Num:
                if (e.annot == Annotation::Frozen || e.loc == kNoLoc) return mkNum(e.num, opaque(e.num));
                return mkNum(e.num, locLeaf(e.loc));
            case ExprKind::Str:
                return Value{e.text};
            case ExprKind::Bool:
                return Value{e.boolean};
            case ExprKind::Var:
                for (const Env* p = env.get(); p; p = p->next.get())
                    if (p->name == e.text) return p->val;
                throw EvalError("unbound variable '" + e.text + "'", e.pos);
            case ExprKind::List: {
                std::vector<Value> xs;
                xs.reserve(e.kids.size());
                for (const auto& k : e.kids) xs.push_back(eval(k, env));
                return mkList(std::move(xs));
            }
            case ExprKind::Op:
                return evalOp(e, env);
            case ExprKind::Lambda: {
                if (e.params.empty()) {
                    auto c = std::make_shared<Closure>(Closure{{}, &e.kids[0], env, {}});
                    return Value{ClosurePtr(std::move(c))};
                }
                auto c = std::make_shared<Closure>(Closure{e.params, &e.kids[0], env, {}});
                return Value{ClosurePtr(std::move(c))};
            }
            case ExprKind::App: {
                Value fn = eval(e.kids[0], env);
                std::vector<Value> args;
                args.reserve(e.kids.size() - 1);
                for (size_t i = 1; i < e.kids.size(); ++i) args.push_back(eval(e.kids[i], env));
                return apply(fn, std::move(args), e.pos);
            }
            case ExprKind::Let: {
                const Expr& bound = e.kids[0];
                Value v;
                if ((e.rec || e.isDef) && bound.kind == ExprKind::Lambda && !e.pat.isList) {
                    auto c = std::make_shared<Closure>(Closure{bound.params, &bound.kids[0], env, e.pat.name});
                    v = Value{ClosurePtr(std::move(c))};
                } else {
                    v = eval(bound, env);
                }
                EnvPtr inner = env;
                bind(e.pat, v, inner, e.pos);
                return eval(e.kids[1], inner);
            }
            case ExprKind::If: {
                Value c = eval(e.kids[0], env);
                auto* b = std::get_if<bool>(&c.v);
                if (!b) throw EvalError("if: condition must be a boolean", e.pos);
                return eval(e.kids[*b ? 1 : 2], env);
            }
        }
        throw EvalError("unknown expression", e.pos);
    }

    void bind(const Pattern& p, const Value& v, EnvPtr& env, SrcPos pos) {
        if (!p.isList) {
            env = extend(env, p.name, v);
            return;
        }
        const auto* l = std::get_if<ListPtr>(&v.v);
        if (!l) throw EvalError("pattern expects a list, got " + std::string(kindName(v)), pos);
        if ((*l)->size() != p.elems.size())
            throw EvalError("pattern expects " + std::to_string(p.elems.size()) + " elements, got " +
                                std::to_string((*l)->size()),
                            pos);
        for (size_t i = 0; i < p.elems.size(); ++i) bind(p.elems[i], (**l)[i], env, pos);
    }

    Value apply(const Value& fn, std::vector<Value> args, SrcPos pos) {
        if (auto* cp = std::get_if<ClosurePtr>(&fn.v)) {
            const Closure& c = **cp;
            if (c.params.empty()) {
                if (!args.empty()) throw EvalError("arity mismatch: function takes no arguments", pos);
                return eval(*c.body, c.env);
            }
            if (args.empty()) return fn;  // `(f)` on a function with parameters
            EnvPtr env = c.env;
            if (!c.selfName.empty()) env = extend(env, c.selfName, fn);
            size_t n = std::min(args.size(), c.params.size());
            for (size_t i = 0; i < n; ++i) bind(c.params[i], args[i], env, pos);
            if (n < c.params.size()) {
                std::vector<Pattern> rest(c.params.begin() + static_cast<long>(n), c.params.end());
                return Value{ClosurePtr(std::make_shared<Closure>(Closure{std::move(rest), c.body, env, {}}))};
            }
            Value r = eval(*c.body, env);
            if (args.size() > n) {
                std::vector<Value> more(args.begin() + static_cast<long>(n), args.end());
                return apply(r, std::move(more), pos);
            }
            return r;
        }
        if (auto* np = std::get_if<NativePtr>(&fn.v)) {
            const NativeApp& a = **np;
            std::vector<Value> all = a.args;
            for (auto& x : args) all.push_back(std::move(x));
            if (all.size() < a.fn->arity)
                return Value{NativePtr(std::make_shared<NativeApp>(NativeApp{a.fn, std::move(all)}))};
            if (all.size() > a.fn->arity)
                throw EvalError("arity mismatch: " + a.fn->name + " takes " + std::to_string(a.fn->arity) +
                                    " arguments",
                                pos);
            return a.fn->fn(*this, all, pos);
        }
        throw EvalError(std::string("cannot apply a ") + kindName(fn), pos);
    }

private:
    Value evalOp(const Expr& e, const EnvPtr& env) {
        if (e.kids.size() != 2) throw EvalError("operator '" + e.text + "' takes 2 arguments", e.pos);
        Value a = eval(e.kids[0], env);
        Value b = eval(e.kids[1], env);
        const std::string& op = e.text;
        if (op == "=") {
            if (auto* x = std::get_if<NumVal>(&a.v))
                if (auto* y = std::get_if<NumVal>(&b.v)) return Value{x->value == y->value};
            if (auto* x = std::get_if<std::string>(&a.v))
                if (auto* y = std::get_if<std::string>(&b.v)) return Value{*x == *y};
            return Value{false};
        }
        const NumVal& x = asNum(a, e.pos, op.c_str());
        const NumVal& y = asNum(b, e.pos, op.c_str());
        if (op == "<") return Value{x.value < y.value};
        if (op == ">") return Value{x.value > y.value};
        if (op == "<=") return Value{x.value <= y.value};
        if (op == ">=") return Value{x.value >= y.value};
        auto r = applyArith(op, x.value, y.value);
        if (!r) {
            if (op == "/") throw EvalError("division by zero", e.pos);
            throw EvalError("unknown operator '" + op + "'", e.pos);
        }
        return mkNum(*r, opNode(op, {x.trace, y.trace}));
    }
};

// ---------------------------------------------------------------------------
// natives

Value nRectangle(Interp&, std::vector<Value>& a, SrcPos pos) {
    SvgNode n;
    n.tag = "BOX";
    boundsAttrs(n, a[4], pos, "rectangle");
    n.set("color", asAttr(a[0], pos, "rectangle"));
    n.set("stroke", asAttr(a[1], pos, "rectangle"));
    n.set("strokeWidth", asAttr(a[2], pos, "rectangle"));
    n.set("rot", asNum(a[3], pos, "rectangle"));
    return mkShape(std::move(n));
}

Value nLine(Interp&, std::vector<Value>& a, SrcPos pos) {
    SvgNode n;
    n.tag = "line";
    static const char* names[] = {"x1", "y1", "x2", "y2"};
    for (size_t i = 0; i < 4; ++i) n.set(names[i], asNum(a[2 + i], pos, "line"));
    n.set("color", asAttr(a[0], pos, "line"));
    n.set("width", asAttr(a[1], pos, "line"));
    return mkShape(std::move(n));
}

Value nOval(Interp&, std::vector<Value>& a, SrcPos pos) {
    SvgNode n;
    n.tag = "ellipse";
    boundsAttrs(n, a[3], pos, "oval");
    n.set("color", asAttr(a[0], pos, "oval"));
    n.set("stroke", asAttr(a[1], pos, "oval"));
    n.set("strokeWidth", asAttr(a[2], pos, "oval"));
    return mkShape(std::move(n));
}

Value nPolygon(Interp&, std::vector<Value>& a, SrcPos pos) {
    SvgNode n;
    n.tag = "polygon";
    boundsAttrs(n, a[0], pos, "polygon");
    n.set("color", asAttr(a[1], pos, "polygon"));
    n.set("stroke", asAttr(a[2], pos, "polygon"));
    n.set("strokeWidth", asAttr(a[3], pos, "polygon"));
    std::vector<Point> pts;
    for (const auto& p : asList(a[4], pos, "polygon")) pts.push_back(asPoint(p, pos, "polygon"));
    n.set("points", std::move(pts));
    return mkShape(std::move(n));
}

Value nPath(Interp&, std::vector<Value>& a, SrcPos pos) {
    SvgNode n;
    n.tag = "path";
    boundsAttrs(n, a[0], pos, "path");
    n.set("color", asAttr(a[1], pos, "path"));
    n.set("stroke", asAttr(a[2], pos, "path"));
    n.set("strokeWidth", asAttr(a[3], pos, "path"));
    std::vector<PathCmd> cmds;
    for (const auto& c : asList(a[4], pos, "path")) {
        const auto& parts = asList(c, pos, "path");
        if (parts.empty()) throw EvalError("path: empty command", pos);
        const auto* verb = std::get_if<std::string>(&parts[0].v);
        if (!verb || verb->size() != 1 || std::string("MLQCZ").find((*verb)[0]) == std::string::npos)
            throw EvalError("path: command must start with 'M', 'L', 'Q', 'C' or 'Z'", pos);
        PathCmd pc;
        pc.verb = (*verb)[0];
        size_t want = pc.verb == 'Z' ? 0 : pc.verb == 'Q' ? 2 : pc.verb == 'C' ? 3 : 1;
        if (parts.size() - 1 != want) throw EvalError(std::string("path: wrong point count for ") + pc.verb, pos);
        for (size_t i = 1; i < parts.size(); ++i) pc.pts.push_back(asPoint(parts[i], pos, "path"));
        cmds.push_back(std::move(pc));
    }
    n.set("cmds", std::move(cmds));
    return mkShape(std::move(n));
}

Value nGroup(Interp&, std::vector<Value>& a, SrcPos pos) {
    SvgNode n;
    n.tag = "g";
    boundsAttrs(n, a[0], pos, "group");
    collectShapes(a[1], n.children, pos, "group");
    return mkShape(std::move(n));
}

Value ghostOf(const Value& v, SrcPos pos) {
    if (auto* s = std::get_if<ShapePtr>(&v.v)) {
        SvgNode n = **s;
        n.ghost = true;
        return mkShape(std::move(n));
    }
    std::vector<Value> out;
    for (const auto& x : asList(v, pos, "ghost")) out.push_back(ghostOf(x, pos));
    return mkList(std::move(out));
}

Value nGhost(Interp&, std::vector<Value>& a, SrcPos pos) { return ghostOf(a[0], pos); }

Value nConcat(Interp&, std::vector<Value>& a, SrcPos pos) {
    std::vector<Value> out;
    for (const auto& l : asList(a[0], pos, "concat"))
        for (const auto& x : asList(l, pos, "concat")) out.push_back(x);
    return mkList(std::move(out));
}

Value nBlobs(Interp& in, std::vector<Value>& a, SrcPos pos) {
    std::vector<Value> out;
    std::vector<size_t> spans;
    std::vector<bool> single;
    for (const auto& l : asList(a[0], pos, "blobs")) {
        size_t before = out.size();
        single.push_back(std::holds_alternative<ShapePtr>(l.v));
        if (single.back()) {
            out.push_back(l);
        } else {
            for (const auto& x : asList(l, pos, "blobs")) out.push_back(x);
        }
        spans.push_back(out.size() - before);
    }
    in.blobSpans = std::move(spans);
    in.blobIsShape = std::move(single);
    return mkList(std::move(out));
}

Value nAppend(Interp&, std::vector<Value>& a, SrcPos pos) {
    std::vector<Value> out = asList(a[0], pos, "append");
    for (const auto& x : asList(a[1], pos, "append")) out.push_back(x);
    return mkList(std::move(out));
}

Value nMap(Interp& in, std::vector<Value>& a, SrcPos pos) {
    std::vector<Value> out;
    for (const auto& x : asList(a[1], pos, "map")) out.push_back(in.apply(a[0], {x}, pos));
    return mkList(std::move(out));
}

Value nFirst(Interp&, std::vector<Value>& a, SrcPos pos) {
    const auto& l = asList(a[0], pos, "first");
    if (l.empty()) throw EvalError("first: empty list", pos);
    return l.front();
}

Value nRest(Interp&, std::vector<Value>& a, SrcPos pos) {
    const auto& l = asList(a[0], pos, "rest");
    if (l.empty()) throw EvalError("rest: empty list", pos);
    return mkList(std::vector<Value>(l.begin() + 1, l.end()));
}

Value nCons(Interp&, std::vector<Value>& a, SrcPos pos) {
    std::vector<Value> out{a[0]};
    for (const auto& x : asList(a[1], pos, "cons")) out.push_back(x);
    return mkList(std::move(out));
}

Value nLen(Interp&, std::vector<Value>& a, SrcPos pos) {
    double n = static_cast<double>(asList(a[0], pos, "len").size());
    return mkNum(n, opaque(n));
}

Value nNth(Interp&, std::vector<Value>& a, SrcPos pos) {
    const auto& l = asList(a[0], pos, "nth");
    double i = asNum(a[1], pos, "nth").value;
    if (i < 0 || i >= static_cast<double>(l.size())) throw EvalError("nth: index out of range", pos);
    return l[static_cast<size_t>(i)];
}

const std::vector<Native>& natives() {
    static const std::vector<Native> table = {
        {"rectangle", 5, nRectangle}, {"line", 6, nLine},       {"oval", 4, nOval},
        {"polygonShape", 5, nPolygon}, {"pathShape", 5, nPath},  {"group", 2, nGroup},
        {"ghost", 1, nGhost},          {"concat", 1, nConcat},   {"blobs", 1, nBlobs},
        {"append", 2, nAppend},        {"map", 2, nMap},         {"first", 1, nFirst},
        {"rest", 1, nRest},            {"cons", 2, nCons},       {"len", 1, nLen},
        {"nth", 2, nNth},
    };
    return table;
}

// Environment holding natives and prelude definitions; built once.
const EnvPtr& preludeEnv() {
    static const EnvPtr env = [] {
        EnvPtr e;
        for (const auto& n : natives())
            e = extend(e, n.name, Value{NativePtr(std::make_shared<NativeApp>(NativeApp{&n, {}}))});
        Interp in;
        const Expr* cur = &preludeExpr();
        while (cur->kind == ExprKind::Let && cur->isDef) {
            const Expr& b = cur->kids[0];
            Value v;
            if (b.kind == ExprKind::Lambda && !cur->pat.isList)
                v = Value{ClosurePtr(std::make_shared<Closure>(Closure{b.params, &b.kids[0], e, cur->pat.name}))};
            else
                v = in.eval(b, e);
            in.bind(cur->pat, v, e, cur->pos);
            cur = &cur->kids[1];
        }
        return e;
    }();
    return env;
}

}  // namespace

const AttrValue* SvgNode::attr(std::string_view name) const {
    for (const auto& [k, v] : attrs)
        if (k == name) return &v;
    return nullptr;
}

AttrValue* SvgNode::attr(std::string_view name) {
    for (auto& [k, v] : attrs)
        if (k == name) return &v;
    return nullptr;
}

const NumVal* SvgNode::num(std::string_view name) const {
    const AttrValue* a = attr(name);
    return a ? std::get_if<NumVal>(a) : nullptr;
}

void SvgNode::set(std::string name, AttrValue v) {
    if (AttrValue* a = attr(name)) {
        *a = std::move(v);
        return;
    }
    attrs.emplace_back(std::move(name), std::move(v));
}

LocValues literalValues(const Expr& root) {
    LocValues out;
    forEachNode(root, [&](const Expr& e) {
        if (e.kind == ExprKind::Num && e.loc != kNoLoc) out[e.loc] = e.num;
    });
    return out;
}

std::map<LocId, Annotation> literalAnnots(const Expr& root) {
    std::map<LocId, Annotation> out;
    forEachNode(root, [&](const Expr& e) {
        if (e.kind == ExprKind::Num && e.loc != kNoLoc) out[e.loc] = e.annot;
    });
    return out;
}

std::vector<Point> vertices(const SvgNode& n) {
    std::vector<Point> out;
    if (const AttrValue* a = n.attr("points"))
        if (auto* ps = std::get_if<std::vector<Point>>(a)) out = *ps;
    if (const AttrValue* a = n.attr("cmds"))
        if (auto* cs = std::get_if<std::vector<PathCmd>>(a))
            for (const auto& c : *cs) out.insert(out.end(), c.pts.begin(), c.pts.end());
    return out;
}

const NumVal* numericAttr(const SvgNode& n, std::string_view name) {
    if (name.rfind("point:", 0) != 0) return n.num(name);
    auto rest = name.substr(6);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) return nullptr;
    size_t idx = 0;
    for (char ch : rest.substr(0, colon)) {
        if (ch < '0' || ch > '9') return nullptr;
        idx = idx * 10 + static_cast<size_t>(ch - '0');
    }
    auto axis = rest.substr(colon + 1);
    size_t k = 0;
    auto pick = [&](const Point& p) -> const NumVal* {
        if (axis == "x") return &p.x;
        if (axis == "y") return &p.y;
        return nullptr;
    };
    if (const AttrValue* a = n.attr("points"))
        if (auto* ps = std::get_if<std::vector<Point>>(a)) return idx < ps->size() ? pick((*ps)[idx]) : nullptr;
    if (const AttrValue* a = n.attr("cmds"))
        if (auto* cs = std::get_if<std::vector<PathCmd>>(a))
            for (const auto& c : *cs)
                for (const auto& p : c.pts)
                    if (k++ == idx) return pick(p);
    return nullptr;
}

std::vector<std::string> numericAttrNames(const SvgNode& n) {
    std::vector<std::string> out;
    for (const auto& [k, v] : n.attrs)
        if (std::holds_alternative<NumVal>(v)) out.push_back(k);
    size_t nv = vertices(n).size();
    for (size_t i = 0; i < nv; ++i) {
        out.push_back("point:" + std::to_string(i) + ":x");
        out.push_back("point:" + std::to_string(i) + ":y");
    }
    return out;
}

Canvas evaluate(const Program& p) {
    Interp in;
    Value v = in.eval(p.root, preludeEnv());
    Canvas c;
    collectShapes(v, c.root, {}, "program output");
    c.traceStore = literalValues(p.root);
    if (isSimple(p)) {
        c.blobSpans = std::move(in.blobSpans);
        c.blobIsShape = std::move(in.blobIsShape);
    }
    return c;
}

const SvgNode* nodeAt(const Canvas& c, const std::vector<size_t>& path) {
    if (path.empty() || path[0] >= c.root.size()) return nullptr;
    const SvgNode* n = &c.root[path[0]];
    for (size_t i = 1; i < path.size(); ++i) {
        if (path[i] >= n->children.size()) return nullptr;
        n = &n->children[path[i]];
    }
    return n;
}

}  // namespace sketchlab
