#include "sketchlab/trace.hpp"

#include <stdexcept>

namespace sketchlab {

Trace locLeaf(LocId loc) {
    auto n = std::make_shared<TraceNode>();
    n->kind = TraceNode::Kind::Loc;
    n->loc = loc;
    return n;
}

Trace opaque(double v) {
    auto n = std::make_shared<TraceNode>();
    n->kind = TraceNode::Kind::Opaque;
    n->value = v;
    return n;
}

Trace opNode(std::string op, std::vector<Trace> args) {
    auto n = std::make_shared<TraceNode>();
    n->kind = TraceNode::Kind::Op;
    n->op = std::move(op);
    n->args = std::move(args);
    return n;
}

std::optional<double> applyArith(const std::string& op, double a, double b) {
    if (op == "+") return a + b;
    if (op == "-") return a - b;
    if (op == "*") return a * b;
    if (op == "/") {
        if (b == 0.0) return std::nullopt;
        return a / b;
    }
    return std::nullopt;
}

double foldTrace(const Trace& t, const LocValues& values) {
    switch (t->kind) {
        case TraceNode::Kind::Loc:
            return values.at(t->loc);
        case TraceNode::Kind::Opaque:
            return t->value;
        case TraceNode::Kind::Op: {
            if (t->args.size() != 2) throw std::domain_error("operator arity");
            double a = foldTrace(t->args[0], values);
            double b = foldTrace(t->args[1], values);
            auto r = applyArith(t->op, a, b);
            if (!r) throw std::domain_error("cannot fold '" + t->op + "'");
            return *r;
        }
    }
    return 0.0;
}

void collectLocs(const Trace& t, std::vector<LocId>& out) {
    if (t->kind == TraceNode::Kind::Loc) out.push_back(t->loc);
    for (const auto& a : t->args) collectLocs(a, out);
}

bool traceContains(const Trace& t, LocId loc) {
    if (t->kind == TraceNode::Kind::Loc) return t->loc == loc;
    for (const auto& a : t->args)
        if (traceContains(a, loc)) return true;
    return false;
}

bool sameTrace(const Trace& a, const Trace& b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case TraceNode::Kind::Loc:
            return a->loc == b->loc;
        case TraceNode::Kind::Opaque:
            return a->value == b->value;
        case TraceNode::Kind::Op:
            if (a->op != b->op || a->args.size() != b->args.size()) return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!sameTrace(a->args[i], b->args[i])) return false;
            return true;
    }
    return false;
}

Trace substitute(const Trace& t, const std::function<Trace(LocId)>& f) {
    if (t->kind == TraceNode::Kind::Loc) {
        Trace r = f(t->loc);
        return r ? r : t;
    }
    if (t->kind == TraceNode::Kind::Opaque) return t;
    std::vector<Trace> args;
    args.reserve(t->args.size());
    for (const auto& a : t->args) args.push_back(substitute(a, f));
    return opNode(t->op, std::move(args));
}

std::string traceToString(const Trace& t) {
    switch (t->kind) {
        case TraceNode::Kind::Loc:
            return "@" + std::to_string(t->loc);
        case TraceNode::Kind::Opaque:
            return formatNumber(t->value, 9) + "!";
        case TraceNode::Kind::Op: {
            std::string s = "(" + t->op;
            for (const auto& a : t->args) s += " " + traceToString(a);
            return s + ")";
        }
    }
    return "?";
}

}  // namespace sketchlab
