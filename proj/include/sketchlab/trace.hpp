#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sketchlab/ast.hpp"

namespace sketchlab {

struct TraceNode;

/// Provenance of a number: which literals and operators produced it.
/// Immutable and shared.
using Trace = std::shared_ptr<const TraceNode>;

struct TraceNode {
    enum class Kind { Loc, Op, Opaque };
    Kind kind = Kind::Opaque;
    LocId loc = kNoLoc;
    std::string op;
    std::vector<Trace> args;
    double value = 0.0;  // Opaque constant
};

Trace locLeaf(LocId loc);
Trace opaque(double v);
Trace opNode(std::string op, std::vector<Trace> args);

/// Current literal values, keyed by location.
using LocValues = std::map<LocId, double>;

/// Apply a binary arithmetic operator; nullopt for division by zero or an
/// unknown operator.
std::optional<double> applyArith(const std::string& op, double a, double b);

/// Evaluate a trace with the given literal values. Throws std::out_of_range
/// for an unknown location and std::domain_error on division by zero.
double foldTrace(const Trace& t, const LocValues& values);

void collectLocs(const Trace& t, std::vector<LocId>& out);
bool traceContains(const Trace& t, LocId loc);
bool sameTrace(const Trace& a, const Trace& b);

/// Replace location leaves via `f`; leaves for which `f` returns null stay.
Trace substitute(const Trace& t, const std::function<Trace(LocId)>& f);

std::string traceToString(const Trace& t);

struct NumVal {
    double value = 0.0;
    Trace trace;
};

}  // namespace sketchlab
