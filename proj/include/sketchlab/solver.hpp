#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "sketchlab/trace.hpp"

namespace sketchlab {

/// lhs = rhs over literal locations, with their current values and annotations.
struct Equation {
    Trace lhs;
    Trace rhs;
    LocValues values;
    std::map<LocId, Annotation> annots;
};

inline constexpr double kVerifyTol = 1e-9;
inline constexpr double kZeroCoef = 1e-12;

/// Locations the solver may eliminate, best first: Thawed before Plain, then
/// by LocId. Frozen and locations outside `allowed` (when given) are dropped.
std::vector<LocId> candidateLocs(const Equation& eq, const std::set<LocId>* allowed = nullptr);

/// First of candidateLocs, or nullopt when there is no degree of freedom.
std::optional<LocId> chooseLoc(const Equation& eq, const std::set<LocId>* allowed = nullptr);

/// Expression for `target` in terms of the other locations that satisfies the
/// equation; nullopt when the equation is not linear in `target`, the
/// coefficient vanishes, or the result fails numeric verification.
std::optional<Trace> solveForLoc(const Equation& eq, LocId target);

/// Local rewrites to a fixpoint; value-preserving.
Trace simplify(const Trace& t);

/// True if |a-b| <= tol * max(1, |a|).
bool closeEnough(double a, double b, double tol = kVerifyTol);

}  // namespace sketchlab
