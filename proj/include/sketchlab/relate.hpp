#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sketchlab/ast.hpp"
#include "sketchlab/errors.hpp"
#include "sketchlab/trace.hpp"

namespace sketchlab {

struct HoleRecord {
    std::vector<std::string> liftedNames;  // tuple order of the lifted def
    std::vector<std::string> primedNames;  // same order, bound by the hole def
    std::vector<std::string> derivedDefs;
    std::map<LocId, std::string> locNames;  // literal (in the input program) -> lifted name
};

struct DigResult {
    Program program;
    HoleRecord hole;
};

/// Lift the constants behind the selected features into a top-level tuple,
/// add a hole def of primed copies and defs for derived features.
/// Throws ToolError: UnknownFeature, NeedTwoFeatures, NothingToLift.
DigResult digHole(const Program& p, const std::vector<std::string>& featureIds);

/// Relate the selected features by equality, one axis group at a time.
/// Throws ToolError: UnknownFeature, NeedTwoFeatures, SolverFailed.
Program makeEqual(const Program& p, const std::vector<std::string>& featureIds);

/// Remove unused and redundant bindings to a fixpoint.
Program cleanUp(const Program& p);

/// Only the alias-inlining part of cleanUp.
Program inlineAliases(const Program& p);

/// Expression computing a trace; Opaque leaves become frozen literals.
Expr exprOfTrace(const Trace& t, const std::function<std::string(LocId)>& nameOf);

}  // namespace sketchlab
