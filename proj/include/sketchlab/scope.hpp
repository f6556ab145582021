#pragma once

#include <map>
#include <set>
#include <string>

#include "sketchlab/ast.hpp"

namespace sketchlab {

/// Free variables with occurrence counts.
std::map<std::string, int> freeVars(const Expr& e);

int countFree(const Expr& e, const std::string& name);

/// Whether every free occurrence of `name` in `e` can be replaced by an
/// expression with free variables `replFree` without capture.
bool canSubstitute(const Expr& e, const std::string& name, const std::set<std::string>& replFree);

/// Replace free occurrences of `name` by `repl` (no capture check).
void substituteFree(Expr& e, const std::string& name, const Expr& repl);

/// Rename free occurrences; false and `e` untouched if that would capture.
bool renameFree(Expr& e, const std::string& from, const std::string& to);

/// True if `name` occurs free in `e` exactly once and that occurrence is the
/// bound of a variable binder or an element of a tuple binder's list bound.
bool singleUseAtBinderSite(const Expr& e, const std::string& name);

/// Let `x` names bound in a let/def's own bound (recursive function defs).
bool bindsInBound(const Expr& let);

}  // namespace sketchlab
