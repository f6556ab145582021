#pragma once

#include <string_view>

#include "sketchlab/ast.hpp"

namespace sketchlab {

/// Source of the standard library, written in `little`.
std::string_view preludeSource();

/// Parsed prelude definitions (a def chain whose final expression is unused).
const Expr& preludeExpr();

/// True for names defined by the prelude or implemented natively.
bool isPreludeName(std::string_view name);

}  // namespace sketchlab
