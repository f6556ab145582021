#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sketchlab/ast.hpp"

namespace sketchlab {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, SrcPos pos)
        : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + msg),
          pos_(pos) {}
    SrcPos pos() const { return pos_; }

private:
    SrcPos pos_;
};

/// Parse a whole program. LocIds are assigned in pre-order.
Program parse(std::string_view source);

/// Parse a single expression (no top-level defs), used for fragments.
Expr parseExpr(std::string_view source);

/// Canonical, human-readable rendering of a program.
std::string unparse(const Program& p);
std::string unparseExpr(const Expr& e, int indent = 0);

/// Literal text with annotation suffix, e.g. `0.90?`.
std::string numText(const Expr& num);

/// Every identifier appearing in the program, bound or referenced.
std::set<std::string> identifiersOf(const Expr& e);

/// `base` followed by the smallest positive integer making a name unused in
/// `p` (and not a prelude name).
std::string freshName(const Program& p, std::string_view base);
std::string freshName(const std::set<std::string>& taken, std::string_view base);

bool isIdentifier(std::string_view s);

}  // namespace sketchlab
