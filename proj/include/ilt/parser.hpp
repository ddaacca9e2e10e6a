#pragma once

#include <string>
#include <vector>

#include "ilt/lpdo.hpp"

namespace ilt {

// Lookup for named operators usable as identifiers inside expressions.
using NameResolver = std::function<const Lpdo*(const std::string&)>;

// Expression grammar shared by field elements and operators:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' exponent)*
//   atom   := integer | identifier | '(' expr ')'
// '*' is explicit and composes noncommutatively left to right; '/' is a field
// operation (both operands must be order 0, so Ore-field constructs like
// Dx/Dy are rejected by the grammar). An identifier 'D<var>' for a declared
// variable is a derivation atom; '^' takes a non-negative integer literal.
Lpdo parse_operator(const std::string& text, const TowerPtr& tower, const NameResolver& names = {});

// Same grammar, but the result must be a field element.
RationalExpr parse_expr(const std::string& text, const TowerPtr& tower, const NameResolver& names = {});

// Plain-text workspace: sections [vars], [generators], [operators], [exprs];
// '#' starts a comment. Variables are listed by name; generator lines read
// `name.var = expr` (missing partials default to 0); the other sections hold
// `name = expression` lines. Names are unique across operators and exprs.
struct Workspace {
    TowerPtr tower;
    std::vector<std::pair<std::string, Lpdo>> operators;
    std::vector<std::pair<std::string, RationalExpr>> exprs;

    const Lpdo* find_operator(const std::string& name) const;
    const RationalExpr* find_expr(const std::string& name) const;
};

Workspace parse_workspace(const std::string& text);
Workspace load_workspace(const std::string& path);

}  // namespace ilt
