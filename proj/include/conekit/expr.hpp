#pragma once

#include <memory>
#include <string>

#include "conekit/geometry.hpp"

namespace conekit::expr {

// Minimal arithmetic grammar for test functions of a cone point x:
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := unary ('^' factor)?                        (right assoc)
//   unary   := '-' unary | primary
//   primary := number | 'delta(x)' | 'dot([a1,...,an], x)'
//            | 'exp(' expr ')' | '(' expr ')'
// delta(x) evaluates Delta_V for the cone the expression is bound to.
class Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr parse(const std::string& source);
double evaluate(const NodePtr& root, const ConeModel& cone, const Vec& x);

}  // namespace conekit::expr
