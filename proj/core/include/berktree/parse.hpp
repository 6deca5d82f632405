#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "berktree/newton.hpp"

namespace berktree {

// Scalar literals: "7", "-3/10", "p^(1/2)*3", "p^-2*(1/3)", "p".
// Throws InputError on malformed text.
Scalar parse_scalar(FieldTower& tower, std::string_view text);

// Expressions in z built from literals with + - * / ^ and parentheses,
// e.g. "10*z^3 - 3*z^2" or "1/(4*p^2)*z^4 - (p-1)/(3*p^3)*z^3". Division
// is only allowed by constants.
SPoly parse_poly(FieldTower& tower, std::string_view text);

// One literal per coefficient, constant term first.
SPoly parse_coefficients(FieldTower& tower, const std::vector<std::string>& literals);

// Human-readable polynomial, highest degree first.
std::string poly_to_string(const SPoly& f);

}  // namespace berktree
