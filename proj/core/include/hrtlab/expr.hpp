#pragma once

#include <string_view>

namespace hrtlab {

/// Evaluates the small arithmetic grammar accepted in point and window
/// files: decimal literals, `pi`, `sqrt(expr)`, rationals `p/q`, the four
/// operators and parentheses, unary minus. Throws InvalidSpec on parse
/// errors.
double parse_real_expr(std::string_view text);

}  // namespace hrtlab
