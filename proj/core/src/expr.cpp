#include "hrtlab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "hrtlab/errors.hpp"
#include "hrtlab/types.hpp"

namespace hrtlab {

namespace {

struct Parser {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& why) {
    throw InvalidSpec("expression error at position " + std::to_string(pos) +
                      ": " + why + " in '" + std::string(s) + "'");
  }

  double expr() {
    double v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }
  double term() {
    double v = factor();
    for (;;) {
      if (eat('*')) {
        v *= factor();
      } else if (eat('/')) {
        const double d = factor();
        if (d == 0.0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }
  double factor() {
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    return primary();
  }
  double primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    if (eat('(')) {
      const double v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(s[pos]))) {
      std::size_t start = pos;
      while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos])))
        ++pos;
      const std::string_view name = s.substr(start, pos - start);
      if (name == "pi") return kPi;
      if (name == "sqrt") {
        if (!eat('(')) fail("sqrt needs '('");
        const double v = expr();
        if (!eat(')')) fail("missing ')'");
        if (v < 0.0) fail("sqrt of a negative number");
        return std::sqrt(v);
      }
      fail("unknown name '" + std::string(name) + "'");
    }
    // number literal
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
            s[pos] == 'e' || s[pos] == 'E' ||
            ((s[pos] == '+' || s[pos] == '-') && pos > start &&
             (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
      ++pos;
    if (pos == start) fail("expected a number");
    double v = 0.0;
    const auto res = std::from_chars(s.data() + start, s.data() + pos, v);
    if (res.ec != std::errc() || res.ptr != s.data() + pos)
      fail("bad number literal");
    return v;
  }
};

}  // namespace

double parse_real_expr(std::string_view text) {
  Parser p{text};
  const double v = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  if (!std::isfinite(v)) p.fail("non-finite value");
  return v;
}

}  // namespace hrtlab
