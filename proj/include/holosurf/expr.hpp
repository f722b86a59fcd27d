#pragma once

#include <string>
#include <vector>

#include "holosurf/common.hpp"
#include "holosurf/smallmat.hpp"

// Arithmetic expressions over chart parameters u1..un: numbers, + - * / ^,
// unary minus, parentheses, and the functions sin cos tan sinh cosh tanh
// exp log sqrt.  ^ associates right and binds above unary minus.  No
// user-defined functions; the grammar stays small enough to audit.

namespace holosurf {

// Compiled to a postfix program; evaluation is a small stack machine.
class Expr {
 public:
  struct Op {
    int code = 0;      // opcode
    double value = 0;  // push_const payload
    int var = 0;       // push_var payload, 1-based
  };

  double eval(const Vec& u) const;

  // Highest parameter index referenced, 1-based; 0 for constants.
  int max_var() const { return max_var_; }

  const std::string& text() const { return text_; }

 private:
  friend Expr parse_expression(const std::string&, int, int);

  std::vector<Op> ops_;
  int max_var_ = 0;
  std::string text_;
};

// Parses `text`; parse failures throw SpecParseError whose position is
// 1-based and offset by `line` and `col0` so callers embedding expressions
// in larger documents report the original location.
Expr parse_expression(const std::string& text, int line = 1, int col0 = 0);

}  // namespace holosurf
