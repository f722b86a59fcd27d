#include "holosurf/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <iterator>
#include <utility>

namespace holosurf {

namespace {

enum OpCode {
  kPushConst,
  kPushVar,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kNeg,
  kFnBase,  // kFnBase + index into kFunctions
};

using UnaryFn = double (*)(double);

const std::pair<const char*, UnaryFn> kFunctions[] = {
    {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},
    {"sinh", std::sinh}, {"cosh", std::cosh}, {"tanh", std::tanh},
    {"exp", std::exp},   {"log", std::log},   {"sqrt", std::sqrt},
};

class Parser {
 public:
  Parser(const std::string& text, int line, int col0)
      : text_(text), line_(line), col0_(col0) {}

  void parse() {
    skip_space();
    if (at_end()) fail("empty expression", pos_);
    parse_sum();
    skip_space();
    if (!at_end()) fail("unexpected trailing input", pos_);
    check_depth();
  }

  std::vector<Expr::Op> ops;
  int max_var = 0;

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_space() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) {
    throw SpecParseError(msg, line_, col0_ + static_cast<int>(at) + 1);
  }

  // The evaluator runs on a fixed 64-slot stack; the compiled program's
  // peak depth must fit it.
  void check_depth() {
    int depth = 0, peak = 0;
    for (const Expr::Op& op : ops) {
      if (op.code == kPushConst || op.code == kPushVar)
        peak = std::max(peak, ++depth);
      else if (op.code >= kAdd && op.code <= kPow)
        --depth;
    }
    if (peak > 64) fail("expression nests too deeply", 0);
  }

  void parse_sum() {
    parse_product();
    for (;;) {
      skip_space();
      if (at_end() || (peek() != '+' && peek() != '-')) return;
      const char op = text_[pos_++];
      parse_product();
      ops.push_back({op == '+' ? kAdd : kSub, 0, 0});
    }
  }

  void parse_product() {
    parse_unary();
    for (;;) {
      skip_space();
      if (at_end() || (peek() != '*' && peek() != '/')) return;
      const char op = text_[pos_++];
      parse_unary();
      ops.push_back({op == '*' ? kMul : kDiv, 0, 0});
    }
  }

  void parse_unary() {
    if (++nest_ > 256) fail("expression nests too deeply", pos_);
    skip_space();
    if (!at_end() && peek() == '-') {
      ++pos_;
      parse_unary();
      ops.push_back({kNeg, 0, 0});
    } else {
      parse_power();
    }
    --nest_;
  }

  void parse_power() {
    parse_primary();
    skip_space();
    if (!at_end() && peek() == '^') {
      ++pos_;
      parse_unary();  // right associative; exponent may carry its own sign
      ops.push_back({kPow, 0, 0});
    }
  }

  void parse_primary() {
    skip_space();
    if (at_end()) fail("expected a value", pos_);
    const char c = peek();
    if (c == '(') {
      const std::size_t open = pos_++;
      parse_sum();
      skip_space();
      if (at_end() || peek() != ')') fail("unbalanced '('", open);
      ++pos_;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      parse_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      parse_name();
      return;
    }
    fail(std::string("unexpected character '") + c + "'", pos_);
  }

  void parse_number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    ops.push_back({kPushConst, v, 0});
  }

  void parse_name() {
    const std::size_t start = pos_;
    while (!at_end() && std::isalpha(static_cast<unsigned char>(peek())))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    std::size_t digits = pos_;
    while (digits < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[digits])))
      ++digits;

    if (name == "u") {
      if (digits == pos_) fail("parameter needs an index, like u1", start);
      const int var = std::atoi(text_.substr(pos_, digits - pos_).c_str());
      if (var < 1) fail("parameter index must be at least 1", start);
      pos_ = digits;
      ops.push_back({kPushVar, 0, var});
      if (var > max_var) max_var = var;
      return;
    }
    for (std::size_t f = 0; f < std::size(kFunctions); ++f) {
      if (name != kFunctions[f].first) continue;
      skip_space();
      if (at_end() || peek() != '(')
        fail("function '" + name + "' needs parentheses", start);
      const std::size_t open = pos_++;
      parse_sum();
      skip_space();
      if (at_end() || peek() != ')') fail("unbalanced '('", open);
      ++pos_;
      ops.push_back({kFnBase + static_cast<int>(f), 0, 0});
      return;
    }
    fail("unknown function or variable '" + name + "'", start);
  }

  const std::string& text_;
  int line_;
  int col0_;
  std::size_t pos_ = 0;
  int nest_ = 0;
};

}  // namespace

double Expr::eval(const Vec& u) const {
  double stack[64];
  int top = -1;
  for (const Op& op : ops_) {
    switch (op.code) {
      case kPushConst:
        stack[++top] = op.value;
        break;
      case kPushVar:
        stack[++top] = u[static_cast<std::size_t>(op.var - 1)];
        break;
      case kAdd:
        stack[top - 1] += stack[top];
        --top;
        break;
      case kSub:
        stack[top - 1] -= stack[top];
        --top;
        break;
      case kMul:
        stack[top - 1] *= stack[top];
        --top;
        break;
      case kDiv:
        stack[top - 1] /= stack[top];
        --top;
        break;
      case kPow:
        stack[top - 1] = std::pow(stack[top - 1], stack[top]);
        --top;
        break;
      case kNeg:
        stack[top] = -stack[top];
        break;
      default:
        stack[top] = kFunctions[op.code - kFnBase].second(stack[top]);
        break;
    }
  }
  return stack[top];
}

Expr parse_expression(const std::string& text, int line, int col0) {
  Parser p(text, line, col0);
  p.parse();
  Expr e;
  e.ops_ = std::move(p.ops);
  e.max_var_ = p.max_var;
  e.text_ = text;
  return e;
}

}  // namespace holosurf
