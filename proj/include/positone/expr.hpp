#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "positone/interval.hpp"

namespace positone {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const { return position_; }  // 0-based offset in input

 private:
  std::size_t position_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class Func { Sin, Cos, Exp, Log, Sqrt, Abs };
enum class NamedConst { Pi, E };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Literal { double value; };
struct Var { int index; };  // 0 = u, 1 = v
struct Param { std::string name; };
struct ConstSym { NamedConst which; };
struct Neg { ExprPtr operand; };
struct Binary { BinOp op; ExprPtr lhs; ExprPtr rhs; };
struct Call { Func fn; ExprPtr arg; };

// Nonlinearity syntax tree. Variables are u (and v for systems); any
// other identifier is a named parameter bound at evaluation time.
struct Expr {
  std::variant<Literal, Var, Param, ConstSym, Neg, Binary, Call> node;
};

using ParamMap = std::map<std::string, double>;

// Axis-aligned evaluation domain, one interval per variable. Domains in
// the certification conditions are subsets of [0,inf)^d.
struct Box {
  int dims = 1;
  std::array<Interval, 2> iv{};

  static Box line(Interval u);
  static Box rect(Interval u, Interval v);
  std::span<const Interval> span() const { return {iv.data(), static_cast<std::size_t>(dims)}; }
  bool valid() const;
  double widest_dim(int* index) const;
};

// Grammar: + - on sums, * / on terms, unary minus, right-associative ^
// binding tighter than unary minus, functions sin cos exp log sqrt abs,
// constants pi and e.
ExprPtr parse(std::string_view text);

std::string to_string(const Expr& e);
bool structurally_equal(const Expr& a, const Expr& b);
int dimension(const Expr& e);  // 1 for f(u), 2 if v occurs
std::set<std::string> parameters(const Expr& e);

double eval(const Expr& e, std::span<const double> point, const ParamMap& params = {});
Interval eval_interval(const Expr& e, std::span<const Interval> box,
                       const ParamMap& params = {});

// Flat postfix form for fast repeated evaluation. Parameters are bound
// when the program is built; evaluation is pure and thread-safe.
class Program {
 public:
  enum class Op : std::uint8_t {
    PushConst, PushVar, Neg, Add, Sub, Mul, Div, Pow, PowInt,
    Sin, Cos, Exp, Log, Sqrt, Abs
  };
  struct Instr {
    Op op;
    double a = 0.0;   // PushConst: lower enclosure bound / point value
    double b = 0.0;   // PushConst: upper enclosure bound
    long k = 0;       // PushVar: variable index; PowInt: exponent
  };

  double eval(std::span<const double> point) const;
  Interval eval_interval(std::span<const Interval> box) const;
  Interval eval_interval(const Box& box) const { return eval_interval(box.span()); }
  int dims() const { return dims_; }
  bool empty() const { return code_.empty(); }

 private:
  friend Program compile(const Expr&, const ParamMap&);
  std::vector<Instr> code_;
  int dims_ = 1;
  int stack_need_ = 0;
};

Program compile(const Expr& e, const ParamMap& params = {});

}  // namespace positone
