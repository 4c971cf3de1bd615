#include "positone/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

namespace positone {

Box Box::line(Interval u) {
  Box b;
  b.dims = 1;
  b.iv[0] = u;
  return b;
}

Box Box::rect(Interval u, Interval v) {
  Box b;
  b.dims = 2;
  b.iv[0] = u;
  b.iv[1] = v;
  return b;
}

bool Box::valid() const {
  if (dims < 1 || dims > 2) return false;
  for (int i = 0; i < dims; ++i)
    if (!iv[i].valid() || iv[i].lo < 0.0) return false;
  return true;
}

double Box::widest_dim(int* index) const {
  int best = 0;
  double w = iv[0].width();
  for (int i = 1; i < dims; ++i)
    if (iv[i].width() > w) { w = iv[i].width(); best = i; }
  if (index) *index = best;
  return w;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

struct Token {
  enum Kind { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
  Kind kind;
  double num = 0.0;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    current_.pos = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::End;
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '+': current_.kind = Token::Plus; ++pos_; return;
      case '-': current_.kind = Token::Minus; ++pos_; return;
      case '*': current_.kind = Token::Star; ++pos_; return;
      case '/': current_.kind = Token::Slash; ++pos_; return;
      case '^': current_.kind = Token::Caret; ++pos_; return;
      case '(': current_.kind = Token::LParen; ++pos_; return;
      case ')': current_.kind = Token::RParen; ++pos_; return;
      case ',': current_.kind = Token::Comma; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      current_.kind = Token::Ident;
      current_.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  void lex_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    // exponent only when it is unambiguously part of the number
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_ + 1;
      if (mark < text_.size() && (text_[mark] == '+' || text_[mark] == '-')) ++mark;
      if (mark < text_.size() && std::isdigit(static_cast<unsigned char>(text_[mark]))) {
        pos_ = mark;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    std::string buf(text_.substr(start, pos_ - start));
    current_.kind = Token::Num;
    current_.num = std::strtod(buf.c_str(), nullptr);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_;
};

// ---------------------------------------------------------------------------
// Recursive-descent parser

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  ExprPtr run() {
    ExprPtr e = parse_sum();
    if (lex_.peek().kind != Token::End)
      throw ParseError("unexpected trailing input", lex_.peek().pos);
    return e;
  }

 private:
  static ExprPtr make(Expr&& e) { return std::make_shared<const Expr>(std::move(e)); }

  // recursion guard against pathologically nested input
  struct DepthGuard {
    explicit DepthGuard(Parser* p) : parser(p) {
      if (++parser->depth_ > 256)
        throw ParseError("expression is too deeply nested", parser->lex_.peek().pos);
    }
    ~DepthGuard() { --parser->depth_; }
    Parser* parser;
  };

  ExprPtr parse_sum() {
    DepthGuard guard(this);
    ExprPtr lhs = parse_term();
    for (;;) {
      Token::Kind k = lex_.peek().kind;
      if (k != Token::Plus && k != Token::Minus) return lhs;
      lex_.take();
      ExprPtr rhs = parse_term();
      lhs = make({Binary{k == Token::Plus ? BinOp::Add : BinOp::Sub, lhs, rhs}});
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      Token::Kind k = lex_.peek().kind;
      if (k != Token::Star && k != Token::Slash) return lhs;
      lex_.take();
      ExprPtr rhs = parse_unary();
      lhs = make({Binary{k == Token::Star ? BinOp::Mul : BinOp::Div, lhs, rhs}});
    }
  }

  ExprPtr parse_unary() {
    DepthGuard guard(this);
    if (lex_.peek().kind == Token::Minus) {
      lex_.take();
      return make({Neg{parse_unary()}});
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (lex_.peek().kind != Token::Caret) return base;
    lex_.take();
    ExprPtr expo = parse_unary();  // right-associative; allows u^-2
    return make({Binary{BinOp::Pow, base, expo}});
  }

  ExprPtr parse_atom() {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::Num:
        return make({Literal{t.num}});
      case Token::LParen: {
        ExprPtr e = parse_sum();
        expect(Token::RParen, "expected ')'");
        return e;
      }
      case Token::Ident:
        return ident_atom(t);
      default:
        throw ParseError("expected a value", t.pos);
    }
  }

  ExprPtr ident_atom(const Token& t) {
    if (t.text == "u") return make({Var{0}});
    if (t.text == "v") return make({Var{1}});
    if (t.text == "pi") return make({ConstSym{NamedConst::Pi}});
    if (t.text == "e") return make({ConstSym{NamedConst::E}});
    static const std::map<std::string, Func> funcs = {
        {"sin", Func::Sin}, {"cos", Func::Cos}, {"exp", Func::Exp},
        {"log", Func::Log}, {"sqrt", Func::Sqrt}, {"abs", Func::Abs}};
    auto it = funcs.find(t.text);
    if (it != funcs.end()) {
      if (lex_.peek().kind != Token::LParen)
        throw ParseError("expected '(' after function '" + t.text + "'", lex_.peek().pos);
      lex_.take();
      ExprPtr arg = parse_sum();
      if (lex_.peek().kind == Token::Comma)
        throw ParseError("function '" + t.text + "' takes one argument", lex_.peek().pos);
      expect(Token::RParen, "expected ')'");
      return make({Call{it->second, arg}});
    }
    if (lex_.peek().kind == Token::LParen)
      throw ParseError("unknown function '" + t.text + "'", t.pos);
    return make({Param{t.text}});
  }

  void expect(Token::Kind k, const char* msg) {
    if (lex_.peek().kind != k) throw ParseError(msg, lex_.peek().pos);
    lex_.take();
  }

  Lexer lex_;
  int depth_ = 0;
};

int precedence(const Expr& e) {
  struct V {
    int operator()(const Literal&) const { return 5; }
    int operator()(const Var&) const { return 5; }
    int operator()(const Param&) const { return 5; }
    int operator()(const ConstSym&) const { return 5; }
    int operator()(const Call&) const { return 5; }
    int operator()(const Neg&) const { return 3; }
    int operator()(const Binary& b) const {
      switch (b.op) {
        case BinOp::Pow: return 4;
        case BinOp::Mul:
        case BinOp::Div: return 2;
        default: return 1;
      }
    }
  };
  return std::visit(V{}, e.node);
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
  }
  return "?";
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExprPtr parse(std::string_view text) { return Parser(text).run(); }

std::string to_string(const Expr& e) {
  struct V {
    std::string wrap(const Expr& child, bool need_paren) const {
      std::string s = to_string(child);
      return need_paren ? "(" + s + ")" : s;
    }
    std::string operator()(const Literal& l) const { return fmt_double(l.value); }
    std::string operator()(const Var& v) const { return v.index == 0 ? "u" : "v"; }
    std::string operator()(const Param& p) const { return p.name; }
    std::string operator()(const ConstSym& c) const {
      return c.which == NamedConst::Pi ? "pi" : "e";
    }
    std::string operator()(const Neg& n) const {
      return "-" + wrap(*n.operand, precedence(*n.operand) < 4);
    }
    std::string operator()(const Call& c) const {
      return std::string(func_name(c.fn)) + "(" + to_string(*c.arg) + ")";
    }
    std::string operator()(const Binary& b) const {
      int p = precedence(Expr{b});
      const char* op = b.op == BinOp::Add   ? "+"
                       : b.op == BinOp::Sub ? "-"
                       : b.op == BinOp::Mul ? "*"
                       : b.op == BinOp::Div ? "/"
                                            : "^";
      bool right_assoc = b.op == BinOp::Pow;
      bool paren_l = right_assoc ? precedence(*b.lhs) <= p : precedence(*b.lhs) < p;
      bool paren_r = right_assoc ? precedence(*b.rhs) < p : precedence(*b.rhs) <= p;
      return wrap(*b.lhs, paren_l) + op + wrap(*b.rhs, paren_r);
    }
  };
  return std::visit(V{}, e.node);
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  struct V {
    const Expr& other;
    bool operator()(const Literal& l) const { return l.value == std::get<Literal>(other.node).value; }
    bool operator()(const Var& v) const { return v.index == std::get<Var>(other.node).index; }
    bool operator()(const Param& p) const { return p.name == std::get<Param>(other.node).name; }
    bool operator()(const ConstSym& c) const { return c.which == std::get<ConstSym>(other.node).which; }
    bool operator()(const Neg& n) const {
      return structurally_equal(*n.operand, *std::get<Neg>(other.node).operand);
    }
    bool operator()(const Binary& x) const {
      const auto& y = std::get<Binary>(other.node);
      return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) && structurally_equal(*x.rhs, *y.rhs);
    }
    bool operator()(const Call& x) const {
      const auto& y = std::get<Call>(other.node);
      return x.fn == y.fn && structurally_equal(*x.arg, *y.arg);
    }
  };
  return std::visit(V{b}, a.node);
}

namespace {

void walk(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  if (const auto* n = std::get_if<Neg>(&e.node)) walk(*n->operand, fn);
  else if (const auto* b = std::get_if<Binary>(&e.node)) {
    walk(*b->lhs, fn);
    walk(*b->rhs, fn);
  } else if (const auto* c = std::get_if<Call>(&e.node)) walk(*c->arg, fn);
}

}  // namespace

int dimension(const Expr& e) {
  int dims = 1;
  walk(e, [&](const Expr& n) {
    if (const auto* v = std::get_if<Var>(&n.node))
      dims = std::max(dims, v->index + 1);
  });
  return dims;
}

std::set<std::string> parameters(const Expr& e) {
  std::set<std::string> out;
  walk(e, [&](const Expr& n) {
    if (const auto* p = std::get_if<Param>(&n.node)) out.insert(p->name);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Tree-walking evaluation (reference implementation)

double eval(const Expr& e, std::span<const double> point, const ParamMap& params) {
  struct V {
    std::span<const double> pt;
    const ParamMap& params;
    double operator()(const Literal& l) const { return l.value; }
    double operator()(const Var& v) const {
      if (v.index >= static_cast<int>(pt.size()))
        throw EvalError("variable 'v' used in a one-variable context");
      return pt[v.index];
    }
    double operator()(const Param& p) const {
      auto it = params.find(p.name);
      if (it == params.end()) throw EvalError("unbound parameter '" + p.name + "'");
      return it->second;
    }
    double operator()(const ConstSym& c) const {
      return c.which == NamedConst::Pi ? M_PI : M_E;
    }
    double operator()(const Neg& n) const { return -eval(*n.operand, pt, params); }
    double operator()(const Binary& b) const {
      double l = eval(*b.lhs, pt, params);
      double r = eval(*b.rhs, pt, params);
      switch (b.op) {
        case BinOp::Add: return l + r;
        case BinOp::Sub: return l - r;
        case BinOp::Mul: return l * r;
        case BinOp::Div:
          if (r == 0.0) throw EvalError("division by zero");
          return l / r;
        case BinOp::Pow: {
          double p = std::pow(l, r);
          if (std::isnan(p)) throw EvalError("power outside real domain");
          return p;
        }
      }
      return 0.0;
    }
    double operator()(const Call& c) const {
      double x = eval(*c.arg, pt, params);
      switch (c.fn) {
        case Func::Sin: return std::sin(x);
        case Func::Cos: return std::cos(x);
        case Func::Exp: return std::exp(x);
        case Func::Log:
          if (x <= 0.0) throw EvalError("log of non-positive value");
          return std::log(x);
        case Func::Sqrt:
          if (x < 0.0) throw EvalError("sqrt of negative value");
          return std::sqrt(x);
        case Func::Abs: return std::abs(x);
      }
      return 0.0;
    }
  };
  double r = std::visit(V{point, params}, e.node);
  if (std::isnan(r)) throw EvalError("evaluation produced NaN");
  return r;
}

Interval eval_interval(const Expr& e, std::span<const Interval> box, const ParamMap& params) {
  struct V {
    std::span<const Interval> box;
    const ParamMap& params;
    Interval operator()(const Literal& l) const { return Interval(l.value); }
    Interval operator()(const Var& v) const {
      if (v.index >= static_cast<int>(box.size()))
        throw EvalError("variable 'v' used in a one-variable context");
      return box[v.index];
    }
    Interval operator()(const Param& p) const {
      auto it = params.find(p.name);
      if (it == params.end()) throw EvalError("unbound parameter '" + p.name + "'");
      return Interval(it->second);
    }
    Interval operator()(const ConstSym& c) const {
      return c.which == NamedConst::Pi ? pi_interval() : e_interval();
    }
    Interval operator()(const Neg& n) const { return -eval_interval(*n.operand, box, params); }
    Interval operator()(const Binary& b) const {
      Interval l = eval_interval(*b.lhs, box, params);
      Interval r = eval_interval(*b.rhs, box, params);
      switch (b.op) {
        case BinOp::Add: return l + r;
        case BinOp::Sub: return l - r;
        case BinOp::Mul: return l * r;
        case BinOp::Div: return l / r;
        case BinOp::Pow: return pow(l, r);
      }
      return Interval();
    }
    Interval operator()(const Call& c) const {
      Interval x = eval_interval(*c.arg, box, params);
      switch (c.fn) {
        case Func::Sin: return sin(x);
        case Func::Cos: return cos(x);
        case Func::Exp: return exp(x);
        case Func::Log: return log(x);
        case Func::Sqrt: return sqrt(x);
        case Func::Abs: return abs(x);
      }
      return Interval();
    }
  };
  return std::visit(V{box, params}, e.node);
}

// ---------------------------------------------------------------------------
// Compilation to postfix programs

namespace {

bool constant_value(const Expr& e, const ParamMap& params, double* out) {
  try {
    bool pure = true;
    walk(e, [&](const Expr& n) {
      if (std::holds_alternative<Var>(n.node)) pure = false;
    });
    if (!pure) return false;
    *out = eval(e, {}, params);
    return true;
  } catch (const EvalError&) {
    return false;
  }
}

struct Compiler {
  std::vector<Program::Instr> code;
  const ParamMap& params;
  int depth = 0, max_depth = 0;

  void push_depth() { max_depth = std::max(max_depth, ++depth); }

  void emit(const Expr& e) {
    if (const auto* l = std::get_if<Literal>(&e.node)) {
      code.push_back({Program::Op::PushConst, l->value, l->value, 0});
      push_depth();
    } else if (const auto* v = std::get_if<Var>(&e.node)) {
      code.push_back({Program::Op::PushVar, 0, 0, v->index});
      push_depth();
    } else if (const auto* p = std::get_if<Param>(&e.node)) {
      auto it = params.find(p->name);
      if (it == params.end()) throw EvalError("unbound parameter '" + p->name + "'");
      code.push_back({Program::Op::PushConst, it->second, it->second, 0});
      push_depth();
    } else if (const auto* c = std::get_if<ConstSym>(&e.node)) {
      Interval enc = c->which == NamedConst::Pi ? pi_interval() : e_interval();
      code.push_back({Program::Op::PushConst, enc.lo, enc.hi, 0});
      push_depth();
    } else if (const auto* n = std::get_if<Neg>(&e.node)) {
      emit(*n->operand);
      code.push_back({Program::Op::Neg});
    } else if (const auto* b = std::get_if<Binary>(&e.node)) {
      if (b->op == BinOp::Pow) {
        double q;
        if (constant_value(*b->rhs, params, &q) && q == std::rint(q) && std::abs(q) < 1e9) {
          emit(*b->lhs);
          code.push_back({Program::Op::PowInt, 0, 0, static_cast<long>(q)});
          return;
        }
      }
      emit(*b->lhs);
      emit(*b->rhs);
      --depth;
      switch (b->op) {
        case BinOp::Add: code.push_back({Program::Op::Add}); break;
        case BinOp::Sub: code.push_back({Program::Op::Sub}); break;
        case BinOp::Mul: code.push_back({Program::Op::Mul}); break;
        case BinOp::Div: code.push_back({Program::Op::Div}); break;
        case BinOp::Pow: code.push_back({Program::Op::Pow}); break;
      }
    } else if (const auto* c2 = std::get_if<Call>(&e.node)) {
      emit(*c2->arg);
      switch (c2->fn) {
        case Func::Sin: code.push_back({Program::Op::Sin}); break;
        case Func::Cos: code.push_back({Program::Op::Cos}); break;
        case Func::Exp: code.push_back({Program::Op::Exp}); break;
        case Func::Log: code.push_back({Program::Op::Log}); break;
        case Func::Sqrt: code.push_back({Program::Op::Sqrt}); break;
        case Func::Abs: code.push_back({Program::Op::Abs}); break;
      }
    }
  }
};

}  // namespace

Program compile(const Expr& e, const ParamMap& params) {
  Compiler c{{}, params};
  c.emit(e);
  Program p;
  p.code_ = std::move(c.code);
  p.dims_ = dimension(e);
  p.stack_need_ = c.max_depth;
  return p;
}

double Program::eval(std::span<const double> point) const {
  if (code_.empty()) throw EvalError("empty program");
  double stack[64];
  stack[0] = 0.0;
  std::vector<double> heap;
  double* sp = stack;
  if (stack_need_ > 64) {
    heap.resize(stack_need_);
    sp = heap.data();
  }
  int top = -1;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::PushConst: sp[++top] = in.a; break;
      case Op::PushVar:
        if (in.k >= static_cast<long>(point.size()))
          throw EvalError("variable 'v' used in a one-variable context");
        sp[++top] = point[in.k];
        break;
      case Op::Neg: sp[top] = -sp[top]; break;
      case Op::Add: --top; sp[top] += sp[top + 1]; break;
      case Op::Sub: --top; sp[top] -= sp[top + 1]; break;
      case Op::Mul: --top; sp[top] *= sp[top + 1]; break;
      case Op::Div:
        --top;
        if (sp[top + 1] == 0.0) throw EvalError("division by zero");
        sp[top] /= sp[top + 1];
        break;
      case Op::Pow: {
        --top;
        double r = std::pow(sp[top], sp[top + 1]);
        if (std::isnan(r)) throw EvalError("power outside real domain");
        sp[top] = r;
        break;
      }
      case Op::PowInt: sp[top] = std::pow(sp[top], static_cast<double>(in.k)); break;
      case Op::Sin: sp[top] = std::sin(sp[top]); break;
      case Op::Cos: sp[top] = std::cos(sp[top]); break;
      case Op::Exp: sp[top] = std::exp(sp[top]); break;
      case Op::Log:
        if (sp[top] <= 0.0) throw EvalError("log of non-positive value");
        sp[top] = std::log(sp[top]);
        break;
      case Op::Sqrt:
        if (sp[top] < 0.0) throw EvalError("sqrt of negative value");
        sp[top] = std::sqrt(sp[top]);
        break;
      case Op::Abs: sp[top] = std::abs(sp[top]); break;
    }
  }
  double r = sp[0];
  if (std::isnan(r)) throw EvalError("evaluation produced NaN");
  return r;
}

Interval Program::eval_interval(std::span<const Interval> box) const {
  if (code_.empty()) throw EvalError("empty program");
  Interval stack[64];
  std::vector<Interval> heap;
  Interval* sp = stack;
  if (stack_need_ > 64) {
    heap.resize(stack_need_);
    sp = heap.data();
  }
  int top = -1;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::PushConst: sp[++top] = Interval(in.a, in.b); break;
      case Op::PushVar:
        if (in.k >= static_cast<long>(box.size()))
          throw EvalError("variable 'v' used in a one-variable context");
        sp[++top] = box[in.k];
        break;
      case Op::Neg: sp[top] = -sp[top]; break;
      case Op::Add: --top; sp[top] = sp[top] + sp[top + 1]; break;
      case Op::Sub: --top; sp[top] = sp[top] - sp[top + 1]; break;
      case Op::Mul: --top; sp[top] = sp[top] * sp[top + 1]; break;
      case Op::Div: --top; sp[top] = sp[top] / sp[top + 1]; break;
      case Op::Pow: --top; sp[top] = pow(sp[top], sp[top + 1]); break;
      case Op::PowInt: sp[top] = pow_int(sp[top], in.k); break;
      case Op::Sin: sp[top] = sin(sp[top]); break;
      case Op::Cos: sp[top] = cos(sp[top]); break;
      case Op::Exp: sp[top] = exp(sp[top]); break;
      case Op::Log: sp[top] = log(sp[top]); break;
      case Op::Sqrt: sp[top] = sqrt(sp[top]); break;
      case Op::Abs: sp[top] = abs(sp[top]); break;
    }
  }
  return sp[0];
}

}  // namespace positone
