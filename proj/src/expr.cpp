// Expression trees for scalar fields: construction with constant folding,
// recursive-descent parser, symbolic differentiation, memoized evaluation.

#include "kyt/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace kyt {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return static_cast<std::int64_t>(r.get_si());
}

std::int64_t factorial_ratio_ky(int n, int p) {
  mpz_class a, b, c;
  mpz_fac_ui(a.get_mpz_t(), n + 1);
  mpz_fac_ui(b.get_mpz_t(), p + 1);
  mpz_fac_ui(c.get_mpz_t(), n - p);
  mpz_class r = a / (b * c);
  return static_cast<std::int64_t>(r.get_si());
}

std::int64_t factorial_ratio_kt(int n, int p) {
  mpz_class a, b, c, d, e, f;
  mpz_fac_ui(a.get_mpz_t(), n + p - 1);
  mpz_fac_ui(b.get_mpz_t(), n + p);
  mpz_fac_ui(c.get_mpz_t(), n - 1);
  mpz_fac_ui(d.get_mpz_t(), n);
  mpz_fac_ui(e.get_mpz_t(), p);
  mpz_fac_ui(f.get_mpz_t(), p + 1);
  mpz_class r = (a * b) / (c * d * e * f);
  return static_cast<std::int64_t>(r.get_si());
}

ParseError::ParseError(const std::string& message, std::size_t byte_offset)
    : std::runtime_error(message + " (at byte " + std::to_string(byte_offset) + ")"),
      offset_(byte_offset) {}

EvalError::EvalError(const std::string& message, std::string subexpression)
    : std::runtime_error(message + " in `" + subexpression + "`"),
      subexpr_(std::move(subexpression)) {}

namespace detail {

enum class Kind { constant, coord, add, sub, neg, mul, div, pow_int, func };
enum class Func { exp_, ln_, sin_, cos_, sqrt_ };

struct Expr {
  Kind kind;
  Rational value;    // constant
  int index = 0;     // coord (1-based)
  long exponent = 0; // pow_int
  Func func = Func::exp_;
  ExprPtr a, b;
};

namespace {

ExprPtr make_const(const Rational& v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::constant;
  e->value = v;
  return e;
}

ExprPtr make_coord(int i) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::coord;
  e->index = i;
  return e;
}

bool is_const(const ExprPtr& e) { return e->kind == Kind::constant; }
bool is_const(const ExprPtr& e, long v) {
  return e->kind == Kind::constant && e->value == v;
}

ExprPtr make_neg(const ExprPtr& a) {
  if (is_const(a)) return make_const(-a->value);
  if (a->kind == Kind::neg) return a->a;
  auto e = std::make_shared<Expr>();
  e->kind = Kind::neg;
  e->a = a;
  return e;
}

ExprPtr make_add(const ExprPtr& a, const ExprPtr& b) {
  if (is_const(a) && is_const(b)) return make_const(a->value + b->value);
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  auto e = std::make_shared<Expr>();
  e->kind = Kind::add;
  e->a = a;
  e->b = b;
  return e;
}

ExprPtr make_sub(const ExprPtr& a, const ExprPtr& b) {
  if (is_const(a) && is_const(b)) return make_const(a->value - b->value);
  if (is_const(b, 0)) return a;
  if (is_const(a, 0)) return make_neg(b);
  auto e = std::make_shared<Expr>();
  e->kind = Kind::sub;
  e->a = a;
  e->b = b;
  return e;
}

ExprPtr make_mul(const ExprPtr& a, const ExprPtr& b) {
  if (is_const(a) && is_const(b)) return make_const(a->value * b->value);
  if (is_const(a, 0) || is_const(b, 0)) return make_const(Rational(0));
  if (is_const(a, 1)) return b;
  if (is_const(b, 1)) return a;
  auto e = std::make_shared<Expr>();
  e->kind = Kind::mul;
  e->a = a;
  e->b = b;
  return e;
}

ExprPtr make_div(const ExprPtr& a, const ExprPtr& b) {
  if (is_const(b) && b->value != 0) {
    if (is_const(a)) return make_const(a->value / b->value);
    return make_mul(make_const(1 / Rational(b->value)), a);
  }
  if (is_const(a, 0) && !is_const(b, 0)) return a;
  auto e = std::make_shared<Expr>();
  e->kind = Kind::div;
  e->a = a;
  e->b = b;
  return e;
}

ExprPtr make_pow(const ExprPtr& a, long k) {
  if (k == 0) return make_const(Rational(1));
  if (k == 1) return a;
  if (is_const(a) && (k > 0 || a->value != 0)) {
    Rational r(1);
    Rational base = k > 0 ? a->value : 1 / Rational(a->value);
    for (long i = 0; i < std::labs(k); ++i) r *= base;
    return make_const(r);
  }
  auto e = std::make_shared<Expr>();
  e->kind = Kind::pow_int;
  e->a = a;
  e->exponent = k;
  return e;
}

ExprPtr make_func(Func f, const ExprPtr& a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::func;
  e->func = f;
  e->a = a;
  return e;
}

const char* func_name(Func f) {
  switch (f) {
    case Func::exp_: return "exp";
    case Func::ln_: return "ln";
    case Func::sin_: return "sin";
    case Func::cos_: return "cos";
    case Func::sqrt_: return "sqrt";
  }
  return "?";
}

// Printing with minimal parentheses; `^` binds tightest, then unary minus,
// then * and /, then + and -.
int precedence(const Expr* e) {
  switch (e->kind) {
    case Kind::add:
    case Kind::sub: return 1;
    case Kind::mul:
    case Kind::div: return 2;
    case Kind::neg: return 3;
    case Kind::pow_int: return 4;
    default: return 5;
  }
}

void print(const Expr* e, std::ostream& os) {
  auto child = [&os](const Expr* c, int min_prec) {
    if (precedence(c) < min_prec) {
      os << '(';
      print(c, os);
      os << ')';
    } else {
      print(c, os);
    }
  };
  switch (e->kind) {
    case Kind::constant: {
      if (e->value < 0) {
        os << '(' << e->value.get_str() << ')';
      } else {
        os << e->value.get_str();
      }
      break;
    }
    case Kind::coord: os << 'x' << e->index; break;
    case Kind::add:
      child(e->a.get(), 1);
      os << " + ";
      child(e->b.get(), 2);
      break;
    case Kind::sub:
      child(e->a.get(), 1);
      os << " - ";
      child(e->b.get(), 2);
      break;
    case Kind::mul:
      child(e->a.get(), 2);
      os << "*";
      child(e->b.get(), 3);
      break;
    case Kind::div:
      child(e->a.get(), 2);
      os << "/";
      child(e->b.get(), 3);
      break;
    case Kind::neg:
      os << '-';
      child(e->a.get(), 3);
      break;
    case Kind::pow_int:
      child(e->a.get(), 5);
      os << '^' << e->exponent;
      break;
    case Kind::func:
      os << func_name(e->func) << '(';
      print(e->a.get(), os);
      os << ')';
      break;
  }
}

std::string to_text(const Expr* e) {
  std::ostringstream os;
  print(e, os);
  return os.str();
}

double eval_node(const Expr* e, EvalContext& ctx) {
  auto& memo = ctx.memo();
  if (auto it = memo.find(e); it != memo.end()) return it->second;

  double r = 0;
  switch (e->kind) {
    case Kind::constant: r = e->value.get_d(); break;
    case Kind::coord: r = ctx.point()[e->index - 1]; break;
    case Kind::add: r = eval_node(e->a.get(), ctx) + eval_node(e->b.get(), ctx); break;
    case Kind::sub: r = eval_node(e->a.get(), ctx) - eval_node(e->b.get(), ctx); break;
    case Kind::neg: r = -eval_node(e->a.get(), ctx); break;
    case Kind::mul: r = eval_node(e->a.get(), ctx) * eval_node(e->b.get(), ctx); break;
    case Kind::div: {
      double den = eval_node(e->b.get(), ctx);
      if (den == 0.0) throw EvalError("division by zero", to_text(e));
      r = eval_node(e->a.get(), ctx) / den;
      break;
    }
    case Kind::pow_int: {
      double base = eval_node(e->a.get(), ctx);
      long k = e->exponent;
      if (base == 0.0 && k < 0) throw EvalError("zero base with negative exponent", to_text(e));
      double acc = 1.0, b = k > 0 ? base : 1.0 / base;
      for (long m = std::labs(k); m > 0; m >>= 1) {
        if (m & 1) acc *= b;
        b *= b;
      }
      r = acc;
      break;
    }
    case Kind::func: {
      double v = eval_node(e->a.get(), ctx);
      switch (e->func) {
        case Func::exp_: r = std::exp(v); break;
        case Func::ln_:
          if (v <= 0.0) throw EvalError("ln of non-positive argument", to_text(e));
          r = std::log(v);
          break;
        case Func::sin_: r = std::sin(v); break;
        case Func::cos_: r = std::cos(v); break;
        case Func::sqrt_:
          if (v <= 0.0) throw EvalError("sqrt of non-positive argument", to_text(e));
          r = std::sqrt(v);
          break;
      }
      break;
    }
  }
  if (!std::isfinite(r)) throw EvalError("non-finite value", to_text(e));
  memo.emplace(e, r);
  return r;
}

using DiffMemo = std::unordered_map<const Expr*, ExprPtr>;

ExprPtr diff_node(const ExprPtr& e, int i, DiffMemo& memo) {
  if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
  ExprPtr r;
  switch (e->kind) {
    case Kind::constant: r = make_const(Rational(0)); break;
    case Kind::coord: r = make_const(Rational(e->index == i ? 1 : 0)); break;
    case Kind::add: r = make_add(diff_node(e->a, i, memo), diff_node(e->b, i, memo)); break;
    case Kind::sub: r = make_sub(diff_node(e->a, i, memo), diff_node(e->b, i, memo)); break;
    case Kind::neg: r = make_neg(diff_node(e->a, i, memo)); break;
    case Kind::mul:
      r = make_add(make_mul(diff_node(e->a, i, memo), e->b),
                   make_mul(e->a, diff_node(e->b, i, memo)));
      break;
    case Kind::div:
      // (a/b)' = (a'b - ab') / b^2
      r = make_div(make_sub(make_mul(diff_node(e->a, i, memo), e->b),
                            make_mul(e->a, diff_node(e->b, i, memo))),
                   make_pow(e->b, 2));
      break;
    case Kind::pow_int:
      r = make_mul(make_const(Rational(e->exponent)),
                   make_mul(make_pow(e->a, e->exponent - 1), diff_node(e->a, i, memo)));
      break;
    case Kind::func: {
      ExprPtr da = diff_node(e->a, i, memo);
      switch (e->func) {
        case Func::exp_: r = make_mul(e, da); break;
        case Func::ln_: r = make_div(da, e->a); break;
        case Func::sin_: r = make_mul(make_func(Func::cos_, e->a), da); break;
        case Func::cos_: r = make_neg(make_mul(make_func(Func::sin_, e->a), da)); break;
        case Func::sqrt_:
          r = make_div(da, make_mul(make_const(Rational(2)), e));
          break;
      }
      break;
    }
  }
  memo.emplace(e.get(), r);
  return r;
}

// --- parser -----------------------------------------------------------------

struct Token {
  enum Type { number, coord, name, plus, minus, star, slash, caret, lparen, rparen, end };
  Type type;
  std::size_t offset;
  Rational value;   // number
  int index = 0;    // coord
  std::string text; // name
};

class Lexer {
 public:
  Lexer(std::string_view text, int n) : text_(text), n_(n) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    tok_.offset = pos_;
    if (pos_ >= text_.size()) {
      tok_.type = Token::end;
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '+': tok_.type = Token::plus; ++pos_; return;
      case '-': tok_.type = Token::minus; ++pos_; return;
      case '*': tok_.type = Token::star; ++pos_; return;
      case '/': tok_.type = Token::slash; ++pos_; return;
      case '^': tok_.type = Token::caret; ++pos_; return;
      case '(': tok_.type = Token::lparen; ++pos_; return;
      case ')': tok_.type = Token::rparen; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isalnum(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      std::string word(text_.substr(start, pos_ - start));
      if (word.size() > 1 && word[0] == 'x' &&
          std::isdigit(static_cast<unsigned char>(word[1]))) {
        for (std::size_t k = 1; k < word.size(); ++k)
          if (!std::isdigit(static_cast<unsigned char>(word[k])))
            throw ParseError("malformed coordinate name `" + word + "`", start);
        int idx = std::stoi(word.substr(1));
        if (idx < 1 || idx > n_)
          throw ParseError("coordinate index out of range: `" + word + "` with n=" +
                               std::to_string(n_),
                           start);
        tok_.type = Token::coord;
        tok_.index = idx;
        return;
      }
      tok_.type = Token::name;
      tok_.text = word;
      return;
    }
    throw ParseError(std::string("unexpected character `") + c + "`", pos_);
  }

  // Digits with optional fractional part and decimal exponent, converted
  // exactly to a rational.
  void lex_number() {
    std::size_t start = pos_;
    std::string digits;
    long scale = 0;
    bool any = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      digits += text_[pos_++];
      any = true;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits += text_[pos_++];
        --scale;
        any = true;
      }
    }
    if (!any) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_ + 1;
      long sign = 1;
      if (mark < text_.size() && (text_[mark] == '+' || text_[mark] == '-')) {
        if (text_[mark] == '-') sign = -1;
        ++mark;
      }
      if (mark < text_.size() && std::isdigit(static_cast<unsigned char>(text_[mark]))) {
        long ex = 0;
        pos_ = mark;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ex = ex * 10 + (text_[pos_++] - '0');
        scale += sign * ex;
      }
    }
    Rational v(mpz_class(digits.empty() ? "0" : digits, 10));
    mpz_class ten = 10;
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::labs(scale)));
    if (scale >= 0) {
      v *= Rational(p);
    } else {
      v /= Rational(p);
    }
    v.canonicalize();
    tok_.type = Token::number;
    tok_.value = v;
  }

  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(std::string_view text, int n) : lex_(text, n) {}

  ExprPtr run() {
    ExprPtr e = parse_sum();
    const Token& t = lex_.peek();
    if (t.type != Token::end) throw ParseError("trailing input", t.offset);
    return e;
  }

 private:
  ExprPtr parse_sum() {
    ExprPtr e = parse_term();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.type == Token::plus) {
        lex_.take();
        e = make_add(e, parse_term());
      } else if (t.type == Token::minus) {
        lex_.take();
        e = make_sub(e, parse_term());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_unary();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.type == Token::star) {
        lex_.take();
        e = make_mul(e, parse_unary());
      } else if (t.type == Token::slash) {
        lex_.take();
        e = make_div(e, parse_unary());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_unary() {
    if (lex_.peek().type == Token::minus) {
      lex_.take();
      return make_neg(parse_unary());
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (lex_.peek().type != Token::caret) return base;
    lex_.take();
    long sign = 1;
    if (lex_.peek().type == Token::minus) {
      lex_.take();
      sign = -1;
    }
    Token t = lex_.take();
    if (t.type != Token::number || t.value.get_den() != 1)
      throw ParseError("exponent must be an integer literal", t.offset);
    long k = t.value.get_num().get_si();
    return make_pow(base, sign * k);
  }

  ExprPtr parse_primary() {
    Token t = lex_.take();
    switch (t.type) {
      case Token::number: return make_const(t.value);
      case Token::coord: return make_coord(t.index);
      case Token::lparen: {
        ExprPtr e = parse_sum();
        Token close = lex_.take();
        if (close.type != Token::rparen) throw ParseError("expected `)`", close.offset);
        return e;
      }
      case Token::name: {
        Func f;
        if (t.text == "exp") f = Func::exp_;
        else if (t.text == "ln") f = Func::ln_;
        else if (t.text == "sin") f = Func::sin_;
        else if (t.text == "cos") f = Func::cos_;
        else if (t.text == "sqrt") f = Func::sqrt_;
        else throw ParseError("unknown function `" + t.text + "`", t.offset);
        Token open = lex_.take();
        if (open.type != Token::lparen) throw ParseError("expected `(`", open.offset);
        ExprPtr arg = parse_sum();
        Token close = lex_.take();
        if (close.type != Token::rparen) throw ParseError("expected `)`", close.offset);
        return make_func(f, arg);
      }
      default: throw ParseError("expected expression", t.offset);
    }
  }

  Lexer lex_;
};

}  // namespace
}  // namespace detail

using detail::Expr;

ScalarField ScalarField::constant(int n, const Rational& value) {
  return ScalarField(n, detail::make_const(value));
}

ScalarField ScalarField::coordinate(int n, int index) {
  if (index < 1 || index > n)
    throw std::invalid_argument("coordinate index out of range");
  return ScalarField(n, detail::make_coord(index));
}

ScalarField ScalarField::parse(std::string_view text, int n) {
  detail::Parser p(text, n);
  return ScalarField(n, p.run());
}

bool ScalarField::is_zero() const {
  return node_ && node_->kind == detail::Kind::constant && node_->value == 0;
}

bool ScalarField::is_constant() const {
  return node_ && node_->kind == detail::Kind::constant;
}

ScalarField ScalarField::diff(int index) const {
  if (index < 1 || index > n_)
    throw std::invalid_argument("diff index out of range");
  detail::DiffMemo memo;
  return ScalarField(n_, detail::diff_node(node_, index, memo));
}

double ScalarField::eval(std::span<const double> x) const {
  EvalContext ctx(x);
  return eval(ctx);
}

double ScalarField::eval(EvalContext& ctx) const {
  if (static_cast<int>(ctx.point().size()) < n_)
    throw std::invalid_argument("point has too few coordinates");
  return detail::eval_node(node_.get(), ctx);
}

std::string ScalarField::to_string() const { return detail::to_text(node_.get()); }

namespace {
int common_dim(const ScalarField& a, const ScalarField& b) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("scalar fields live on different charts");
  return a.dimension();
}
}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return ScalarField(common_dim(a, b), detail::make_add(a.node_, b.node_));
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return ScalarField(common_dim(a, b), detail::make_sub(a.node_, b.node_));
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return ScalarField(common_dim(a, b), detail::make_mul(a.node_, b.node_));
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  return ScalarField(common_dim(a, b), detail::make_div(a.node_, b.node_));
}
ScalarField operator-(const ScalarField& a) {
  return ScalarField(a.n_, detail::make_neg(a.node_));
}
ScalarField operator*(const Rational& c, const ScalarField& a) {
  return ScalarField(a.n_, detail::make_mul(detail::make_const(c), a.node_));
}

ScalarField pow(const ScalarField& base, long exponent) {
  return ScalarField(base.n_, detail::make_pow(base.node_, exponent));
}
ScalarField exp(const ScalarField& f) {
  return ScalarField(f.n_, detail::make_func(detail::Func::exp_, f.node_));
}
ScalarField ln(const ScalarField& f) {
  return ScalarField(f.n_, detail::make_func(detail::Func::ln_, f.node_));
}
ScalarField sin(const ScalarField& f) {
  return ScalarField(f.n_, detail::make_func(detail::Func::sin_, f.node_));
}
ScalarField cos(const ScalarField& f) {
  return ScalarField(f.n_, detail::make_func(detail::Func::cos_, f.node_));
}
ScalarField sqrt(const ScalarField& f) {
  return ScalarField(f.n_, detail::make_func(detail::Func::sqrt_, f.node_));
}

}  // namespace kyt
