#include "quasilab/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace quasilab {

namespace {

mpf_class make_mpf(double v = 0.0) {
  mpf_class x(0, kEmbeddingBits);
  x = v;
  return x;
}

long double to_long_double(const mpf_class& x) {
  const double hi = x.get_d();
  mpf_class rest(x - hi, kEmbeddingBits);
  return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool valid_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

// Exact decimal literal ("12", "0.25", "1e-3" is not accepted) to rational.
Rational parse_decimal(std::string_view s) {
  const auto dot = s.find('.');
  std::string digits(s);
  Integer den(1);
  if (dot != std::string_view::npos) {
    if (s.find('.', dot + 1) != std::string_view::npos)
      throw ParseError("malformed number '" + std::string(s) + "'");
    digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
    for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
  }
  if (digits.empty()) throw ParseError("empty number in literal");
  Rational r(Integer(digits, 10), den);
  r.canonicalize();
  return r;
}

// Reduced row echelon solve of A x = b over Q. Returns rank and, when
// consistent, one solution with free variables set to zero.
struct RationalSolve {
  std::size_t rank = 0;
  bool consistent = false;
  std::vector<Rational> x;
};

RationalSolve solve_rational(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    const Rational inv = 1 / a[r][c];
    for (std::size_t k = c; k < cols; ++k) a[r][k] *= inv;
    b[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
      b[i] -= f * b[r];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  RationalSolve out;
  out.rank = r;
  out.consistent = true;
  for (std::size_t i = r; i < rows; ++i) {
    if (b[i] != 0) out.consistent = false;
  }
  out.x.assign(cols, Rational(0));
  if (out.consistent) {
    for (std::size_t i = 0; i < r; ++i) out.x[pivot_cols[i]] = b[i];
  }
  return out;
}

long squarefree_part(long n, long& square_root_of_rest) {
  long r = 1;
  long s = 1;
  for (long p = 2; p * p <= n; ++p) {
    while (n % (p * p) == 0) {
      n /= p * p;
      s *= p;
    }
    if (n % p == 0) {
      n /= p;
      r *= p;
    }
  }
  r *= n;
  square_root_of_rest = s;
  return r;
}

// Recursive-descent parser for QValue literals.
class LiteralParser {
 public:
  LiteralParser(const AlgebraPtr& alg, std::string_view text) : alg_(alg), s_(text) {}

  QValue parse() {
    QValue v = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("bad algebra literal \"" + std::string(s_) + "\": " + what);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  QValue expr() {
    QValue v = term();
    for (;;) {
      if (eat('+')) {
        v += term();
      } else if (eat('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }
  QValue term() {
    QValue v = unary();
    for (;;) {
      skip_ws();
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        QValue d = unary();
        if (d.is_zero()) fail("division by zero");
        v = v * d.inverse();
      } else if (pos_ < s_.size() &&
                 (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '(')) {
        v = v * unary();  // implicit product: "2w1", "3(w1+1)"
      } else {
        return v;
      }
    }
  }
  QValue unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return primary();
  }
  QValue primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      QValue v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t b = pos_;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
        ++pos_;
      return QValue(alg_, parse_decimal(s_.substr(b, pos_ - b)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t b = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const auto name = s_.substr(b, pos_ - b);
      const auto idx = alg_->index_of(name);
      if (!idx) fail("unknown basis symbol '" + std::string(name) + "'");
      return QValue::basis(alg_, *idx);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const AlgebraPtr& alg_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

// ---------------------------------------------------------------- AlgebraSpec

AlgebraPtr AlgebraSpec::create(std::vector<Basis> basis,
                               std::vector<std::vector<std::vector<Rational>>> table) {
  auto spec = std::shared_ptr<AlgebraSpec>(new AlgebraSpec());
  const std::size_t k = basis.size() + 1;
  spec->names_.push_back("1");
  spec->radicands_.push_back(std::nullopt);
  spec->numeric_hp_.push_back(make_mpf(1.0));
  for (auto& b : basis) {
    if (!valid_identifier(b.name)) throw ParseError("invalid basis name '" + b.name + "'");
    if (std::find(spec->names_.begin(), spec->names_.end(), b.name) != spec->names_.end())
      throw ParseError("duplicate basis name '" + b.name + "'");
    spec->names_.push_back(b.name);
    spec->radicands_.push_back(b.radicand);
    mpf_class v(b.value, kEmbeddingBits);
    spec->numeric_hp_.push_back(v);
  }
  for (const auto& v : spec->numeric_hp_) {
    spec->numeric_d_.push_back(v.get_d());
    spec->numeric_ld_.push_back(to_long_double(v));
  }

  if (table.size() != k) throw PreconditionError("product table has wrong number of rows");
  spec->table_.resize(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    if (table[i].size() != k) throw PreconditionError("product table has wrong number of columns");
    for (std::size_t j = 0; j < k; ++j) {
      if (table[i][j].size() != k)
        throw PreconditionError("product table entry has wrong length");
      for (auto& c : table[i][j]) c.canonicalize();
      spec->table_[i * k + j] = table[i][j];
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto& e = spec->product(0, i);
      for (std::size_t t = 0; t < k; ++t) {
        if (e[t] != (t == i ? 1 : 0))
          throw PreconditionError("w0 is not the unit for " + spec->names_[i]);
      }
      if (spec->product(i, j) != spec->product(j, i))
        throw PreconditionError("product table not commutative at (" + spec->names_[i] + "," +
                                spec->names_[j] + ")");
      mpf_class lhs(spec->numeric_hp_[i] * spec->numeric_hp_[j], kEmbeddingBits);
      mpf_class rhs(0, kEmbeddingBits);
      for (std::size_t t = 0; t < k; ++t) {
        mpf_class c(spec->product(i, j)[t], kEmbeddingBits);
        rhs += c * spec->numeric_hp_[t];
      }
      mpf_class diff(lhs - rhs, kEmbeddingBits);
      if (std::fabs(diff.get_d()) > kEmbeddingTolerance)
        throw PreconditionError("embedding inconsistent with product " + spec->names_[i] + "*" +
                                spec->names_[j]);
    }
  }
  return spec;
}

AlgebraPtr AlgebraSpec::parse(std::string_view text) {
  std::vector<Basis> basis;
  struct ProductLine {
    std::string a, b, rhs;
    int line;
  };
  std::vector<ProductLine> products;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    std::string line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("algebra line " + std::to_string(lineno) + ": missing '='");
    std::istringstream lhs(line.substr(kw.size(), eq - kw.size()));
    const std::string rhs = trim(line.substr(eq + 1));
    if (kw == "basis") {
      Basis b;
      lhs >> b.name;
      std::string extra;
      if (b.name.empty() || (lhs >> extra))
        throw ParseError("algebra line " + std::to_string(lineno) + ": expected 'basis NAME = ...'");
      if (rhs.rfind("sqrt", 0) == 0) {
        const std::string arg = trim(rhs.substr(4));
        long n = 0;
        try {
          std::size_t used = 0;
          n = std::stol(arg, &used);
          if (used != arg.size()) throw std::invalid_argument(arg);
        } catch (const std::exception&) {
          throw ParseError("algebra line " + std::to_string(lineno) + ": bad radicand '" + arg + "'");
        }
        if (n <= 1) throw ParseError("algebra line " + std::to_string(lineno) + ": radicand must be >= 2");
        mpf_class v(n, kEmbeddingBits);
        b.value = mpf_class(sqrt(v), kEmbeddingBits);
        b.radicand = n;
      } else {
        try {
          b.value = mpf_class(rhs, kEmbeddingBits);
        } catch (const std::exception&) {
          throw ParseError("algebra line " + std::to_string(lineno) + ": bad value '" + rhs + "'");
        }
      }
      basis.push_back(std::move(b));
    } else if (kw == "product") {
      ProductLine p;
      lhs >> p.a >> p.b;
      std::string extra;
      if (p.b.empty() || (lhs >> extra))
        throw ParseError("algebra line " + std::to_string(lineno) + ": expected 'product A B = ...'");
      p.rhs = rhs;
      p.line = lineno;
      products.push_back(std::move(p));
    } else {
      throw ParseError("algebra line " + std::to_string(lineno) + ": unknown keyword '" + kw + "'");
    }
  }

  const std::size_t k = basis.size() + 1;
  std::vector<std::vector<std::optional<std::vector<Rational>>>> partial(
      k, std::vector<std::optional<std::vector<Rational>>>(k));
  auto unit = [k](std::size_t i) {
    std::vector<Rational> e(k, Rational(0));
    e[i] = 1;
    return e;
  };
  for (std::size_t i = 0; i < k; ++i) {
    partial[0][i] = unit(i);
    partial[i][0] = unit(i);
  }
  // Derived products of square roots.
  for (std::size_t i = 1; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const auto& ri = basis[i - 1].radicand;
      const auto& rj = basis[j - 1].radicand;
      if (!ri || !rj) continue;
      long s = 1;
      const long r = squarefree_part(*ri * *rj, s);
      std::vector<Rational> e(k, Rational(0));
      bool found = false;
      if (r == 1) {
        e[0] = s;
        found = true;
      } else {
        for (std::size_t t = 1; t < k && !found; ++t) {
          const auto& rt = basis[t - 1].radicand;
          if (!rt) continue;
          long st = 1;
          if (squarefree_part(*rt, st) == r) {
            e[t] = Rational(s, st);
            e[t].canonicalize();
            found = true;
          }
        }
      }
      if (found) {
        partial[i][j] = e;
        partial[j][i] = e;
      }
    }
  }
  // Explicit products need the names: build a provisional algebra with a
  // zero table to parse right-hand sides linearly.
  if (!products.empty()) {
    auto names_only = std::shared_ptr<AlgebraSpec>(new AlgebraSpec());
    names_only->names_.push_back("1");
    for (const auto& b : basis) names_only->names_.push_back(b.name);
    names_only->table_.assign(k * k, std::vector<Rational>(k, Rational(0)));
    for (std::size_t i = 0; i < k; ++i) {
      names_only->table_[i] = unit(i);
      names_only->table_[i * k] = unit(i);
    }
    for (const auto& p : products) {
      const auto ia = names_only->index_of(p.a);
      const auto ib = names_only->index_of(p.b);
      if (!ia || !ib)
        throw ParseError("algebra line " + std::to_string(p.line) + ": unknown symbol in product");
      QValue v = QValue::parse(names_only, p.rhs);
      partial[*ia][*ib] = v.coeffs();
      partial[*ib][*ia] = v.coeffs();
    }
  }
  std::vector<std::vector<std::vector<Rational>>> table(k, std::vector<std::vector<Rational>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!partial[i][j])
        throw PreconditionError("product table incomplete: missing " + basis[i - 1].name + "*" +
                                basis[j - 1].name);
      table[i][j] = *partial[i][j];
    }
  }
  return create(std::move(basis), std::move(table));
}

AlgebraPtr AlgebraSpec::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read algebra file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

AlgebraPtr AlgebraSpec::rationals() {
  static const AlgebraPtr q = create({}, {{{Rational(1)}}});
  return q;
}

AlgebraPtr AlgebraSpec::sqrt2_sqrt3() {
  static const AlgebraPtr a = parse(
      "basis w1 = sqrt 2\n"
      "basis w2 = sqrt 3\n"
      "basis w3 = sqrt 6\n");
  return a;
}

std::optional<std::size_t> AlgebraSpec::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::string AlgebraSpec::to_text() const {
  std::ostringstream os;
  const std::size_t k = dim();
  for (std::size_t i = 1; i < k; ++i) {
    if (radicands_[i]) {
      os << "basis " << names_[i] << " = sqrt " << *radicands_[i] << "\n";
    } else {
      mp_exp_t exp = 0;
      std::string digits = numeric_hp_[i].get_str(exp, 10, 70);
      bool neg = !digits.empty() && digits[0] == '-';
      if (neg) digits.erase(0, 1);
      os << "basis " << names_[i] << " = " << (neg ? "-" : "") << "0." << digits << "e" << exp
         << "\n";
    }
  }
  for (std::size_t i = 1; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      if (radicands_[i] && radicands_[j]) continue;
      os << "product " << names_[i] << " " << names_[j] << " = "
         << QValue(shared_from_this(), product(i, j)).to_string()
         << "\n";
    }
  }
  return os.str();
}

bool AlgebraSpec::same_as(const AlgebraSpec& other) const {
  if (this == &other) return true;
  if (names_ != other.names_ || table_ != other.table_) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (cmp(numeric_hp_[i], other.numeric_hp_[i]) != 0) return false;
  }
  return true;
}

// --------------------------------------------------------------------- QValue

QValue::QValue(AlgebraPtr algebra) : algebra_(std::move(algebra)) {
  coeffs_.assign(algebra_->dim(), Rational(0));
}

QValue::QValue(AlgebraPtr algebra, const Rational& r) : QValue(std::move(algebra)) {
  coeffs_[0] = r;
  coeffs_[0].canonicalize();
}

QValue::QValue(AlgebraPtr algebra, std::vector<Rational> coeffs)
    : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != algebra_->dim())
    throw PreconditionError("coefficient vector length does not match algebra dimension");
  for (auto& c : coeffs_) c.canonicalize();
}

QValue QValue::basis(AlgebraPtr algebra, std::size_t i) {
  QValue v(std::move(algebra));
  v.coeffs_.at(i) = 1;
  return v;
}

QValue QValue::parse(AlgebraPtr algebra, std::string_view text) {
  return LiteralParser(algebra, text).parse();
}

bool QValue::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
}

bool QValue::is_rational() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& c) { return c == 0; });
}

double QValue::eval() const {
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0) s += coeffs_[i].get_d() * algebra_->numeric(i);
  }
  return s;
}

long double QValue::eval_ld() const {
  long double s = 0.0L;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    const double hi = coeffs_[i].get_d();
    const Rational rest = coeffs_[i] - Rational(hi);
    const long double c = static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
    s += c * algebra_->numeric_ld(i);
  }
  return s;
}

mpf_class QValue::eval_hp() const {
  mpf_class s(0, kEmbeddingBits);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    mpf_class c(coeffs_[i], kEmbeddingBits);
    s += c * algebra_->numeric_hp(i);
  }
  return s;
}

int QValue::sign() const {
  if (is_zero()) return 0;
  if (is_rational()) return sgn(coeffs_[0]);
  double value = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    const double t = coeffs_[i].get_d() * algebra_->numeric(i);
    value += t;
    scale += std::fabs(t);
  }
  if (std::isfinite(scale) && std::fabs(value) > 1e-12 * scale + 1e-290) return value > 0 ? 1 : -1;
  const mpf_class hp = eval_hp();
  mpf_class mag(abs(hp), kEmbeddingBits);
  mpf_class floor_mag(1, kEmbeddingBits);
  mpf_div_2exp(floor_mag.get_mpf_t(), floor_mag.get_mpf_t(), kEmbeddingBits - 56);
  if (mag < floor_mag)
    throw AmbiguousBoundary("nonzero algebra element " + to_string() +
                            " embeds to ~0; declared algebra is not Q-independent");
  return sgn(hp);
}

Integer QValue::floor() const {
  if (is_rational()) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), coeffs_[0].get_num_mpz_t(), coeffs_[0].get_den_mpz_t());
    return q;
  }
  const long double v = eval_ld();
  if (std::isfinite(static_cast<double>(v)) && std::fabs(static_cast<double>(v)) < 1e15) {
    const long double fl = floorl(v);
    const long double guard = 1e-9L;
    if (v - fl > guard && fl + 1 - v > guard) return Integer(static_cast<long>(fl));
  }
  mpf_class hp = eval_hp();
  mpf_class f(0, kEmbeddingBits);
  mpf_floor(f.get_mpf_t(), hp.get_mpf_t());
  Integer z(f);
  QValue diff = *this - QValue(algebra_, Rational(z));
  if (diff.sign() < 0) {
    z -= 1;
  } else {
    QValue up = diff - QValue(algebra_, Rational(1));
    if (up.sign() >= 0) z += 1;
  }
  return z;
}

QValue QValue::inverse() const {
  const std::size_t k = algebra_->dim();
  if (is_zero()) throw NotInvertible("cannot invert 0");
  // Column j of the multiplication matrix is (this * w_j).
  std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k, Rational(0)));
  for (std::size_t j = 0; j < k; ++j) {
    const QValue prod = *this * QValue::basis(algebra_, j);
    for (std::size_t i = 0; i < k; ++i) m[i][j] = prod.coeffs_[i];
  }
  std::vector<Rational> rhs(k, Rational(0));
  rhs[0] = 1;
  const auto sol = solve_rational(std::move(m), std::move(rhs));
  if (sol.rank < k || !sol.consistent)
    throw NotInvertible(to_string() + " is a zero divisor in the declared algebra");
  return QValue(algebra_, sol.x);
}

QValue QValue::operator-() const {
  QValue r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

void QValue::require_same(const QValue& o) const {
  if (!algebra_ || !o.algebra_) throw AlgebraMismatch("operation on a default-constructed QValue");
  if (algebra_ != o.algebra_ && !algebra_->same_as(*o.algebra_))
    throw AlgebraMismatch("operands belong to different algebras");
}

QValue& QValue::operator+=(const QValue& o) {
  require_same(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

QValue& QValue::operator-=(const QValue& o) {
  require_same(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

QValue& QValue::operator*=(const QValue& o) { return *this = *this * o; }

QValue& QValue::operator*=(const Rational& r) {
  for (auto& c : coeffs_) c *= r;
  return *this;
}

QValue operator*(const QValue& a, const QValue& b) {
  a.require_same(b);
  const std::size_t k = a.coeffs_.size();
  QValue r(a.algebra_);
  for (std::size_t i = 0; i < k; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < k; ++j) {
      if (b.coeffs_[j] == 0) continue;
      const Rational ab = a.coeffs_[i] * b.coeffs_[j];
      const auto& t = a.algebra_->product(i, j);
      for (std::size_t s = 0; s < k; ++s) {
        if (t[s] != 0) r.coeffs_[s] += ab * t[s];
      }
    }
  }
  return r;
}

bool operator==(const QValue& a, const QValue& b) {
  a.require_same(b);
  return a.coeffs_ == b.coeffs_;
}

std::string QValue::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (i == 0) {
      os << mag.get_str();
    } else if (mag == 1) {
      os << algebra_->name(i);
    } else {
      os << mag.get_str() << "*" << algebra_->name(i);
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const QValue& v) { return os << v.to_string(); }

QValue qval_arith(const QValue& a, const QValue& b, ArithOp op) {
  switch (op) {
    case ArithOp::add:
      return a + b;
    case ArithOp::sub:
      return a - b;
    case ArithOp::mul:
      return a * b;
  }
  throw PreconditionError("unknown arithmetic op");
}

int compare(const QValue& a, const QValue& b) { return (a - b).sign(); }

// ------------------------------------------------------- exact linear systems

std::optional<std::vector<Integer>> integer_combination(const QValue& target,
                                                        std::span<const QValue> generators) {
  const std::size_t k = target.algebra()->dim();
  const std::size_t u = generators.size();
  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(u, Rational(0)));
  for (std::size_t j = 0; j < u; ++j) {
    if (generators[j].algebra() != target.algebra() &&
        !generators[j].algebra()->same_as(*target.algebra()))
      throw AlgebraMismatch("generator from a different algebra");
    for (std::size_t i = 0; i < k; ++i) a[i][j] = generators[j].coeff(i);
  }
  const auto sol = solve_rational(std::move(a), target.coeffs());
  if (sol.rank < u) throw PreconditionError("generators are linearly dependent over Q");
  if (!sol.consistent) return std::nullopt;
  std::vector<Integer> out;
  out.reserve(u);
  for (const auto& x : sol.x) {
    if (x.get_den() != 1) return std::nullopt;
    out.push_back(x.get_num());
  }
  return out;
}

std::optional<ModuleWitness> module_membership(const QVector& v, const QVector& alpha) {
  const std::size_t d = alpha.size();
  if (v.size() != d) throw PreconditionError("module_membership: dimension mismatch");
  if (d == 0) return ModuleWitness{Integer(0), {}};
  const AlgebraPtr& alg = alpha[0].algebra();
  const std::size_t k = alg->dim();
  // Unknowns (n, m_1..m_d); equations per coordinate and basis element.
  std::vector<std::vector<Rational>> a(d * k, std::vector<Rational>(d + 1, Rational(0)));
  std::vector<Rational> b(d * k, Rational(0));
  for (std::size_t i = 0; i < d; ++i) {
    if (!v[i].algebra()->same_as(*alg) || !alpha[i].algebra()->same_as(*alg))
      throw AlgebraMismatch("module_membership: mixed algebras");
    for (std::size_t t = 0; t < k; ++t) {
      a[i * k + t][0] = alpha[i].coeff(t);
      b[i * k + t] = v[i].coeff(t);
    }
    a[i * k][1 + i] = 1;
  }
  const auto sol = solve_rational(std::move(a), std::move(b));
  if (sol.rank < d + 1)
    throw PreconditionError("module_membership: alpha has no irrational part; n is undetermined");
  if (!sol.consistent) return std::nullopt;
  ModuleWitness w;
  for (std::size_t j = 0; j <= d; ++j) {
    if (sol.x[j].get_den() != 1) return std::nullopt;
  }
  w.n = sol.x[0].get_num();
  for (std::size_t i = 0; i < d; ++i) w.m.push_back(sol.x[1 + i].get_num());
  return w;
}

std::optional<std::vector<Integer>> measure_form(const QValue& gamma, const QVector& alpha) {
  QVector gens;
  gens.reserve(alpha.size() + 1);
  gens.emplace_back(gamma.algebra(), Rational(1));
  for (const auto& a : alpha) gens.push_back(a);
  return integer_combination(gamma, gens);
}

std::size_t rational_rank(std::span<const QValue> values) {
  if (values.empty()) return 0;
  const std::size_t k = values[0].algebra()->dim();
  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(values.size(), Rational(0)));
  for (std::size_t j = 0; j < values.size(); ++j) {
    for (std::size_t i = 0; i < k; ++i) a[i][j] = values[j].coeff(i);
  }
  return solve_rational(std::move(a), std::vector<Rational>(k, Rational(0))).rank;
}

std::vector<double> eval(const QVector& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.eval());
  return out;
}

QVector parse_qvector(const AlgebraPtr& algebra, std::string_view text) {
  std::string s = trim(text);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  QVector out;
  // Split on top-level commas.
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || (s[i] == ',' && depth == 0)) {
      const std::string item = trim(std::string_view(s).substr(start, i - start));
      if (item.empty()) throw ParseError("empty component in vector literal \"" + std::string(text) + "\"");
      out.push_back(QValue::parse(algebra, item));
      start = i + 1;
    } else if (s[i] == '(') {
      ++depth;
    } else if (s[i] == ')') {
      --depth;
    }
  }
  return out;
}

std::string to_string(const QVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].to_string();
  }
  return s + ")";
}

}  // namespace quasilab
