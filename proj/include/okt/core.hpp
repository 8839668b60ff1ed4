#pragma once

// Core scalar types and matrix aliases shared by every module.
//
// The exact lane runs on Eigen dense matrices whose scalars are thin
// value-semantic wrappers over GMP integers/rationals.  The wrappers exist so
// that no expression-template type (gmpxx's or anyone else's) ever leaks into
// Eigen's overload resolution: every operator here takes and returns plain
// values with tightly constrained constructors.

#include <Eigen/Dense>
#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

namespace okt {

// ---------------------------------------------------------------------------
// Error hierarchy
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dimension/shape disagreement between operands.
struct ShapeError : Error {
  using Error::Error;
};

/// A declared structural invariant failed at construction or validation time.
struct ValidationError : Error {
  using Error::Error;
};

/// Parsing of serialized input failed (bad syntax, unknown field, bad shape).
struct ParseError : Error {
  using Error::Error;
};

/// Range R and Range D disagree where they are required to coincide.
struct RangeMismatch : Error {
  using Error::Error;
};

/// The commutator spectrum comes too close to -1 for a principal branch.
struct SpectrumNearMinusOne : Error {
  SpectrumNearMinusOne(double min_gap_, std::size_t sample_index_)
      : Error("spectrum within gap of -1 (min |lambda+1| = " +
              std::to_string(min_gap_) + " at sample " +
              std::to_string(sample_index_) + ")"),
        min_gap(min_gap_),
        sample_index(sample_index_) {}
  double min_gap;
  std::size_t sample_index;
};

/// Adjacent path frames are too far apart for a branch-safe step log.
struct StepTooLarge : Error {
  StepTooLarge(std::size_t step_index_, double step_norm_)
      : Error("path step " + std::to_string(step_index_) +
              " too large for a principal log (|step - 1| = " +
              std::to_string(step_norm_) + ")"),
        step_index(step_index_),
        step_norm(step_norm_) {}
  std::size_t step_index;
  double step_norm;
};

/// A staged search ran out of stages before meeting its bound.
struct DepthExhausted : Error {
  DepthExhausted(int stage_, double slack_)
      : Error("bound not met within available stages (failing stage " +
              std::to_string(stage_) + ", best slack " +
              std::to_string(slack_) + ")"),
        stage(stage_),
        slack(slack_) {}
  int stage;
  double slack;
};

// ---------------------------------------------------------------------------
// Int: arbitrary-precision integer
// ---------------------------------------------------------------------------

class Int {
 public:
  Int() : v_(0) {}
  template <typename T, std::enable_if_t<std::is_integral_v<T>, int> = 0>
  Int(T x) {
    if constexpr (std::is_signed_v<T>) {
      v_ = static_cast<long>(x);
    } else {
      v_ = static_cast<unsigned long>(x);
    }
  }
  explicit Int(const mpz_class& z) : v_(z) {}
  explicit Int(mpz_class&& z) : v_(std::move(z)) {}
  explicit Int(const std::string& s) : v_(s, 10) {}

  const mpz_class& raw() const { return v_; }

  friend Int operator+(const Int& a, const Int& b) { return Int(mpz_class(a.v_ + b.v_)); }
  friend Int operator-(const Int& a, const Int& b) { return Int(mpz_class(a.v_ - b.v_)); }
  friend Int operator*(const Int& a, const Int& b) { return Int(mpz_class(a.v_ * b.v_)); }
  /// Truncated division (C semantics); use floor_div for Euclidean-style steps.
  friend Int operator/(const Int& a, const Int& b) { return Int(mpz_class(a.v_ / b.v_)); }
  friend Int operator%(const Int& a, const Int& b) { return Int(mpz_class(a.v_ % b.v_)); }
  Int operator-() const { return Int(mpz_class(-v_)); }
  const Int& operator+() const { return *this; }

  Int& operator+=(const Int& o) { v_ += o.v_; return *this; }
  Int& operator-=(const Int& o) { v_ -= o.v_; return *this; }
  Int& operator*=(const Int& o) { v_ *= o.v_; return *this; }
  Int& operator/=(const Int& o) { v_ /= o.v_; return *this; }
  Int& operator%=(const Int& o) { v_ %= o.v_; return *this; }
  Int& operator++() { ++v_; return *this; }
  Int& operator--() { --v_; return *this; }

  friend bool operator==(const Int& a, const Int& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Int& a, const Int& b) { return a.v_ != b.v_; }
  friend bool operator<(const Int& a, const Int& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Int& a, const Int& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Int& a, const Int& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Int& a, const Int& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Int& x) { return os << x.v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool fits_ll() const { return v_.fits_slong_p(); }
  long long to_ll() const { return v_.get_si(); }
  double to_double() const { return v_.get_d(); }
  std::string to_string() const { return v_.get_str(); }

 private:
  mpz_class v_;
};

inline Int abs(const Int& x) { return Int(mpz_class(::abs(x.raw()))); }
inline Int gcd(const Int& a, const Int& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.raw().get_mpz_t(), b.raw().get_mpz_t());
  return Int(g);
}
inline Int lcm(const Int& a, const Int& b) {
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), a.raw().get_mpz_t(), b.raw().get_mpz_t());
  return Int(l);
}
/// Floor division: floor(a/b).
inline Int floor_div(const Int& a, const Int& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.raw().get_mpz_t(), b.raw().get_mpz_t());
  return Int(q);
}
/// Floor remainder: a - b*floor(a/b); same sign as b.
inline Int floor_mod(const Int& a, const Int& b) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.raw().get_mpz_t(), b.raw().get_mpz_t());
  return Int(r);
}
/// Quotient rounded to nearest (ties away from zero is not needed; we use
/// floor(a/b + 1/2) for determinism).
inline Int round_div(const Int& a, const Int& b) {
  // floor((2a + b) / (2b)) == floor(a/b + 1/2) for b > 0.
  Int bb = b;
  Int aa = a;
  if (bb.sign() < 0) { bb = -bb; aa = -aa; }
  return floor_div(aa * Int(2) + bb, bb * Int(2));
}
inline bool divides(const Int& d, const Int& x) {
  if (d.is_zero()) return x.is_zero();
  return mpz_divisible_p(x.raw().get_mpz_t(), d.raw().get_mpz_t()) != 0;
}
/// Exact division; caller guarantees divisibility.
inline Int divexact(const Int& x, const Int& d) {
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), x.raw().get_mpz_t(), d.raw().get_mpz_t());
  return Int(q);
}
inline Int pow2(unsigned long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, e);
  return Int(p);
}

// ---------------------------------------------------------------------------
// Rat: arbitrary-precision rational, always canonical
// ---------------------------------------------------------------------------

class Rat {
 public:
  Rat() : v_(0) {}
  template <typename T, std::enable_if_t<std::is_integral_v<T>, int> = 0>
  Rat(T x) : v_(mpq_class(Int(x).raw())) {}
  Rat(const Int& x) : v_(mpq_class(x.raw())) {}
  Rat(const Int& num, const Int& den) : v_(mpq_class(num.raw(), den.raw())) {
    if (den.is_zero()) throw Error("rational with zero denominator");
    v_.canonicalize();
  }
  explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }
  /// Accepts "p", "p/q" or "-p/q" in base 10.
  explicit Rat(const std::string& s) : v_(s, 10) { v_.canonicalize(); }

  const mpq_class& raw() const { return v_; }
  Int numerator() const { return Int(mpz_class(v_.get_num())); }
  Int denominator() const { return Int(mpz_class(v_.get_den())); }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat::wrap(a.v_ + b.v_); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat::wrap(a.v_ - b.v_); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat::wrap(a.v_ * b.v_); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (sgn(b.v_) == 0) throw Error("rational division by zero");
    return Rat::wrap(a.v_ / b.v_);
  }
  Rat operator-() const { return Rat::wrap(-v_); }
  const Rat& operator+() const { return *this; }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (sgn(o.v_) == 0) throw Error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rat& x) { return os << x.v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  double to_double() const { return v_.get_d(); }
  /// "p/q" (or just "p" when q == 1), base 10.
  std::string to_string() const { return v_.get_str(); }

  Int floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    return Int(q);
  }
  Int ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    return Int(q);
  }
  /// Nearest integer, ties toward +infinity (floor(x + 1/2)); deterministic.
  Int round_nearest() const { return (*this + Rat(Int(1), Int(2))).floor(); }

 private:
  static Rat wrap(mpq_class q) {
    Rat r;
    r.v_ = std::move(q);
    return r;
  }
  mpq_class v_;
};

inline Rat abs(const Rat& x) { return Rat(::abs(x.raw())); }
inline double to_double(const Rat& x) { return x.to_double(); }

}  // namespace okt

// ---------------------------------------------------------------------------
// Eigen integration (must precede any use of Eigen::Matrix over Int/Rat)
// ---------------------------------------------------------------------------

namespace Eigen {

template <>
struct NumTraits<okt::Int> {
  using Real = okt::Int;
  using NonInteger = okt::Rat;
  using Literal = okt::Int;
  using Nested = okt::Int;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 60,
    MulCost = 60
  };
  static inline Real epsilon() { return okt::Int(0); }
  static inline Real dummy_precision() { return okt::Int(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<okt::Rat> {
  using Real = okt::Rat;
  using NonInteger = okt::Rat;
  using Literal = okt::Rat;
  using Nested = okt::Rat;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 100,
    MulCost = 100
  };
  static inline Real epsilon() { return okt::Rat(0); }
  static inline Real dummy_precision() { return okt::Rat(0); }
  static inline int digits10() { return 0; }
};

// Mixed Int/Rat expressions promote to Rat.
template <typename BinaryOp>
struct ScalarBinaryOpTraits<okt::Int, okt::Rat, BinaryOp> {
  typedef okt::Rat ReturnType;
};
template <typename BinaryOp>
struct ScalarBinaryOpTraits<okt::Rat, okt::Int, BinaryOp> {
  typedef okt::Rat ReturnType;
};

}  // namespace Eigen

namespace okt {

// ---------------------------------------------------------------------------
// Matrix aliases
// ---------------------------------------------------------------------------

using IntMat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using RatMat = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using RatVec = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Index = Eigen::Index;

inline RatMat to_rational(const IntMat& m) {
  return m.cast<Rat>();
}
inline RatVec to_rational(const IntVec& v) {
  return v.cast<Rat>();
}

/// Least common multiple of all entry denominators; >= 1.
inline Int common_denominator(const RatMat& m) {
  Int l = 1;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) l = lcm(l, m(i, j).denominator());
  return l;
}

/// m scaled by the common denominator, as an integer matrix.
inline IntMat cleared(const RatMat& m, const Int& den) {
  IntMat r(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      Rat s = m(i, j) * Rat(den);
      if (!s.is_integer()) throw Error("cleared: denominator does not clear");
      r(i, j) = s.numerator();
    }
  return r;
}

inline bool is_zero(const IntMat& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!m(i, j).is_zero()) return false;
  return true;
}
inline bool is_zero(const RatMat& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!m(i, j).is_zero()) return false;
  return true;
}

inline Rat sup_norm(const RatMat& m) {
  Rat s = 0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      Rat a = abs(m(i, j));
      if (a > s) s = a;
    }
  return s;
}

}  // namespace okt
