#pragma once

#include <cmath>
#include <limits>
#include <type_traits>

#include <Eigen/Core>

namespace mech {

// Forward-mode dual scalar carrying one derivative slot.  One pass per
// coordinate gives an exact gradient; nesting once (Dual<Dual<double>>)
// gives exact second derivatives.  No deeper nesting is used anywhere.
template <typename T>
struct Dual {
  T val{};
  T dot{};

  constexpr Dual() = default;
  constexpr Dual(const T& v) : val(v), dot() {}
  constexpr Dual(const T& v, const T& d) : val(v), dot(d) {}

  template <typename U,
            std::enable_if_t<std::is_arithmetic_v<U> && !std::is_same_v<U, T>, int> = 0>
  constexpr Dual(U v) : val(static_cast<T>(v)), dot() {}

  Dual& operator+=(const Dual& o) { val += o.val; dot += o.dot; return *this; }
  Dual& operator-=(const Dual& o) { val -= o.val; dot -= o.dot; return *this; }
  Dual& operator*=(const Dual& o) {
    dot = dot * o.val + val * o.dot;
    val = val * o.val;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    val = val / o.val;
    dot = (dot - val * o.dot) / o.val;
    return *this;
  }
};

using D1 = Dual<double>;
using D2 = Dual<Dual<double>>;

inline constexpr double value_of(double x) { return x; }
template <typename T>
constexpr double value_of(const Dual<T>& d) { return value_of(d.val); }

template <typename T>
inline Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.val + b.val, a.dot + b.dot}; }
template <typename T>
inline Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.val - b.val, a.dot - b.dot}; }
template <typename T>
inline Dual<T> operator-(const Dual<T>& a) { return {-a.val, -a.dot}; }
template <typename T>
inline Dual<T> operator+(const Dual<T>& a) { return a; }
template <typename T>
inline Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.val * b.val, a.dot * b.val + a.val * b.dot};
}
template <typename T>
inline Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.val / b.val;
  return {q, (a.dot - q * b.dot) / b.val};
}

// mixed scalar ops: template deduction will not convert through the
// implicit constructor, so spell them out
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline Dual<T> operator+(const Dual<T>& a, U b) { return a + Dual<T>(b); }
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline Dual<T> operator+(U a, const Dual<T>& b) { return Dual<T>(a) + b; }
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline Dual<T> operator-(const Dual<T>& a, U b) { return a - Dual<T>(b); }
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline Dual<T> operator-(U a, const Dual<T>& b) { return Dual<T>(a) - b; }
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline Dual<T> operator*(const Dual<T>& a, U b) { return a * Dual<T>(b); }
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline Dual<T> operator*(U a, const Dual<T>& b) { return Dual<T>(a) * b; }
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline Dual<T> operator/(const Dual<T>& a, U b) { return a / Dual<T>(b); }
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline Dual<T> operator/(U a, const Dual<T>& b) { return Dual<T>(a) / b; }

// comparisons act on value parts (used by pivoting and user branches)
template <typename T>
inline bool operator<(const Dual<T>& a, const Dual<T>& b) { return value_of(a) < value_of(b); }
template <typename T>
inline bool operator>(const Dual<T>& a, const Dual<T>& b) { return value_of(a) > value_of(b); }
template <typename T>
inline bool operator<=(const Dual<T>& a, const Dual<T>& b) { return value_of(a) <= value_of(b); }
template <typename T>
inline bool operator>=(const Dual<T>& a, const Dual<T>& b) { return value_of(a) >= value_of(b); }
template <typename T>
inline bool operator==(const Dual<T>& a, const Dual<T>& b) { return value_of(a) == value_of(b); }
template <typename T>
inline bool operator!=(const Dual<T>& a, const Dual<T>& b) { return value_of(a) != value_of(b); }
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline bool operator<(const Dual<T>& a, U b) { return value_of(a) < static_cast<double>(b); }
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline bool operator>(const Dual<T>& a, U b) { return value_of(a) > static_cast<double>(b); }
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline bool operator<(U a, const Dual<T>& b) { return static_cast<double>(a) < value_of(b); }
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline bool operator>(U a, const Dual<T>& b) { return static_cast<double>(a) > value_of(b); }
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline bool operator==(const Dual<T>& a, U b) { return value_of(a) == static_cast<double>(b); }
template <typename T, typename U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
inline bool operator!=(const Dual<T>& a, U b) { return value_of(a) != static_cast<double>(b); }

template <typename T>
inline Dual<T> sqrt(const Dual<T>& d) {
  using std::sqrt;
  T s = sqrt(d.val);
  return {s, d.dot / (2.0 * s)};
}
template <typename T>
inline Dual<T> sin(const Dual<T>& d) {
  using std::cos;
  using std::sin;
  return {sin(d.val), d.dot * cos(d.val)};
}
template <typename T>
inline Dual<T> cos(const Dual<T>& d) {
  using std::cos;
  using std::sin;
  return {cos(d.val), -d.dot * sin(d.val)};
}
template <typename T>
inline Dual<T> tan(const Dual<T>& d) {
  using std::tan;
  T t = tan(d.val);
  return {t, d.dot * (1.0 + t * t)};
}
template <typename T>
inline Dual<T> asin(const Dual<T>& d) {
  using std::asin;
  using std::sqrt;
  return {asin(d.val), d.dot / sqrt(1.0 - d.val * d.val)};
}
template <typename T>
inline Dual<T> acos(const Dual<T>& d) {
  using std::acos;
  using std::sqrt;
  return {acos(d.val), -d.dot / sqrt(1.0 - d.val * d.val)};
}
template <typename T>
inline Dual<T> atan(const Dual<T>& d) {
  using std::atan;
  return {atan(d.val), d.dot / (1.0 + d.val * d.val)};
}
template <typename T>
inline Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  using std::atan2;
  T den = x.val * x.val + y.val * y.val;
  return {atan2(y.val, x.val), (x.val * y.dot - y.val * x.dot) / den};
}
template <typename T>
inline Dual<T> exp(const Dual<T>& d) {
  using std::exp;
  T e = exp(d.val);
  return {e, d.dot * e};
}
template <typename T>
inline Dual<T> log(const Dual<T>& d) {
  using std::log;
  return {log(d.val), d.dot / d.val};
}
template <typename T>
inline Dual<T> pow(const Dual<T>& d, double p) {
  using std::pow;
  T f = pow(d.val, p);
  return {f, d.dot * (p * pow(d.val, p - 1.0))};
}
template <typename T>
inline Dual<T> pow(const Dual<T>& d, int p) { return pow(d, static_cast<double>(p)); }
template <typename T>
inline Dual<T> abs(const Dual<T>& d) { return value_of(d) < 0.0 ? -d : d; }
template <typename T>
inline Dual<T> sinh(const Dual<T>& d) {
  using std::cosh;
  using std::sinh;
  return {sinh(d.val), d.dot * cosh(d.val)};
}
template <typename T>
inline Dual<T> cosh(const Dual<T>& d) {
  using std::cosh;
  using std::sinh;
  return {cosh(d.val), d.dot * sinh(d.val)};
}
template <typename T>
inline Dual<T> tanh(const Dual<T>& d) {
  using std::tanh;
  T t = tanh(d.val);
  return {t, d.dot * (1.0 - t * t)};
}

inline bool all_finite(double x) { return std::isfinite(x); }
template <typename T>
inline bool all_finite(const Dual<T>& d) { return all_finite(d.val) && all_finite(d.dot); }
template <typename T>
inline bool isfinite(const Dual<T>& d) { return all_finite(d); }

}  // namespace mech

namespace Eigen {

template <typename T>
struct NumTraits<mech::Dual<T>> : NumTraits<T> {
  using Real = mech::Dual<T>;
  using NonInteger = mech::Dual<T>;
  using Nested = mech::Dual<T>;
  using Literal = typename NumTraits<T>::Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2 * NumTraits<T>::ReadCost,
    AddCost = 2 * NumTraits<T>::AddCost,
    MulCost = 3 * NumTraits<T>::MulCost,
  };
  static inline Real epsilon() { return Real(NumTraits<T>::epsilon()); }
  static inline Real dummy_precision() { return Real(NumTraits<T>::dummy_precision()); }
  static inline Real highest() { return Real(NumTraits<T>::highest()); }
  static inline Real lowest() { return Real(NumTraits<T>::lowest()); }
  static inline int digits10() { return NumTraits<T>::digits10(); }
};

template <typename T, typename BinOp>
struct ScalarBinaryOpTraits<mech::Dual<T>, double, BinOp> {
  using ReturnType = mech::Dual<T>;
};
template <typename T, typename BinOp>
struct ScalarBinaryOpTraits<double, mech::Dual<T>, BinOp> {
  using ReturnType = mech::Dual<T>;
};

}  // namespace Eigen
