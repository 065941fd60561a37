#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

namespace ccga {

// Expression templates are disabled so that these types compose cleanly with
// Eigen expressions and `auto`.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline double to_double(const Rational& value) { return value.convert_to<double>(); }
inline double to_double(const BigInt& value) { return value.convert_to<double>(); }
inline double to_double(double value) { return value; }

/// Converts an exact count ratio into the requested scalar.
template <typename Scalar>
Scalar ratio(std::int64_t numerator, std::int64_t denominator) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return Rational(numerator, denominator);
  } else {
    return static_cast<Scalar>(numerator) / static_cast<Scalar>(denominator);
  }
}

}  // namespace ccga

namespace Eigen {

template <>
struct NumTraits<ccga::Rational> : GenericNumTraits<ccga::Rational> {
  using Real = ccga::Rational;
  using NonInteger = ccga::Rational;
  using Nested = ccga::Rational;
  using Literal = ccga::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 64,
    MulCost = 64
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<ccga::BigInt> : GenericNumTraits<ccga::BigInt> {
  using Real = ccga::BigInt;
  using NonInteger = ccga::Rational;
  using Nested = ccga::BigInt;
  using Literal = ccga::BigInt;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 32,
    MulCost = 64
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
