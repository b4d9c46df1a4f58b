// Forward-mode dual numbers, nestable for exact second derivatives.
//
// Dual<double> carries one derivative; Dual<Dual<double>> carries value,
// two first derivatives and a mixed second derivative.  Charts that provide
// analytic metrics get exact Christoffel symbols and curvature by evaluating
// the metric functor on dual-valued points; no symbolic algebra is involved.
#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <limits>

#include <Eigen/Core>

namespace pmcf {

template <typename T>
struct Dual {
    T a{}; // value
    T b{}; // derivative

    Dual() = default;
    Dual(const T& value) : a(value), b(T{}) {} // NOLINT: implicit by design
    Dual(const T& value, const T& deriv) : a(value), b(deriv) {}

    // Implicit promotion from plain literals for nested duals.
    template <typename U, typename = std::enable_if_t<std::is_arithmetic_v<U> && !std::is_same_v<U, T>>>
    Dual(U value) : a(static_cast<T>(value)), b(T{}) {} // NOLINT

    Dual& operator+=(const Dual& o) { a += o.a; b += o.b; return *this; }
    Dual& operator-=(const Dual& o) { a -= o.a; b -= o.b; return *this; }
    Dual& operator*=(const Dual& o) {
        b = a * o.b + b * o.a;
        a = a * o.a;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        b = (b * o.a - a * o.b) / (o.a * o.a);
        a = a / o.a;
        return *this;
    }
};

using Dual1 = Dual<double>;        // first derivatives
using Dual2 = Dual<Dual<double>>;  // second derivatives (nested)

template <typename T> Dual<T> operator+(Dual<T> x, const Dual<T>& y) { return x += y; }
template <typename T> Dual<T> operator-(Dual<T> x, const Dual<T>& y) { return x -= y; }
template <typename T> Dual<T> operator*(Dual<T> x, const Dual<T>& y) { return x *= y; }
template <typename T> Dual<T> operator/(Dual<T> x, const Dual<T>& y) { return x /= y; }
template <typename T> Dual<T> operator-(const Dual<T>& x) { return Dual<T>(-x.a, -x.b); }
template <typename T> Dual<T> operator+(const Dual<T>& x) { return x; }

template <typename T> Dual<T> operator+(const T& s, Dual<T> x) { x.a = s + x.a; return x; }
template <typename T> Dual<T> operator+(Dual<T> x, const T& s) { x.a += s; return x; }
template <typename T> Dual<T> operator-(const T& s, const Dual<T>& x) { return Dual<T>(s - x.a, -x.b); }
template <typename T> Dual<T> operator-(Dual<T> x, const T& s) { x.a -= s; return x; }
template <typename T> Dual<T> operator*(const T& s, Dual<T> x) { x.a = s * x.a; x.b = s * x.b; return x; }
template <typename T> Dual<T> operator*(Dual<T> x, const T& s) { return s * x; }
template <typename T> Dual<T> operator/(Dual<T> x, const T& s) { x.a = x.a / s; x.b = x.b / s; return x; }
template <typename T> Dual<T> operator/(const T& s, const Dual<T>& x) { return Dual<T>(s) / x; }

// double interop for the nested case (Dual2 +- double literal).
inline Dual2 operator*(double s, Dual2 x) { return Dual2(Dual1(s)) * x; }
inline Dual2 operator*(Dual2 x, double s) { return x * Dual2(Dual1(s)); }
inline Dual2 operator+(double s, const Dual2& x) { return Dual2(Dual1(s)) + x; }
inline Dual2 operator+(const Dual2& x, double s) { return x + Dual2(Dual1(s)); }
inline Dual2 operator-(double s, const Dual2& x) { return Dual2(Dual1(s)) - x; }
inline Dual2 operator-(const Dual2& x, double s) { return x - Dual2(Dual1(s)); }
inline Dual2 operator/(double s, const Dual2& x) { return Dual2(Dual1(s)) / x; }
inline Dual2 operator/(const Dual2& x, double s) { return x / Dual2(Dual1(s)); }

template <typename T> bool operator==(const Dual<T>& x, const Dual<T>& y) { return x.a == y.a; }
template <typename T> bool operator!=(const Dual<T>& x, const Dual<T>& y) { return x.a != y.a; }
template <typename T> bool operator<(const Dual<T>& x, const Dual<T>& y) { return x.a < y.a; }
template <typename T> bool operator>(const Dual<T>& x, const Dual<T>& y) { return x.a > y.a; }
template <typename T> bool operator<=(const Dual<T>& x, const Dual<T>& y) { return x.a <= y.a; }
template <typename T> bool operator>=(const Dual<T>& x, const Dual<T>& y) { return x.a >= y.a; }

// value / derivative extraction down to plain double
inline double value_of(double x) { return x; }
template <typename T> double value_of(const Dual<T>& x) { return value_of(x.a); }

using std::abs;
using std::acos;
using std::asin;
using std::asinh;
using std::atan;
using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tanh;

template <typename T> Dual<T> sqrt(const Dual<T>& x) {
    T r = sqrt(x.a);
    return Dual<T>(r, x.b / (2.0 * r));
}
template <typename T> Dual<T> exp(const Dual<T>& x) {
    T e = exp(x.a);
    return Dual<T>(e, x.b * e);
}
template <typename T> Dual<T> log(const Dual<T>& x) { return Dual<T>(log(x.a), x.b / x.a); }
template <typename T> Dual<T> sin(const Dual<T>& x) { return Dual<T>(sin(x.a), x.b * cos(x.a)); }
template <typename T> Dual<T> cos(const Dual<T>& x) { return Dual<T>(cos(x.a), -x.b * sin(x.a)); }
template <typename T> Dual<T> sinh(const Dual<T>& x) { return Dual<T>(sinh(x.a), x.b * cosh(x.a)); }
template <typename T> Dual<T> cosh(const Dual<T>& x) { return Dual<T>(cosh(x.a), x.b * sinh(x.a)); }
template <typename T> Dual<T> tanh(const Dual<T>& x) {
    T t = tanh(x.a);
    return Dual<T>(t, x.b * (1.0 - t * t));
}
template <typename T> Dual<T> asinh(const Dual<T>& x) {
    return Dual<T>(asinh(x.a), x.b / sqrt(x.a * x.a + 1.0));
}
template <typename T> Dual<T> atan(const Dual<T>& x) {
    return Dual<T>(atan(x.a), x.b / (x.a * x.a + 1.0));
}
template <typename T> Dual<T> abs(const Dual<T>& x) { return x.a < T{} ? -x : x; }
template <typename T> Dual<T> pow(const Dual<T>& x, double p) {
    T f = pow(x.a, p);
    return Dual<T>(f, x.b * (p * pow(x.a, p - 1.0)));
}

// Seed helpers: lift a plain double to a dual tracking d/dx of itself.
inline Dual1 seed1(double x) { return Dual1(x, 1.0); }
// Nested seeds for a mixed second derivative d^2/(dx dy): seed x in the outer
// slot and y in the inner slot; d2_of() extracts the cross term.
inline Dual2 seed_outer(double x) { return Dual2(Dual1(x, 0.0), Dual1(1.0, 0.0)); }
inline Dual2 seed_inner(double x) { return Dual2(Dual1(x, 1.0), Dual1(0.0, 0.0)); }
inline Dual2 seed_both(double x) { return Dual2(Dual1(x, 1.0), Dual1(1.0, 0.0)); }
inline double d1_outer(const Dual2& x) { return x.b.a; }
inline double d1_inner(const Dual2& x) { return x.a.b; }
inline double d2_of(const Dual2& x) { return x.b.b; }

template <typename T>
std::ostream& operator<<(std::ostream& os, const Dual<T>& x) {
    return os << "(" << x.a << " + eps*" << x.b << ")";
}

} // namespace pmcf

// Minimal NumTraits so Eigen::Matrix<pmcf::Dual1, ...> can be constructed,
// filled and combined linearly (the chart code only needs that much).
namespace Eigen {

template <typename T>
struct NumTraits<pmcf::Dual<T>> : NumTraits<double> {
    using Real = pmcf::Dual<T>;
    using NonInteger = pmcf::Dual<T>;
    using Nested = pmcf::Dual<T>;
    using Literal = double;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 2,
        AddCost = 4,
        MulCost = 8,
    };
};

template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<pmcf::Dual<T>, double, BinaryOp> {
    using ReturnType = pmcf::Dual<T>;
};
template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<double, pmcf::Dual<T>, BinaryOp> {
    using ReturnType = pmcf::Dual<T>;
};

} // namespace Eigen
