#pragma once

#include "asep/types.hpp"

namespace asep {

// First-order forward-mode scalar over complex doubles: v + d*eps with
// eps^2 = 0.  Threading Dual through the transfer-matrix kernel or the BAE
// evaluation yields exact analytic derivatives (the product rule applied
// factor by factor), with no step-size choice.
struct Dual {
    complexd v{};
    complexd d{};

    Dual() = default;
    Dual(double x) : v(x) {}        // NOLINT: implicit by design
    Dual(const complexd& x) : v(x) {}
    Dual(const complexd& x, const complexd& dx) : v(x), d(dx) {}
};

inline Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
inline Dual operator*(const Dual& a, const Dual& b) {
    return {a.v * b.v, a.v * b.d + a.d * b.v};
}
inline Dual operator/(const Dual& a, const Dual& b) {
    const complexd q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
}
inline Dual& operator+=(Dual& a, const Dual& b) { a = a + b; return a; }
inline Dual& operator-=(Dual& a, const Dual& b) { a = a - b; return a; }
inline Dual& operator*=(Dual& a, const Dual& b) { a = a * b; return a; }

inline double abs_value(const Dual& a) { return std::abs(a.v); }
inline double abs_value(const complexd& a) { return std::abs(a); }

inline complexd value_of(const Dual& a) { return a.v; }
inline complexd value_of(const complexd& a) { return a; }

// x^n for small non-negative integer n, product rule throughout.
template <class S>
S pow_int(const S& x, int n) {
    S out = S(1.0);
    for (int i = 0; i < n; ++i) out = out * x;
    return out;
}

}  // namespace asep
