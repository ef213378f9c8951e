#pragma once

#include <cstdint>
#include <stdexcept>

#include "brjuno/exact_real.hpp"

namespace brjuno {

/// Integer fractional-linear transformation x -> (m00 x + m01)/(m10 x + m11).
/// Only unimodular matrices (det = +-1) are valid.
struct Mobius {
    BigInt m00, m01, m10, m11;

    Mobius(BigInt a, BigInt b, BigInt c, BigInt d)
        : m00(std::move(a)), m01(std::move(b)), m10(std::move(c)), m11(std::move(d)) {
        const BigInt dt = det();
        if (dt != 1 && dt != -1) throw std::domain_error("Mobius: determinant must be +-1");
    }

    static Mobius identity() { return {1, 0, 0, 1}; }

    /// Matrix of an alpha-CF digit (a, eps): x -> 1/(a + eps x).
    static Mobius digit(std::int64_t a, int eps) { return {0, 1, eps, a}; }

    /// Index-zero digit matrix: x -> a0 + eps0 x.
    static Mobius leading_digit(std::int64_t a0, int eps0) { return {eps0, a0, 0, 1}; }

    BigInt det() const { return m00 * m11 - m01 * m10; }

    Mobius inverse() const {
        const BigInt dt = det();
        // adjugate over det; for det = -1 all entries flip sign
        if (dt == 1) return {m11, -m01, -m10, m00};
        return {-m11, m01, m10, -m00};
    }

    friend Mobius operator*(const Mobius& x, const Mobius& y) {
        return {x.m00 * y.m00 + x.m01 * y.m10, x.m00 * y.m01 + x.m01 * y.m11,
                x.m10 * y.m00 + x.m11 * y.m10, x.m10 * y.m01 + x.m11 * y.m11};
    }

    ExactReal apply(const ExactReal& x) const {
        const ExactReal den = ExactReal(m10) * x + ExactReal(m11);
        if (den.is_zero()) throw std::domain_error("Mobius: pole");
        return (ExactReal(m00) * x + ExactReal(m01)) / den;
    }
};

inline ExactReal mobius_apply(const Mobius& m, const ExactReal& x) { return m.apply(x); }

}  // namespace brjuno
