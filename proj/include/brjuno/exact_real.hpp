#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

namespace brjuno {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// 134-bit MPFR float used for all certified (non-exact) evaluation work.
using HighPrec = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<40, boost::multiprecision::allocate_stack>,
    boost::multiprecision::et_off>;

/// 333-bit variant for callers that request more than 134 bits.
using HighPrec100 = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<100, boost::multiprecision::allocate_stack>,
    boost::multiprecision::et_off>;

enum class Ordering { less, equal, greater };

namespace detail {

inline int sgn(const BigInt& v) { return mpz_sgn(v.get_mpz_t()); }

inline BigInt isqrt(const BigInt& v) {
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    return r;
}

inline BigInt floor_div(const BigInt& num, const BigInt& den) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

// d = s^2 * d0 with d0 squarefree. Trial division; leftover cofactors beyond the
// bound are folded if they are perfect squares and otherwise taken as squarefree.
inline std::pair<BigInt, BigInt> squarefree_split(BigInt d) {
    BigInt s = 1, d0 = 1;
    if (d == 0) return {1, 0};
    BigInt p = 2;
    const long bound = 1000000;
    while (p <= bound && p * p <= d) {
        if (d % p == 0) {
            int e = 0;
            while (d % p == 0) {
                d /= p;
                ++e;
            }
            for (int i = 0; i < e / 2; ++i) s *= p;
            if (e % 2) d0 *= p;
        }
        p += (p == 2) ? 1 : 2;
    }
    if (d > 1) {
        if (mpz_perfect_square_p(d.get_mpz_t())) {
            s *= isqrt(d);
        } else {
            d0 *= d;
        }
    }
    return {s, d0};
}

// sign of p + q*sqrt(d), d squarefree >= 2 (or q == 0)
inline int sign_pair(const BigInt& p, const BigInt& q, const BigInt& d) {
    const int sp = sgn(p), sq = sgn(q);
    if (sq == 0) return sp;
    if (sp == 0) return sq;
    if (sp == sq) return sp;
    const BigInt t = p * p - q * q * d;
    const int st = sgn(t);
    return sp > 0 ? st : -st;
}

// sign of u + v*sqrt(d1) + w*sqrt(d2), d1 != d2 both squarefree >= 2
inline int sign_two_radicals(const BigInt& u, const BigInt& v, const BigInt& d1,
                             const BigInt& w, const BigInt& d2) {
    const int sa = sign_pair(u, v, d1);
    const int sb = sgn(w);
    if (sa == 0) return sb;
    if (sb == 0) return sa;
    if (sa == sb) return sa;
    // opposite signs: compare (u + v sqrt(d1))^2 against w^2 d2
    const int cmp = sign_pair(u * u + v * v * d1 - w * w * d2, 2 * u * v, d1);
    return sa > 0 ? cmp : -cmp;
}

}  // namespace detail

/// Exact real of the form (a + b*sqrt(d))/c over arbitrary-precision integers.
/// Canonical form: c > 0, gcd(a, b, c) = 1, d squarefree; rationals carry
/// b = 0, d = 0, so the rational/surd tag is simply b != 0. Values are
/// immutable after construction and safe to share across threads.
class ExactReal {
  public:
    ExactReal() : a_(0), b_(0), c_(1), d_(0) {}
    ExactReal(long v) : a_(v), b_(0), c_(1), d_(0) {}
    ExactReal(const BigInt& v) : a_(v), b_(0), c_(1), d_(0) {}
    ExactReal(const BigRational& r) : a_(r.get_num()), b_(0), c_(r.get_den()), d_(0) {
        normalize_rational();
    }
    ExactReal(const BigInt& num, const BigInt& den) : a_(num), b_(0), c_(den), d_(0) {
        if (c_ == 0) throw std::domain_error("ExactReal: zero denominator");
        normalize_rational();
    }

    /// Canonicalizing factory for (a + b*sqrt(d))/c; collapses to a rational
    /// when d <= 1 or b = 0 after folding square factors of d into b.
    static ExactReal surd(BigInt a, BigInt b, BigInt c, BigInt d) {
        if (c == 0) throw std::domain_error("surd: zero denominator");
        if (d < 0) throw std::domain_error("surd: negative discriminant");
        auto [s, d0] = detail::squarefree_split(d);
        b *= s;
        if (d0 == 1) {  // perfect-square discriminant folds into the rational part
            a += b;
            b = 0;
            d0 = 0;
        }
        if (b == 0) d0 = 0;
        ExactReal r;
        r.a_ = std::move(a);
        r.b_ = std::move(b);
        r.c_ = std::move(c);
        r.d_ = std::move(d0);
        r.reduce();
        return r;
    }

    bool is_rational() const { return b_ == 0; }
    bool is_zero() const { return b_ == 0 && a_ == 0; }

    const BigInt& a() const { return a_; }
    const BigInt& b() const { return b_; }
    const BigInt& c() const { return c_; }
    const BigInt& d() const { return d_; }

    BigRational rational() const {
        if (!is_rational()) throw std::domain_error("ExactReal: not rational");
        BigRational r;
        r.get_num() = a_;
        r.get_den() = c_;
        return r;
    }

    int sign() const { return detail::sign_pair(a_, b_, d_); }

    ExactReal operator-() const {
        ExactReal r(*this);
        r.a_ = -r.a_;
        r.b_ = -r.b_;
        return r;
    }

    ExactReal abs() const { return sign() < 0 ? -*this : *this; }

    ExactReal inverse() const {
        if (is_zero()) throw std::domain_error("ExactReal: division by zero");
        // c (a - b sqrt(d)) / (a^2 - b^2 d)
        ExactReal r;
        r.a_ = c_ * a_;
        r.b_ = -c_ * b_;
        r.c_ = a_ * a_ - b_ * b_ * d_;
        r.d_ = d_;
        r.reduce();
        return r;
    }

    friend ExactReal operator+(const ExactReal& x, const ExactReal& y) {
        const BigInt d = common_d(x, y);
        ExactReal r;
        r.a_ = x.a_ * y.c_ + y.a_ * x.c_;
        r.b_ = x.b_ * y.c_ + y.b_ * x.c_;
        r.c_ = x.c_ * y.c_;
        r.d_ = d;
        r.reduce();
        return r;
    }

    friend ExactReal operator-(const ExactReal& x, const ExactReal& y) { return x + (-y); }

    friend ExactReal operator*(const ExactReal& x, const ExactReal& y) {
        const BigInt d = common_d(x, y);
        ExactReal r;
        r.a_ = x.a_ * y.a_ + x.b_ * y.b_ * d;
        r.b_ = x.a_ * y.b_ + y.a_ * x.b_;
        r.c_ = x.c_ * y.c_;
        r.d_ = d;
        r.reduce();
        return r;
    }

    friend ExactReal operator/(const ExactReal& x, const ExactReal& y) { return x * y.inverse(); }

    /// Exact sign of x - y; works across different discriminants.
    friend int compare(const ExactReal& x, const ExactReal& y) {
        const BigInt p = x.a_ * y.c_ - y.a_ * x.c_;
        const BigInt q1 = x.b_ * y.c_;
        const BigInt q2 = y.b_ * x.c_;
        if (x.b_ == 0 && y.b_ == 0) return detail::sgn(p);
        if (y.b_ == 0) return detail::sign_pair(p, q1, x.d_);
        if (x.b_ == 0) return detail::sign_pair(p, -q2, y.d_);
        if (x.d_ == y.d_) return detail::sign_pair(p, q1 - q2, x.d_);
        return detail::sign_two_radicals(p, q1, x.d_, -q2, y.d_);
    }

    friend bool operator==(const ExactReal& x, const ExactReal& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
    }
    friend bool operator!=(const ExactReal& x, const ExactReal& y) { return !(x == y); }
    friend bool operator<(const ExactReal& x, const ExactReal& y) { return compare(x, y) < 0; }
    friend bool operator<=(const ExactReal& x, const ExactReal& y) { return compare(x, y) <= 0; }
    friend bool operator>(const ExactReal& x, const ExactReal& y) { return compare(x, y) > 0; }
    friend bool operator>=(const ExactReal& x, const ExactReal& y) { return compare(x, y) >= 0; }

    BigInt floor() const {
        if (is_rational()) return detail::floor_div(a_, c_);
        // floor(b sqrt(d)) first; b^2 d is never a perfect square here
        BigInt t;
        if (b_ > 0) {
            t = detail::isqrt(b_ * b_ * d_);
        } else {
            t = -detail::isqrt(b_ * b_ * d_) - 1;
        }
        BigInt m = detail::floor_div(a_ + t, c_);
        while (compare(*this, ExactReal(BigInt(m + 1))) >= 0) ++m;
        while (compare(*this, ExactReal(m)) < 0) --m;
        return m;
    }

    std::string str() const {
        if (is_rational()) {
            std::string s = a_.get_str();
            if (c_ != 1) s += "/" + c_.get_str();
            return s;
        }
        std::string s = "(" + a_.get_str();
        s += (b_ >= 0) ? "+" : "-";
        const BigInt babs = ::abs(b_);
        s += babs.get_str() + "*sqrt(" + d_.get_str() + "))/" + c_.get_str();
        return s;
    }

  private:
    void normalize_rational() {
        if (detail::sgn(c_) < 0) {
            a_ = -a_;
            c_ = -c_;
        }
        BigInt g;
        mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), c_.get_mpz_t());
        if (g > 1) {
            a_ /= g;
            c_ /= g;
        }
    }

    void reduce() {
        if (c_ == 0) throw std::domain_error("ExactReal: zero denominator");
        if (b_ == 0) {
            d_ = 0;
            normalize_rational();
            return;
        }
        if (detail::sgn(c_) < 0) {
            a_ = -a_;
            b_ = -b_;
            c_ = -c_;
        }
        BigInt g;
        mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c_.get_mpz_t());
        if (g > 1) {
            a_ /= g;
            b_ /= g;
            c_ /= g;
        }
    }

    static BigInt common_d(const ExactReal& x, const ExactReal& y) {
        if (x.b_ == 0) return y.d_;
        if (y.b_ == 0) return x.d_;
        if (x.d_ != y.d_)
            throw std::domain_error("ExactReal: arithmetic across different discriminants");
        return x.d_;
    }

    BigInt a_, b_, c_, d_;
};

inline Ordering order_of(int sign_value) {
    return sign_value < 0 ? Ordering::less : (sign_value > 0 ? Ordering::greater : Ordering::equal);
}

/// Exact total order on surds/rationals: LT | EQ | GT.
inline Ordering surd_compare(const ExactReal& x, const ExactReal& y) {
    return order_of(compare(x, y));
}

/// [x - alpha + 1]: the digit floor of the alpha-continued-fraction map,
/// decided entirely by integer sign tests.
inline BigInt shifted_floor(const ExactReal& x, const ExactReal& alpha) {
    return (x - alpha + ExactReal(1)).floor();
}

inline ExactReal pow_int(const ExactReal& x, unsigned n) {
    ExactReal r(1);
    for (unsigned i = 0; i < n; ++i) r = r * x;
    return r;
}

namespace detail {

// a + b*sqrt(d) can cancel almost completely (beta_n coefficients grow like q_n
// while the value shrinks like 1/q_n), so the working precision must scale
// with the coefficient sizes before narrowing to the target type.
template <class Real>
Real eval_surd(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d) {
    constexpr unsigned target = unsigned(std::numeric_limits<Real>::digits);
    const std::size_t bits_a = mpz_sizeinbase(a.get_mpz_t(), 2);
    const std::size_t bits_b =
        mpz_sizeinbase(b.get_mpz_t(), 2) + mpz_sizeinbase(d.get_mpz_t(), 2) / 2 + 2;
    const std::size_t headroom = bits_a > bits_b ? bits_a : bits_b;
    const mpfr_prec_t prec = mpfr_prec_t(target + 2 * headroom + 64);

    mpfr_t A, B, R;
    mpfr_init2(A, prec);
    mpfr_init2(B, prec);
    mpfr_init2(R, prec);
    mpfr_set_z(B, d.get_mpz_t(), MPFR_RNDN);
    mpfr_sqrt(B, B, MPFR_RNDN);
    mpfr_mul_z(B, B, b.get_mpz_t(), MPFR_RNDN);
    mpfr_set_z(A, a.get_mpz_t(), MPFR_RNDN);
    mpfr_add(R, A, B, MPFR_RNDN);
    mpfr_div_z(R, R, c.get_mpz_t(), MPFR_RNDN);

    Real out;
    if constexpr (std::is_floating_point_v<Real>) {
        if constexpr (std::is_same_v<Real, double>) {
            out = mpfr_get_d(R, MPFR_RNDN);
        } else {
            out = static_cast<Real>(mpfr_get_ld(R, MPFR_RNDN));
        }
    } else {
        mpfr_set(out.backend().data(), R, MPFR_RNDN);
    }
    mpfr_clear(A);
    mpfr_clear(B);
    mpfr_clear(R);
    return out;
}

}  // namespace detail

/// Convert to a floating type. Rationals round once; surds are evaluated at
/// >= 134 bits before any narrowing, so nearly-cancelling a + b*sqrt(d) forms
/// stay accurate.
template <class Real>
Real to_real(const ExactReal& x) {
    if (x.is_rational()) {
        if constexpr (std::is_same_v<Real, double>) {
            BigRational r;
            r.get_num() = x.a();
            r.get_den() = x.c();
            return r.get_d();
        } else if constexpr (!std::is_floating_point_v<Real>) {
            const Real n(x.a().get_mpz_t()), d(x.c().get_mpz_t());
            return n / d;
        }
    }
    return detail::eval_surd<Real>(x.a(), x.b(), x.c(), x.d());
}

// ---- named constants -------------------------------------------------------

/// g = (sqrt(5) - 1)/2, fixed point of x -> 1/(1+x)
inline const ExactReal& golden() {
    static const ExactReal v = ExactReal::surd(-1, 1, 2, 5);
    return v;
}

/// G = 1/g = (sqrt(5) + 1)/2
inline const ExactReal& golden_inverse() {
    static const ExactReal v = ExactReal::surd(1, 1, 2, 5);
    return v;
}

/// gamma = sqrt(2) - 1, fixed point of x -> 1/(2+x)
inline const ExactReal& silver() {
    static const ExactReal v = ExactReal::surd(-1, 1, 1, 2);
    return v;
}

/// Gamma = 1/gamma = sqrt(2) + 1
inline const ExactReal& silver_inverse() {
    static const ExactReal v = ExactReal::surd(1, 1, 1, 2);
    return v;
}

/// alpha-hat(a) = (a + g)/(a + 1 + g); the irrational alpha where lower
/// semicontinuity of B_alpha fails.
inline ExactReal lsc_alpha(long a) {
    if (a < 2) throw std::domain_error("lsc_alpha: requires a >= 2");
    return (ExactReal(a) + golden()) / (ExactReal(a + 1) + golden());
}

}  // namespace brjuno
