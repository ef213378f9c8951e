#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "brjuno/exact_real.hpp"
#include "brjuno/expansion.hpp"

namespace brjuno {

enum class EvalMethod { periodic_exact, truncated_float };

/// Result of a B_alpha evaluation.  `truncated_float` values are partial sums,
/// hence lower bounds; when `tail_bound` is set the true value lies in
/// [value, value + tail_bound].  +infinity is the rational sentinel, not an error.
template <class Real>
struct BrjunoEvaluation {
    Real value;
    std::size_t depth = 0;
    std::optional<Real> tail_bound;
    EvalMethod method = EvalMethod::truncated_float;

    bool certified() const { return tail_bound.has_value(); }
};

/// Weight of a generalized Brjuno sum: sum beta_{j-1}^nu * u(x_j).
struct WeightSpec {
    enum class Kind { neg_log, power_inv_sigma };
    unsigned nu = 1;
    Kind kind = Kind::neg_log;
    double sigma = 0;  // used by power_inv_sigma, must be > 2
};

namespace detail {

template <class Real>
Real int_to_real(const BigInt& v) {
    if constexpr (std::is_floating_point_v<Real>) {
        return static_cast<Real>(v.get_d());
    } else {
        return Real(v.get_mpz_t());
    }
}

template <class Real>
Real infinity() {
    return std::numeric_limits<Real>::infinity();
}

}  // namespace detail

/// Generalized partial sum over an expansion's exact orbit; every beta factor
/// is converted from its exact value term by term, so no rounding accumulates.
template <class Real>
Real generalized_partial_sum(const AlphaExpansion& e, const WeightSpec& w, std::size_t K) {
    using std::log;
    using std::pow;
    if (w.nu < 1) throw std::domain_error("generalized_partial_sum: nu >= 1 required");
    if (w.kind == WeightSpec::Kind::power_inv_sigma && !(w.sigma > 2))
        throw std::domain_error("generalized_partial_sum: sigma > 2 required");
    if (e.status != ExpansionStatus::periodic && K > e.digit_count())
        throw std::out_of_range("partial_sum: fewer than K valid digits");

    Real sum(0);
    ExactReal beta_nu(1);  // beta_{-1}^nu = 1
    for (std::size_t j = 0; j <= K; ++j) {
        const ExactReal& xj = e.state(j);
        if (xj.is_zero()) return detail::infinity<Real>();  // rational hit
        const Real xr = to_real<Real>(xj);
        const Real u = w.kind == WeightSpec::Kind::neg_log
                           ? Real(-log(xr))
                           : Real(pow(xr, Real(-1) / Real(w.sigma)));
        sum += to_real<Real>(beta_nu) * u;
        beta_nu = beta_nu * (w.nu == 1 ? xj : pow_int(xj, w.nu));
    }
    return sum;
}

/// B_alpha^{(K)}(x) = sum_{j=0}^{K} beta_{j-1} log(1/x_j).
template <class Real>
Real partial_sum(const AlphaExpansion& e, std::size_t K) {
    return generalized_partial_sum<Real>(e, WeightSpec{}, K);
}

template <class Real>
Real partial_sum(const ExactReal& x, const ExactReal& alpha, std::size_t K,
                 int max_digits = 512) {
    return partial_sum<Real>(expand(x, alpha, std::max<int>(max_digits, int(K) + 1)), K);
}

/// Closed-form evaluation at an eventually periodic point: unroll the
/// functional equation around the cycle, solve for the cycle value, then
/// back-substitute through the preperiod.
template <class Real>
BrjunoEvaluation<Real> eval_periodic(const AlphaExpansion& e) {
    using std::log;
    if (e.status != ExpansionStatus::periodic)
        throw std::domain_error("eval_periodic: expansion is not periodic");
    const std::size_t m = e.preperiod, p = e.period;

    Real cycle_sum(0);
    ExactReal prod(1);
    for (std::size_t i = 0; i < p; ++i) {
        const ExactReal& xi = e.state(m + i);
        cycle_sum += to_real<Real>(prod) * Real(-log(to_real<Real>(xi)));
        prod = prod * xi;
    }
    // prod = prod of one full cycle <= alpha^p < 1, so 1 - prod never cancels
    if (!(compare(prod, pow_int(e.alpha, unsigned(p))) <= 0 && compare(prod, ExactReal(1)) < 0))
        throw std::logic_error("eval_periodic: cycle product out of range");

    Real value = cycle_sum / (Real(1) - to_real<Real>(prod));
    for (std::size_t j = m; j-- > 0;) {
        const ExactReal& xj = e.state(j);
        value = Real(-log(to_real<Real>(xj))) + to_real<Real>(xj) * value;
    }
    return {value, m + p, Real(0), EvalMethod::periodic_exact};
}

template <class Real>
BrjunoEvaluation<Real> eval_periodic(const ExactReal& x, const ExactReal& alpha,
                                     int max_digits = 512) {
    return eval_periodic<Real>(expand(x, alpha, max_digits));
}

namespace detail {

/// Plain truncated sum, cut when the exact beta drops below `beta_floor`.
/// Used to seed the tail-cap fixture; carries no certificate of its own.
template <class Real>
Real raw_truncated_value(const ExactReal& x, const ExactReal& alpha, double beta_floor,
                         int max_digits) {
    using std::log;
    const AlphaExpansion e = expand(x, alpha, max_digits);
    Real sum(0);
    ExactReal beta(1);
    for (std::size_t j = 0; j < 4096; ++j) {
        if (e.status != ExpansionStatus::periodic && j >= e.states.size()) break;
        const ExactReal& xj = e.state(j);
        if (xj.is_zero()) return infinity<Real>();
        sum += to_real<Real>(beta) * Real(-log(to_real<Real>(xj)));
        beta = beta * xj;
        if (to_real<double>(beta) < beta_floor) break;
    }
    return sum;
}

/// True when x_j sits within `dist` of a rational with denominator <= max_q;
/// there B_alpha is unboundedly large and no honest uniform tail cap exists.
inline bool near_low_rational(const AlphaExpansion& e, std::size_t j, double dist = 1e-4,
                              long max_q = 100) {
    if (e.status != ExpansionStatus::periodic && j >= e.states.size())
        return true;  // nothing known past the last state: withhold
    double x = to_real<double>(e.state(j));
    // continued fraction of the tail value in doubles; only q <= max_q matters
    double p0 = 0, q0 = 1, p1 = 1, q1 = 0;  // convergents of x
    double y = x;
    for (int it = 0; it < 32; ++it) {
        const double a = std::floor(y);
        const double p2 = a * p0 + p1, q2 = a * q0 + q1;
        if (q2 > max_q) break;
        if (std::abs(x - p2 / q2) < dist) return true;
        p1 = p0;
        q1 = q0;
        p0 = p2;
        q0 = q2;
        const double frac = y - a;
        if (frac < 1e-18) break;
        y = 1 / frac;
    }
    return std::abs(x - std::round(x)) < dist;
}

}  // namespace detail

/// Empirical uniform cap on B_alpha away from the singular set: twice the
/// largest value over the 1/(k+g), k = 1..20 fixture.
template <class Real>
Real tail_cap(const ExactReal& alpha) {
    Real cap(0);
    for (long k = 1; k <= 20; ++k) {
        const ExactReal v = ExactReal(1) / (ExactReal(k) + golden());
        const Real b = detail::raw_truncated_value<Real>(v, alpha, 1e-10, 512);
        if (b > cap) cap = b;
    }
    return cap * 2;
}

namespace detail {

template <class Real>
BrjunoEvaluation<Real> truncated_eval(const AlphaExpansion& e, Real tol, Real cap) {
    using std::log;
    if (e.status == ExpansionStatus::terminated)
        return {infinity<Real>(), e.digit_count(), Real(0), EvalMethod::periodic_exact};

    Real sum(0);
    ExactReal beta(1);
    const std::size_t last =
        e.status == ExpansionStatus::periodic ? std::size_t(1) << 17 : e.states.size() - 1;
    for (std::size_t j = 0; j <= last; ++j) {
        const ExactReal& xj = e.state(j);
        sum += to_real<Real>(beta) * Real(-log(to_real<Real>(xj)));
        beta = beta * xj;
        const Real tb = to_real<Real>(beta) * cap;
        if (tb <= tol) {
            std::optional<Real> t(tb);
            if (near_low_rational(e, j + 1)) t.reset();
            return {sum, j, t, EvalMethod::truncated_float};
        }
    }
    return {sum, last, std::nullopt, EvalMethod::truncated_float};
}

// Adaptive sum for inputs carrying double precision.  The digits are exact for
// the dyadic value, so the sum may run past the display guard; certificates,
// which speak for the real number the double stands for, are only issued while
// beta stays above the 53-bit trust horizon (q ~ 2^26), and a termination
// inside that horizon is the "rational to machine precision" sentinel.
template <class Real>
BrjunoEvaluation<Real> float_value_eval(const AlphaExpansion& e, Real tol, Real cap) {
    using std::log;
    constexpr double beta_trust = 1.4901161193847656e-08;  // 2^-26
    constexpr double beta_floor = 1e-13;
    Real sum(0);
    ExactReal beta(1);
    const std::size_t last =
        e.status == ExpansionStatus::periodic ? std::size_t(1) << 17 : e.states.size() - 1;
    for (std::size_t j = 0; j <= last; ++j) {
        const ExactReal& xj = e.state(j);
        if (xj.is_zero()) {
            if (to_real<double>(beta) > beta_trust)
                return {infinity<Real>(), j, Real(0), EvalMethod::periodic_exact};
            return {sum, j, std::nullopt, EvalMethod::truncated_float};
        }
        sum += to_real<Real>(beta) * Real(-log(to_real<Real>(xj)));
        beta = beta * xj;
        const double bd = to_real<double>(beta);
        const Real tb = to_real<Real>(beta) * cap;
        if (tb <= tol && bd >= beta_trust && !near_low_rational(e, j + 1))
            return {sum, j, tb, EvalMethod::truncated_float};
        if (bd < beta_floor) return {sum, j, std::nullopt, EvalMethod::truncated_float};
    }
    return {sum, last, std::nullopt, EvalMethod::truncated_float};
}

inline AlphaExpansion expand_for_eval(const ExactReal& x, const ExactReal& alpha,
                                      int max_digits) {
    static const BigInt q_cap = BigInt(1) << 47;
    return expand_impl(x, alpha, max_digits, false, q_cap);
}

}  // namespace detail

/// Adaptive float-path evaluation of a double input at tolerance `tol`.
/// The returned value is always a lower bound for B_alpha of the given double.
template <class Real = double>
BrjunoEvaluation<Real> eval_float(double x, const ExactReal& alpha, Real tol, Real cap,
                                  int max_digits = 128) {
    if (!(x == x) || x > 1e300 || x < -1e300) throw std::domain_error("eval_float: non-finite");
    BigRational r;
    mpq_set_d(r.get_mpq_t(), x);
    const AlphaExpansion e = detail::expand_for_eval(ExactReal(r), alpha, max_digits);
    return detail::float_value_eval<Real>(e, tol, cap);
}

template <class Real = double>
BrjunoEvaluation<Real> eval_float(double x, const ExactReal& alpha, Real tol) {
    return eval_float<Real>(x, alpha, tol, tail_cap<Real>(alpha));
}

/// Exact-input evaluation: rationals are +infinity, periodic orbits get the
/// closed form, anything else a certified truncated sum.
template <class Real>
BrjunoEvaluation<Real> eval_exact(const ExactReal& x, const ExactReal& alpha, Real tol, Real cap,
                                  int max_digits = 4096) {
    if (x.is_rational())
        return {detail::infinity<Real>(), 0, Real(0), EvalMethod::periodic_exact};
    const AlphaExpansion e = expand(x, alpha, max_digits);
    if (e.status == ExpansionStatus::periodic) return eval_periodic<Real>(e);
    return detail::truncated_eval<Real>(e, tol, cap);
}

/// B evaluator over exact inputs; suitable for theorem checks (certified:
/// periodic closed forms or truncated sums with explicit tail bounds).
template <class Real>
class CertifiedEvaluator {
  public:
    static constexpr bool certified = true;

    explicit CertifiedEvaluator(ExactReal alpha, Real tol = Real(1e-25), int max_digits = 4096)
        : alpha_(std::move(alpha)), tol_(tol), max_digits_(max_digits),
          cap_(tail_cap<Real>(alpha_)) {}

    const ExactReal& alpha() const { return alpha_; }
    Real cap() const { return cap_; }

    BrjunoEvaluation<Real> evaluate(const ExactReal& x) const {
        return eval_exact<Real>(x, alpha_, tol_, cap_, max_digits_);
    }
    Real operator()(const ExactReal& x) const { return evaluate(x).value; }

  private:
    ExactReal alpha_;
    Real tol_;
    int max_digits_;
    Real cap_;
};

/// B evaluator over doubles for grid scans; shares one tail cap per alpha.
/// Exact rational inputs (orbit states, jitter points) run through the same
/// adaptive pipeline without a detour through double rounding.
class FloatEvaluator {
  public:
    static constexpr bool certified = false;

    explicit FloatEvaluator(ExactReal alpha, double tol = 1e-6, int max_digits = 128)
        : alpha_(std::move(alpha)), tol_(tol), max_digits_(max_digits),
          cap_(tail_cap<double>(alpha_)) {}

    const ExactReal& alpha() const { return alpha_; }
    double cap() const { return cap_; }
    double tol() const { return tol_; }

    BrjunoEvaluation<double> evaluate(double x) const {
        return eval_float<double>(x, alpha_, tol_, cap_, max_digits_);
    }
    BrjunoEvaluation<double> evaluate(const ExactReal& x) const {
        const AlphaExpansion e = detail::expand_for_eval(x, alpha_, max_digits_);
        return detail::float_value_eval<double>(e, tol_, cap_);
    }
    double operator()(double x) const { return evaluate(x).value; }
    double operator()(const ExactReal& x) const { return evaluate(x).value; }

  private:
    ExactReal alpha_;
    double tol_;
    int max_digits_;
    double cap_;
};

/// B~(x) = sum_{k=0}^{K} log(a_{k+1}) / q_k over the regular CF of x.
template <class Real>
Real brjuno_tilde(const AlphaExpansion& rcf, std::size_t K) {
    using std::log;
    if (rcf.alpha != ExactReal(1)) throw std::domain_error("brjuno_tilde: needs the RCF (alpha=1)");
    if (rcf.status != ExpansionStatus::periodic && K + 1 > rcf.digit_count())
        throw std::out_of_range("brjuno_tilde: fewer than K+1 digits");
    const auto rows = convergents(rcf, K);
    Real sum(0);
    for (std::size_t k = 0; k <= K; ++k)
        sum += Real(log(Real(double(rcf.digit(k + 1).a)))) / detail::int_to_real<Real>(rows[k].q);
    return sum;
}

template <class Real>
Real brjuno_tilde(const ExactReal& x, std::size_t K, int max_digits = 512) {
    return brjuno_tilde<Real>(expand(x, ExactReal(1), max_digits), K);
}

inline double brjuno_tilde(double x, std::size_t K, int max_digits = 256) {
    const AlphaExpansion e = expand(x, ExactReal(1), max_digits);
    return brjuno_tilde<double>(e, std::min(K, e.digit_count() > 0 ? e.digit_count() - 1 : 0));
}

/// |B(x) - (-log x + x B(A_alpha x))| with both sides from the same evaluator.
template <class Real, class Eval>
Real functional_eq_residual(const Eval& eval, const ExactReal& x) {
    using std::abs;
    using std::log;
    const auto step = alpha_step(x, eval.alpha());
    const Real bx = eval(x);
    const Real bnext = eval(step.next);
    const Real xr = to_real<Real>(x);
    return abs(bx - (Real(-log(xr)) + xr * bnext));
}

inline double functional_eq_residual(const FloatEvaluator& eval, double x) {
    const AlphaExpansion e = expand(x, eval.alpha(), 8);
    if (e.digit_count() < 1) throw std::domain_error("functional_eq_residual: no digits");
    // evaluate the right-hand side at the exact orbit state, not its rounding
    const double bx = eval(x);
    return std::abs(bx - (-std::log(x) + x * eval(e.state(1))));
}

/// Lemma-P1 divergence floor near a rational: B(x) >= (log|x-p/q|^{-1} - log(4q^2)) / ((alpha+1) q).
struct DivergenceProbe {
    double eps;
    int side;
    double value;
    double bound;
    bool passed;
};

struct DivergenceReport {
    std::vector<DivergenceProbe> rows;
    bool all_passed = true;
};

inline DivergenceReport divergence_bound_check(const BigRational& r, const ExactReal& alpha,
                                               const std::vector<double>& epsilons,
                                               const FloatEvaluator& eval) {
    DivergenceReport rep;
    const double rd = BigRational(r).get_d();
    const double q = double(r.get_den().get_d());
    const double ad = to_real<double>(alpha);
    for (double eps : epsilons) {
        for (int side : {-1, +1}) {
            const double x = rd + side * eps;
            if (x <= 0 || x >= 1) continue;
            // exact distance between the dyadic sample and p/q
            BigRational xr;
            mpq_set_d(xr.get_mpq_t(), x);
            const ExactReal diff = (ExactReal(xr) - ExactReal(r)).abs();
            if (diff.is_zero()) continue;
            const double dist = to_real<double>(diff);
            const double bound = (std::log(1.0 / dist) - std::log(4 * q * q)) / ((ad + 1) * q);
            const double value = eval(x);
            const bool ok = value >= bound;
            rep.rows.push_back({eps, side, value, bound, ok});
            if (!ok) rep.all_passed = false;
        }
    }
    return rep;
}

// ---- shared constants ------------------------------------------------------

/// B_1(g) = log(1/g)/(1-g), the global minimum value of B_1.
template <class Real>
const Real& golden_minimum_value() {
    static const Real v = eval_periodic<Real>(golden(), ExactReal(1)).value;
    return v;
}

/// B_{1/2}(gamma) = log(1/gamma)/(1-gamma), the minimum of B_{1/2}.
template <class Real>
const Real& silver_minimum_value() {
    static const Real v =
        eval_periodic<Real>(silver(), ExactReal(BigInt(1), BigInt(2))).value;
    return v;
}

}  // namespace brjuno
