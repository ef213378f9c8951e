#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "brjuno/exact_real.hpp"
#include "brjuno/mobius.hpp"

namespace brjuno {

/// One alpha-CF digit (a_n, eps_n).  a >= 1 always; a >= 2 for alpha = 1/2, n >= 1.
struct Digit {
    std::int64_t a;
    int eps;

    friend bool operator==(const Digit& x, const Digit& y) { return x.a == y.a && x.eps == y.eps; }
};

using Block = std::vector<Digit>;

enum class ExpansionStatus { terminated, periodic, truncated };

namespace detail {

struct StructuralLess {
    bool operator()(const ExactReal& x, const ExactReal& y) const {
        int c = cmp(x.d(), y.d());
        if (c == 0) c = cmp(x.c(), y.c());
        if (c == 0) c = cmp(x.a(), y.a());
        if (c == 0) c = cmp(x.b(), y.b());
        return c < 0;
    }
};

}  // namespace detail

/// Digit stream of x under A_alpha together with the exact orbit states.
/// states[j] = x_j, digits[j] = (a_{j+1}, eps_{j+1}); states.size() = digits.size() + 1.
/// Terminated: last state is 0 (rational input).  Periodic: states[preperiod] ==
/// states[preperiod + period], so digits repeat from index `preperiod` on.
struct AlphaExpansion {
    ExactReal alpha;
    ExactReal input;
    std::int64_t a0 = 0;
    int eps0 = 1;
    std::vector<Digit> digits;
    std::vector<ExactReal> states;
    ExpansionStatus status = ExpansionStatus::truncated;
    std::size_t preperiod = 0;
    std::size_t period = 0;
    bool from_float = false;

    std::size_t digit_count() const { return digits.size(); }
    bool has_digit(std::size_t n) const {
        return n >= 1 && (status == ExpansionStatus::periodic || n <= digits.size());
    }

    /// (a_n, eps_n) for n >= 1, unrolling the period when there is one.
    Digit digit(std::size_t n) const {
        if (n == 0 || n > digits.size()) {
            if (status != ExpansionStatus::periodic || n == 0)
                throw std::out_of_range("AlphaExpansion: digit index");
            const std::size_t j = preperiod + (n - 1 - preperiod) % period;
            return digits[j];
        }
        return digits[n - 1];
    }

    /// x_j, unrolling the period when there is one.
    const ExactReal& state(std::size_t j) const {
        if (j < states.size()) return states[j];
        if (status != ExpansionStatus::periodic)
            throw std::out_of_range("AlphaExpansion: state index");
        return states[preperiod + (j - preperiod) % period];
    }
};

/// One application of A_alpha at an exact point plus the digit it emits.
struct StepResult {
    Digit digit;
    ExactReal next;
};

inline StepResult alpha_step(const ExactReal& x, const ExactReal& alpha) {
    if (x.sign() <= 0 || compare(x, alpha) > 0)
        throw std::domain_error("alpha_step: x outside (0, alpha]");
    const ExactReal inv = x.inverse();
    const BigInt a = shifted_floor(inv, alpha);
    if (a < 1) throw std::logic_error("alpha_step: digit < 1");
    if (!a.fits_slong_p()) throw std::domain_error("alpha_step: digit exceeds int64");
    const ExactReal frac = inv - ExactReal(a);
    const int s = frac.sign();
    return {{a.get_si(), s < 0 ? -1 : +1}, frac.abs()};
}

namespace detail {

inline void check_alpha(const ExactReal& alpha) {
    if (compare(alpha, ExactReal(BigInt(1), BigInt(2))) < 0 || compare(alpha, ExactReal(1)) > 0)
        throw std::domain_error("expand: alpha outside [1/2, 1]");
}

inline AlphaExpansion expand_impl(const ExactReal& x, const ExactReal& alpha, int max_digits,
                                  bool float_guard, const BigInt& q_cap = BigInt(0)) {
    check_alpha(alpha);
    if (max_digits <= 0) throw std::domain_error("expand: max_digits must be positive");

    AlphaExpansion e;
    e.alpha = alpha;
    e.input = x;
    e.from_float = float_guard;

    // index-zero digit a_0 = [x - alpha + 1]; 0 exactly when x in (0, alpha)
    if (x.sign() > 0 && compare(x, alpha) < 0) {
        e.a0 = 0;
        e.eps0 = 1;
        e.states.push_back(x);
    } else {
        const BigInt a0 = shifted_floor(x, alpha);
        if (!a0.fits_slong_p()) throw std::domain_error("expand: leading digit exceeds int64");
        const ExactReal frac = x - ExactReal(a0);
        e.a0 = a0.get_si();
        e.eps0 = frac.sign() < 0 ? -1 : +1;
        e.states.push_back(frac.abs());
    }

    if (e.states.back().is_zero()) {
        e.status = ExpansionStatus::terminated;
        return e;
    }

    std::map<ExactReal, std::size_t, StructuralLess> seen;
    if (!e.states[0].is_rational()) seen.emplace(e.states[0], 0);

    // convergent denominators, needed only for the float-path guard
    BigInt q_prev = 0, q_cur = 1;  // q_{-1}, q_0
    int eps_prev = e.eps0;
    const BigInt guard_den = BigInt(1) << 40;

    for (int n = 1; n <= max_digits; ++n) {
        const ExactReal& cur = e.states.back();
        if (float_guard && compare(cur, ExactReal(q_cur * q_cur, guard_den)) < 0) {
            e.status = ExpansionStatus::truncated;
            return e;
        }
        if (q_cap > 0 && q_cur > q_cap) {
            e.status = ExpansionStatus::truncated;
            return e;
        }
        auto [digit, next] = alpha_step(cur, alpha);
        e.digits.push_back(digit);
        e.states.push_back(std::move(next));

        BigInt q_next = digit.a * q_cur + eps_prev * q_prev;
        q_prev = std::move(q_cur);
        q_cur = std::move(q_next);
        eps_prev = digit.eps;

        if (e.states.back().is_zero()) {
            e.status = ExpansionStatus::terminated;
            return e;
        }
        if (!e.states.back().is_rational()) {
            auto [it, inserted] = seen.emplace(e.states.back(), e.states.size() - 1);
            if (!inserted) {
                e.status = ExpansionStatus::periodic;
                e.preperiod = it->second;
                e.period = e.states.size() - 1 - it->second;
                return e;
            }
        }
    }
    e.status = ExpansionStatus::truncated;
    return e;
}

}  // namespace detail

/// Exact expansion: rationals terminate, quadratic surds close a period when an
/// orbit state revisits; otherwise TruncatedAt(max_digits) without any
/// aperiodicity claim.
inline AlphaExpansion expand(const ExactReal& x, const ExactReal& alpha, int max_digits = 256) {
    return detail::expand_impl(x, alpha, max_digits, false);
}

/// Float path: the double is expanded as its exact dyadic rational value and the
/// stream is cut when x_n < 2^-40 q_n^2, past which the digits reflect the
/// double rather than the real it approximates.
inline AlphaExpansion expand(double x, const ExactReal& alpha, int max_digits = 256) {
    if (!(x == x) || x > 1e300 || x < -1e300) throw std::domain_error("expand: non-finite input");
    BigRational r;
    mpq_set_d(r.get_mpq_t(), x);
    return detail::expand_impl(ExactReal(r), alpha, max_digits, true);
}

/// (p_n, q_n, beta_n) with beta_n = prod_{i<=n} x_i = |q_n x - p_n|.
struct ConvergentRow {
    std::size_t n;
    BigInt p, q;
    ExactReal beta;
};

/// Rows n = 0..depth; row n consumes digits a_1..a_n.  Seeds follow
/// p_{-1} = q_{-2} = 1, p_{-2} = q_{-1} = 0, so row 0 is (a_0, 1, x_0).
inline std::vector<ConvergentRow> convergents(const AlphaExpansion& e, std::size_t depth) {
    if (!(e.status == ExpansionStatus::periodic) && depth > e.digits.size())
        throw std::out_of_range("convergents: depth exceeds available digits");
    std::vector<ConvergentRow> rows;
    rows.reserve(depth + 1);
    BigInt p_prev = 1, q_prev = 0;  // p_{-1}, q_{-1}
    BigInt p_cur = e.a0, q_cur = 1;
    ExactReal beta = e.state(0);
    rows.push_back({0, p_cur, q_cur, beta});
    int eps_prev = e.eps0;
    for (std::size_t n = 1; n <= depth; ++n) {
        const Digit dg = e.digit(n);
        BigInt p_next = dg.a * p_cur + eps_prev * p_prev;
        BigInt q_next = dg.a * q_cur + eps_prev * q_prev;
        p_prev = std::move(p_cur);
        q_prev = std::move(q_cur);
        p_cur = std::move(p_next);
        q_cur = std::move(q_next);
        eps_prev = dg.eps;
        beta = beta * e.state(n);
        rows.push_back({n, p_cur, q_cur, beta});
    }
    return rows;
}

/// First n digits of an expansion as a block.
inline Block prefix_block(const AlphaExpansion& e, std::size_t n) {
    Block s;
    s.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) s.push_back(e.digit(i));
    return s;
}

inline Mobius block_mobius(const Block& s) {
    Mobius m = Mobius::identity();
    for (const Digit& d : s) m = m * Mobius::digit(d.a, d.eps);
    return m;
}

/// S . y: the Mobius product of the digit matrices applied to y.
inline ExactReal string_action(const Block& s, const ExactReal& y) {
    return block_mobius(s).apply(y);
}

/// Cylinder I_S parametrized by y -> S . y near the rational endpoint S . 0.
struct CylinderDesc {
    Block block;
    ExactReal endpoint;             // S . 0
    bool orientation_preserving;    // sign of det(S)
    ExactReal delta;                // |S.0 - S.alpha|, width of the branch image
};

inline CylinderDesc cylinder_desc(const Block& s, const ExactReal& alpha) {
    const Mobius m = block_mobius(s);
    CylinderDesc desc;
    desc.block = s;
    desc.endpoint = m.apply(ExactReal(0));
    desc.orientation_preserving = m.det() > 0;
    desc.delta = (desc.endpoint - m.apply(alpha)).abs();
    return desc;
}

/// The two alpha-CF expansions of a rational: its own terminating digit string
/// and the sibling block parametrizing the opposite side of the point.
struct TwoExpansions {
    CylinderDesc primary;
    CylinderDesc sibling;
};

inline TwoExpansions rational_two_expansions(const BigRational& r, const ExactReal& alpha,
                                             int max_digits = 4096) {
    const ExactReal x(r);
    if (x.sign() <= 0 || compare(x, alpha) >= 0)
        throw std::domain_error("rational_two_expansions: r outside (0, alpha)");

    const AlphaExpansion e = expand(x, alpha, max_digits);
    if (e.status != ExpansionStatus::terminated)
        throw std::logic_error("rational_two_expansions: rational did not terminate");
    TwoExpansions result;
    result.primary = cylinder_desc(prefix_block(e, e.digit_count()), alpha);

    // An orientation-preserving block covers a right neighbourhood of r, so the
    // sibling lives on the opposite side; probe it with a shrinking offset.
    const int side = result.primary.orientation_preserving ? -1 : +1;
    ExactReal delta = ExactReal(BigInt(1), 4 * BigInt(r.get_den()) * BigInt(r.get_den()));
    for (int attempt = 0; attempt < 64; ++attempt, delta = delta / ExactReal(16)) {
        const ExactReal y = side > 0 ? x + delta : x - delta;
        if (y.sign() <= 0 || compare(y, alpha) >= 0) continue;
        const AlphaExpansion probe = expand(y, alpha, max_digits);
        // find the prefix whose endpoint is r
        BigInt p_prev = 1, q_prev = 0, p_cur = probe.a0, q_cur = 1;
        int eps_prev = probe.eps0;
        for (std::size_t n = 1; n <= probe.digit_count(); ++n) {
            const Digit dg = probe.digit(n);
            BigInt p_next = dg.a * p_cur + eps_prev * p_prev;
            BigInt q_next = dg.a * q_cur + eps_prev * q_prev;
            p_prev = std::move(p_cur);
            q_prev = std::move(q_cur);
            p_cur = std::move(p_next);
            q_cur = std::move(q_next);
            eps_prev = dg.eps;
            if (p_cur * r.get_den() == BigInt(r.get_num()) * q_cur) {
                result.sibling = cylinder_desc(prefix_block(probe, n), alpha);
                if (result.sibling.orientation_preserving ==
                    result.primary.orientation_preserving)
                    throw std::logic_error("rational_two_expansions: orientations coincide");
                return result;
            }
        }
    }
    throw std::logic_error("rational_two_expansions: sibling block not found");
}

/// Indices n(k) aligning alpha-convergents with regular-CF convergents:
/// (p_k, q_k) = (P_{n(k)}, Q_{n(k)}), with gaps n(k) - n(k-1) in {1, 2}.
struct RcfMatch {
    std::vector<std::size_t> n_of_k;
    std::vector<int> gaps;
};

/// Match two already-computed expansions of the same point. When `require_all`
/// is false the match stops early once either digit stream runs out.
inline RcfMatch rcf_match(const AlphaExpansion& ea, const AlphaExpansion& e1, std::size_t K,
                          bool require_all = true) {
    std::size_t ka = K;
    if (ea.status != ExpansionStatus::periodic) ka = std::min(ka, ea.digit_count());
    const std::vector<ConvergentRow> rows_a = convergents(ea, ka);

    std::size_t avail1 = e1.status == ExpansionStatus::periodic ? 2 * ka + 4 : e1.digit_count();
    const std::vector<ConvergentRow> rows_1 = convergents(e1, avail1);

    RcfMatch m;
    // row 0 differs when x > alpha (the index-zero reduction kicks in), so even
    // n(0) is found by search; it lands at 0 or 1
    long prev = -1;
    for (std::size_t k = 0; k < rows_a.size(); ++k) {
        const std::size_t lo = std::size_t(prev + 1);
        std::optional<std::size_t> found;
        for (std::size_t n = lo; n < rows_1.size() && n <= lo + 1; ++n) {
            if (rows_1[n].p == rows_a[k].p && rows_1[n].q == rows_a[k].q) {
                found = n;
                break;
            }
        }
        if (!found) {
            if (!require_all && lo + 1 >= rows_1.size()) break;  // RCF digits exhausted
            throw std::logic_error("rcf_match: alpha-convergent missing from RCF list");
        }
        if (k > 0) m.gaps.push_back(static_cast<int>(*found - std::size_t(prev)));
        m.n_of_k.push_back(*found);
        prev = long(*found);
    }
    if (require_all && m.n_of_k.size() != K + 1)
        throw std::logic_error("rcf_match: fewer matches than requested");
    return m;
}

inline RcfMatch rcf_match(const ExactReal& x, const ExactReal& alpha, std::size_t K,
                          int max_digits = 512) {
    if (compare(alpha, golden()) <= 0)
        throw std::domain_error("rcf_match: requires alpha > g");
    return rcf_match(expand(x, alpha, max_digits), expand(x, ExactReal(1), max_digits), K);
}

inline RcfMatch rcf_match(double x, const ExactReal& alpha, std::size_t K, int max_digits = 256) {
    if (compare(alpha, golden()) <= 0)
        throw std::domain_error("rcf_match: requires alpha > g");
    return rcf_match(expand(x, alpha, max_digits), expand(x, ExactReal(1), max_digits), K, false);
}

/// Per-clause outcome of the Prop. 2.1 checks over one expansion's convergents.
struct ClauseResult {
    bool applicable = false;
    bool passed = true;
    std::optional<std::size_t> witness;
};

struct Prop21Report {
    ClauseResult q_increasing;     // (i)  q_{n+1} > q_n > 0
    ClauseResult p_positive;       // (ii) p_n > 0 for x > 0
    ClauseResult beta_window;      // (iii) 1/(1+alpha) < beta_n q_{n+1} < 1/alpha
    ClauseResult golden_bound;     // (iv) alpha > g: beta_n <= alpha g^n
    ClauseResult silver_bound;     // (v)  alpha <= g: beta_n <= alpha gamma^n

    bool all_passed() const {
        for (const ClauseResult* c :
             {&q_increasing, &p_positive, &beta_window, &golden_bound, &silver_bound})
            if (c->applicable && !c->passed) return false;
        return true;
    }
};

inline Prop21Report prop21_check(const std::vector<ConvergentRow>& rows, const ExactReal& alpha) {
    Prop21Report rep;
    if (rows.size() < 2) return rep;

    auto fail = [](ClauseResult& c, std::size_t n) {
        if (c.passed) {
            c.passed = false;
            c.witness = n;
        }
    };

    // rows with beta = 0 mark a terminated rational; the proposition concerns
    // the infinite expansions, so clauses stop there.
    std::size_t last = rows.size() - 1;
    while (last > 0 && rows[last].beta.is_zero()) --last;

    rep.q_increasing.applicable = rep.p_positive.applicable = rep.beta_window.applicable = true;
    const bool above_golden = compare(alpha, golden()) > 0;
    rep.golden_bound.applicable = above_golden;
    rep.silver_bound.applicable = !above_golden;

    const ExactReal one(1);
    const ExactReal lo_bound = one / (one + alpha);
    const ExactReal hi_bound = one / alpha;
    ExactReal gpow(1), spow(1);

    for (std::size_t n = 1; n <= last; ++n) {
        if (rows[n].q <= 0) fail(rep.q_increasing, n);
        if (n >= 2 && rows[n].q <= rows[n - 1].q) fail(rep.q_increasing, n);
        if (rows[n].p <= 0) fail(rep.p_positive, n);
        if (n + 1 <= last) {
            const ExactReal bq = rows[n].beta * ExactReal(rows[n + 1].q);
            if (!(compare(lo_bound, bq) < 0 && compare(bq, hi_bound) < 0)) fail(rep.beta_window, n);
        }
        gpow = gpow * golden();
        spow = spow * silver();
        if (above_golden) {
            if (compare(rows[n].beta, alpha * gpow) > 0) fail(rep.golden_bound, n);
        } else {
            if (compare(rows[n].beta, alpha * spow) > 0) fail(rep.silver_bound, n);
        }
    }
    return rep;
}

inline Prop21Report prop21_check(const AlphaExpansion& e, std::size_t depth) {
    const std::size_t d =
        e.status == ExpansionStatus::periodic ? depth : std::min(depth, e.digit_count());
    return prop21_check(convergents(e, d), e.alpha);
}

}  // namespace brjuno
