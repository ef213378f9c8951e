#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "brjuno/evaluation.hpp"
#include "brjuno/exact_real.hpp"
#include "brjuno/expansion.hpp"

namespace brjuno {

// ---- orbit maps toward the two cusp minima ---------------------------------

/// x -> 1/(1+x) approaches g; x -> 1/(2+x) approaches gamma.
enum class ScalingMap { golden, silver };

inline const ExactReal& scaling_fixpoint(ScalingMap m) {
    return m == ScalingMap::golden ? golden() : silver();
}

inline ExactReal scaling_apply(ScalingMap m, const ExactReal& x) {
    return (ExactReal(m == ScalingMap::golden ? 1 : 2) + x).inverse();
}

/// F_{-1} = 1, F_0 = 0, F_1 = 1, ...
inline BigInt fibonacci(long n) {
    if (n == -1) return 1;
    if (n < -1) throw std::domain_error("fibonacci: n < -1");
    BigInt prev = 1, cur = 0;  // F_{-1}, F_0
    for (long i = 0; i < n; ++i) {
        BigInt next = prev + cur;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// x_n for n in [n_lo, n_hi] under the chosen map, exactly.
inline std::vector<ExactReal> scaling_orbit(ScalingMap m, const ExactReal& x0, int n_lo,
                                            int n_hi) {
    if (n_lo < 0 || n_hi < n_lo) throw std::domain_error("scaling_orbit: bad range");
    std::vector<ExactReal> out;
    ExactReal x = x0;
    for (int n = 0; n <= n_hi; ++n) {
        if (n >= n_lo) out.push_back(x);
        x = scaling_apply(m, x);
    }
    return out;
}

// ---- sigma constant ---------------------------------------------------------

template <class Real>
struct SigmaResult {
    Real value;
    Real tail_estimate;
};

/// sigma = exp(-sum_{n=1}^{N} log(g^2 F_{2n+2}/F_{2n})); terms decay like g^4.
template <class Real>
SigmaResult<Real> sigma_constant(int N) {
    using std::exp;
    using std::log;
    if (N < 1) throw std::domain_error("sigma_constant: N >= 1");
    const Real gsq = to_real<Real>(golden() * golden());
    Real sum(0), last(0);
    for (int n = 1; n <= N; ++n) {
        const Real ratio = detail::int_to_real<Real>(fibonacci(2 * n + 2)) /
                           detail::int_to_real<Real>(fibonacci(2 * n));
        last = log(gsq * ratio);
        sum += last;
    }
    const Real value = exp(-sum);
    const Real g4 = gsq * gsq;
    return {value, value * last * g4 / (Real(1) - g4)};
}

/// Bootstrap value of sigma_constant(50), computed once per precision.
template <class Real>
const Real& golden_scaling_sigma() {
    static const Real v = sigma_constant<Real>(50).value;
    return v;
}

/// Frozen fixture for regression checks (sigma_constant(50) at 134 bits).
inline double sigma_frozen() { return 0.85410196624968454; }

// ---- scaling sequences ------------------------------------------------------

/// Orbit x_n under Phi or Psi with the excess E_n = B(x_n) - B(fix), offsets
/// delta_n, pair products lambda_n = x_{2n+1} x_{2n}, and the constants l, sigma.
template <class Real>
struct ScalingSequence {
    ScalingMap map = ScalingMap::golden;
    ExactReal x0;
    std::vector<ExactReal> points;
    std::vector<Real> excess;
    std::vector<Real> offsets;
    std::vector<Real> pair_products;  // index n >= 1; [0] is unused
    Real fix_value{};                 // B(fixpoint)
    Real linear_coeff{};              // l = 1/fix - B(fix)
    Real sigma{};
    bool certified = false;
};

template <class Real, class Eval>
ScalingSequence<Real> scaling_sequence(ScalingMap map, const ExactReal& x0, int N,
                                       const Eval& eval) {
    if (N < 2) throw std::domain_error("scaling_sequence: N >= 2");
    const ExactReal& fix = scaling_fixpoint(map);
    const ExactReal hi_end =
        map == ScalingMap::golden ? ExactReal(BigInt(1), BigInt(2)) : ExactReal(BigInt(2), BigInt(5));
    const bool in_range = x0.sign() > 0 && compare(x0, hi_end) < 0;
    if (!in_range && !(x0 == fix))
        throw std::domain_error("scaling_sequence: x0 outside the map's interval");

    ScalingSequence<Real> seq;
    seq.map = map;
    seq.x0 = x0;
    seq.certified = std::decay_t<Eval>::certified;
    seq.points.reserve(N + 1);
    ExactReal x = x0;
    for (int n = 0; n <= N; ++n) {
        seq.points.push_back(x);
        x = scaling_apply(map, x);
    }

    if (map == ScalingMap::golden) {
        // x_n = (F_n + x0 F_{n-1})/(F_{n+1} + x0 F_n), cross-checked exactly
        for (int n = 1; n <= N; ++n) {
            const ExactReal closed = (ExactReal(fibonacci(n)) + x0 * ExactReal(fibonacci(n - 1))) /
                                     (ExactReal(fibonacci(n + 1)) + x0 * ExactReal(fibonacci(n)));
            if (!(compare(closed, seq.points[n]) == 0))
                throw std::logic_error("scaling_sequence: Fibonacci form mismatch");
        }
    }

    seq.fix_value = eval(fix);
    const Real fix_r = to_real<Real>(fix);
    seq.linear_coeff = Real(1) / fix_r - seq.fix_value;
    seq.sigma = golden_scaling_sigma<Real>();
    seq.excess.reserve(N + 1);
    seq.offsets.reserve(N + 1);
    for (int n = 0; n <= N; ++n) {
        seq.excess.push_back(eval(seq.points[n]) - seq.fix_value);
        seq.offsets.push_back(to_real<Real>(seq.points[n] - fix));
    }
    seq.pair_products.assign(1, Real(0));
    for (int n = 1; 2 * n + 1 <= N; ++n)
        seq.pair_products.push_back(to_real<Real>(seq.points[2 * n + 1] * seq.points[2 * n]));
    return seq;
}

// ---- scaling-law checks -----------------------------------------------------

template <class Real>
struct ScalingLawReport {
    bool pair_recursion = true;      // E_{2n+1} >= lambda_n E_{2n-1}
    bool lambda_floor = true;        // lambda_n >= 1/3            (golden)
    bool lambda_sandwich = true;     // Fibonacci sandwich, exact  (golden)
    bool sigma_lower = true;         // E_{2n+1} >= sigma E_1 g^{2n} (golden)
    bool stepwise_recursion = true;  // E_{n+1} >= x_{n+1} E_n - l delta_{n+1}
    std::optional<std::size_t> witness;
    Real c3{};  // silver: min_n E_{2n+1}/gamma^{2n}

    bool all_passed() const {
        return pair_recursion && lambda_floor && lambda_sandwich && sigma_lower &&
               stepwise_recursion;
    }
};

template <class Real>
ScalingLawReport<Real> scaling_law_check(const ScalingSequence<Real>& seq) {
    using std::pow;
    if (!seq.certified)
        throw std::domain_error("scaling_law_check: requires a certified evaluator");
    ScalingLawReport<Real> rep;
    const std::size_t N = seq.points.size() - 1;
    const Real slack = Real(1000) * std::numeric_limits<Real>::epsilon();

    auto fail = [&rep](bool& flag, std::size_t n) {
        flag = false;
        if (!rep.witness) rep.witness = n;
    };

    for (std::size_t n = 0; n + 1 <= N; ++n) {
        const Real rhs = to_real<Real>(seq.points[n + 1]) * seq.excess[n] -
                         seq.linear_coeff * seq.offsets[n + 1];
        if (!(seq.excess[n + 1] >= rhs - slack)) fail(rep.stepwise_recursion, n);
    }

    const bool is_golden = seq.map == ScalingMap::golden;
    const Real fix_sq = to_real<Real>(seq.map == ScalingMap::golden
                                          ? golden() * golden()
                                          : silver() * silver());
    Real fix_pow(1);
    Real c3 = std::numeric_limits<Real>::infinity();
    for (std::size_t n = 1; n < seq.pair_products.size(); ++n) {
        const Real lam = seq.pair_products[n];
        if (!(seq.excess[2 * n + 1] >= lam * seq.excess[2 * n - 1] - slack))
            fail(rep.pair_recursion, n);
        if (is_golden) {
            const ExactReal lam_exact = seq.points[2 * n + 1] * seq.points[2 * n];
            if (!(compare(lam_exact, ExactReal(BigInt(1), BigInt(3))) >= 0))
                fail(rep.lambda_floor, n);
            const ExactReal lo(fibonacci(2 * n), fibonacci(2 * n + 2));
            const ExactReal hi(fibonacci(2 * n + 2), fibonacci(2 * n + 4));
            if (!(compare(lo, lam_exact) <= 0 && compare(lam_exact, hi) <= 0))
                fail(rep.lambda_sandwich, n);
        }
        fix_pow *= fix_sq;  // g^{2n} or gamma^{2n}
        if (is_golden) {
            if (!(seq.excess[2 * n + 1] >= seq.sigma * seq.excess[1] * fix_pow - slack))
                fail(rep.sigma_lower, n);
        } else {
            const Real ratio = seq.excess[2 * n + 1] / fix_pow;
            if (ratio < c3) c3 = ratio;
        }
    }
    if (!is_golden) {
        rep.c3 = c3;
        if (!(c3 > 0)) fail(rep.sigma_lower, 0);
    }
    return rep;
}

/// Exact check of t_n - g = g^{4n+3}(1+g^2)/(1-g^{4n+4}) with the companion
/// window 1 <= (1+g^2)/(1-g^{4n+4}) <= G, where t_n = F_{2n+1}/F_{2n+2}.
struct FibGapIdentity {
    bool exact_identity = true;
    bool ratio_window = true;
};

inline FibGapIdentity fib_ratio_gap_identity(int n_max) {
    FibGapIdentity rep;
    const ExactReal one(1);
    const ExactReal gsq = golden() * golden();
    for (int n = 1; n <= n_max; ++n) {
        const ExactReal tn(fibonacci(2 * n + 1), fibonacci(2 * n + 2));
        const ExactReal lhs = tn - golden();
        const ExactReal factor = (one + gsq) / (one - pow_int(golden(), 4 * n + 4));
        const ExactReal rhs = pow_int(golden(), 4 * n + 3) * factor;
        if (!(compare(lhs, rhs) == 0)) rep.exact_identity = false;
        if (!(compare(one, factor) <= 0 && compare(factor, golden_inverse()) <= 0))
            rep.ratio_window = false;
    }
    return rep;
}

// ---- cusp fitting -----------------------------------------------------------

template <class Real>
struct LineFit {
    Real slope{};
    Real intercept{};
    Real max_residual{};
};

template <class Real>
LineFit<Real> least_squares(const std::vector<std::pair<Real, Real>>& pts) {
    using std::abs;
    if (pts.size() < 2) throw std::domain_error("least_squares: need >= 2 points");
    Real sx(0), sy(0), sxx(0), sxy(0);
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const Real n(double(pts.size()));
    const Real denom = n * sxx - sx * sx;
    LineFit<Real> fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (const auto& [x, y] : pts) {
        const Real r = abs(y - (fit.slope * x + fit.intercept));
        if (r > fit.max_residual) fit.max_residual = r;
    }
    return fit;
}

enum class Side { left, right, both };

/// Least-squares line through (log|x - m|, log(B(x) - B(m))).  A sample at or
/// below the minimum contradicts minimality and is surfaced as an error.
template <class Real, class Eval>
LineFit<Real> cusp_fit(const ExactReal& min_point, const std::vector<ExactReal>& samples,
                       const Eval& eval, Side side = Side::both) {
    using std::log;
    const Real bm = eval(min_point);
    std::vector<std::pair<Real, Real>> pts;
    pts.reserve(samples.size());
    for (const ExactReal& x : samples) {
        const int c = compare(x, min_point);
        if (c == 0) continue;
        if (side == Side::left && c > 0) continue;
        if (side == Side::right && c < 0) continue;
        const Real dx = to_real<Real>((x - min_point).abs());
        const Real e = eval(x) - bm;
        if (!(e > 0))
            throw std::domain_error("cusp_fit: sample not above the minimum value");
        pts.emplace_back(log(dx), log(e));
    }
    return least_squares<Real>(pts);
}

// ---- minima scans -----------------------------------------------------------

struct LocalMinimum {
    double x;
    double value;
    double cusp_slope;
};

struct MinimaReport {
    double alpha{};
    double lo{}, hi{};
    std::size_t n_points{};
    unsigned threads{};
    double argmin{};
    double min_value{};
    std::vector<LocalMinimum> local_minima;
};

namespace detail {

template <class F>
void parallel_for(std::size_t n, unsigned threads, const F& body) {
    if (threads <= 1 || n < 2 * threads) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

/// Grid scan with irrational jitter: x_i = lo + (i + g/2) h, so no sample is a
/// low-denominator rational.  Local-minimum candidates (below both neighbours)
/// are confirmed by a 10-point pass at 10x resolution and annotated with a
/// rough cusp-slope estimate.
inline MinimaReport scan_minima(const FloatEvaluator& eval, double lo, double hi,
                                std::size_t n_points, unsigned threads = 1,
                                bool refine = true) {
    if (!(lo < hi)) throw std::domain_error("scan_minima: empty interval");
    if (n_points < 1000) throw std::domain_error("scan_minima: needs >= 1000 points");
    const double gd = to_real<double>(golden());
    const double h = (hi - lo) / double(n_points);

    std::vector<double> xs(n_points), vs(n_points);
    for (std::size_t i = 0; i < n_points; ++i) xs[i] = lo + (double(i) + gd / 2) * h;
    detail::parallel_for(n_points, threads, [&](std::size_t i) { vs[i] = eval(xs[i]); });

    MinimaReport rep;
    rep.alpha = to_real<double>(eval.alpha());
    rep.lo = lo;
    rep.hi = hi;
    rep.n_points = n_points;
    rep.threads = threads;

    std::size_t best = 0;
    for (std::size_t i = 1; i < n_points; ++i)
        if (vs[i] < vs[best]) best = i;
    rep.argmin = xs[best];
    rep.min_value = vs[best];

    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i + 1 < n_points; ++i)
        if (vs[i] < vs[i - 1] && vs[i] < vs[i + 1] && std::isfinite(vs[i]))
            candidates.push_back(i);

    if (!refine) {
        for (std::size_t i : candidates) rep.local_minima.push_back({xs[i], vs[i], 0.0});
        return rep;
    }

    // 10-point refinement at 10x resolution across (x_i - h, x_i + h)
    std::vector<std::optional<LocalMinimum>> refined(candidates.size());
    detail::parallel_for(candidates.size(), threads, [&](std::size_t c) {
        const std::size_t i = candidates[c];
        double ry[10], rx[10];
        double rmin = vs[i];
        std::size_t rbest = 10;  // sentinel: candidate itself
        for (int j = 0; j < 10; ++j) {
            rx[j] = xs[i] - h + (j + gd / 2) * (2 * h / 10);
            ry[j] = eval(rx[j]);
            if (ry[j] < rmin) {
                rmin = ry[j];
                rbest = j;
            }
        }
        if (!(rmin < std::min(vs[i - 1], vs[i + 1]))) return;  // sampling noise
        const double cx = rbest == 10 ? xs[i] : rx[rbest];
        std::vector<std::pair<double, double>> pts;
        for (int j = 0; j < 10; ++j) {
            const double dx = std::abs(rx[j] - cx);
            const double dv = ry[j] - rmin;
            if (dx > 0 && dv > 0) pts.emplace_back(std::log(dx), std::log(dv));
        }
        double slope = 0;
        if (pts.size() >= 2) slope = least_squares<double>(pts).slope;
        refined[c] = LocalMinimum{cx, rmin, slope};
    });
    for (const auto& lm : refined)
        if (lm) rep.local_minima.push_back(*lm);
    return rep;
}

// ---- comparison with the Gauss-map Brjuno function --------------------------

struct ComparisonSample {
    double x;
    double b_alpha;
    double b_one;
    double slack;
    std::size_t matched_k;
};

struct ComparisonReport {
    double alpha{};
    std::uint64_t seed{};
    std::vector<ComparisonSample> samples;
    double min_slack = std::numeric_limits<double>::infinity();
    std::size_t gap1_count = 0, gap2_count = 0;
};

/// B_alpha(x) >= B_1(x) for alpha in (g, 1): both sides are evaluated as
/// partial sums at matched depths K and n(K), which the telescoped form of the
/// sum makes directly comparable; the n(k) map itself is the other claim under
/// test and comes from exact convergent matching.
inline ComparisonReport compare_alpha_vs_gauss(const ExactReal& alpha,
                                               const std::vector<double>& xs) {
    if (!(compare(alpha, golden()) > 0 && compare(alpha, ExactReal(1)) < 0))
        throw std::domain_error("compare_alpha_vs_gauss: alpha must lie in (g, 1)");
    ComparisonReport rep;
    rep.alpha = to_real<double>(alpha);
    const ExactReal one(1);
    for (double x : xs) {
        const AlphaExpansion ea = expand(x, alpha, 256);
        const AlphaExpansion e1 = expand(x, one, 256);
        if (ea.status == ExpansionStatus::terminated || e1.status == ExpansionStatus::terminated)
            continue;  // dyadic rational hit: both sides are +inf
        const RcfMatch m = rcf_match(ea, e1, ea.digit_count(), false);
        if (m.n_of_k.size() < 2) continue;
        const std::size_t K = m.n_of_k.size() - 1;
        const double b_alpha = partial_sum<double>(ea, K);
        const double b_one = partial_sum<double>(e1, m.n_of_k.back());
        const double slack = b_alpha - b_one;
        for (int gp : m.gaps) (gp == 1 ? rep.gap1_count : rep.gap2_count) += 1;
        rep.samples.push_back({x, b_alpha, b_one, slack, K});
        if (slack < rep.min_slack) rep.min_slack = slack;
    }
    return rep;
}

inline ComparisonReport compare_alpha_vs_gauss(const ExactReal& alpha, std::size_t n_samples,
                                               std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double ad = to_real<double>(alpha);
    std::vector<double> xs;
    xs.reserve(n_samples);
    while (xs.size() < n_samples) {
        const double u = double(rng() >> 11) * 0x1.0p-53;
        const double x = u * ad;
        if (x > 1e-9) xs.push_back(x);
    }
    ComparisonReport rep = compare_alpha_vs_gauss(alpha, xs);
    rep.seed = seed;
    return rep;
}

// ---- noble numbers ----------------------------------------------------------

struct NobleResult {
    bool noble = false;
    Block witness;  // x = witness . g
};

/// Noble <=> the RCF expansion is eventually the all-ones tail.
inline NobleResult noble_check(const AlphaExpansion& rcf) {
    if (rcf.alpha != ExactReal(1)) throw std::domain_error("noble_check: needs alpha = 1");
    NobleResult res;
    if (rcf.status != ExpansionStatus::periodic) return res;
    for (std::size_t j = rcf.preperiod; j < rcf.preperiod + rcf.period; ++j)
        if (!(rcf.digits[j].a == 1 && rcf.digits[j].eps == 1)) return res;
    res.noble = true;
    res.witness = prefix_block(rcf, rcf.preperiod);
    return res;
}

inline NobleResult noble_check(const ExactReal& x, int max_digits = 512) {
    return noble_check(expand(x, ExactReal(1), max_digits));
}

struct LocalMinReport {
    double b_min{};
    double radius{};
    double slope{};
    bool confirmed = false;
    std::size_t samples_checked = 0;
    std::optional<double> violation_x;
};

/// Samples B_1 on shrinking jittered two-sided neighbourhoods of a noble point
/// and confirms the strict local minimum plus its cusp slope.
inline LocalMinReport local_min_at_noble(const ExactReal& nu, const FloatEvaluator& eval,
                                         double radius = 1e-3, int levels = 4,
                                         int per_side = 6) {
    if (!(eval.alpha() == ExactReal(1)))
        throw std::domain_error("local_min_at_noble: evaluator must use alpha = 1");
    const NobleResult nb = noble_check(nu);
    if (!nb.noble) throw std::domain_error("local_min_at_noble: point is not noble");

    // stay strictly inside the cylinder of the witness block
    if (!nb.witness.empty()) {
        const Mobius m = block_mobius(nb.witness);
        const ExactReal end0 = m.apply(ExactReal(0));
        const ExactReal end1 = m.apply(ExactReal(1));
        const double margin0 = to_real<double>((nu - end0).abs());
        const double margin1 = to_real<double>((nu - end1).abs());
        radius = std::min(radius, std::min(margin0, margin1) / 4);
    }

    LocalMinReport rep;
    rep.radius = radius;
    const double bm = double(eval_periodic<HighPrec>(nu, ExactReal(1)).value);
    rep.b_min = bm;
    const double nud = to_real<double>(nu);
    const double gd = to_real<double>(golden());

    std::vector<std::pair<double, double>> pts;
    rep.confirmed = true;
    double r = radius;
    for (int level = 0; level < levels; ++level, r /= 8) {
        for (int j = 1; j <= per_side; ++j) {
            const double off = r * (j - 1 + gd / 2) / per_side;
            for (int side : {-1, +1}) {
                const double x = nud + side * off;
                const double v = eval(x);
                ++rep.samples_checked;
                if (!(v > bm)) {
                    rep.confirmed = false;
                    if (!rep.violation_x) rep.violation_x = x;
                    continue;
                }
                pts.emplace_back(std::log(off), std::log(v - bm));
            }
        }
    }
    if (pts.size() >= 2) rep.slope = least_squares<double>(pts).slope;
    return rep;
}

// ---- mean-value digit surgery ------------------------------------------------

enum class PerturbDirection { up, down };

struct PerturbResult {
    ExactReal point;
    std::size_t surgery_index = 0;
    double offset = 0;       // |xi' - xi|
    double value_delta = 0;  // |B(xi') - B(xi)|
    bool satisfied = false;
};

/// Lemma-style construction: bump one RCF digit of xi and close with the
/// all-ones tail, pushing the surgery index until both |xi' - xi| < eps and
/// |B(xi') - B(xi)| < eps on the requested side.
template <class Real>
PerturbResult mean_value_perturb(const CertifiedEvaluator<Real>& eval, const ExactReal& xi,
                                 double epsilon, PerturbDirection dir, int n_max = 160) {
    using std::abs;
    if (!eval.alpha().is_rational())
        throw std::domain_error("mean_value_perturb: alpha must be rational");
    if (!(epsilon > 0)) throw std::domain_error("mean_value_perturb: eps > 0");
    if (xi.is_rational()) throw std::domain_error("mean_value_perturb: xi must be irrational");

    const Real b_xi = eval(xi);
    const AlphaExpansion rcf = expand(xi, ExactReal(1), 512);

    BigRational eps_exact;
    mpq_set_d(eps_exact.get_mpq_t(), epsilon);
    const ExactReal eps_x(eps_exact);

    // the surgered point lives in Q(sqrt 5) while xi may not; distances are
    // decided by cross-field comparisons against xi +- eps
    const ExactReal lo = xi - eps_x, hi = xi + eps_x;
    const Real xi_r = to_real<Real>(xi);

    PerturbResult best;
    for (int n = 1; n <= n_max; ++n) {
        if (!rcf.has_digit(std::size_t(n))) break;
        Block block = prefix_block(rcf, std::size_t(n));
        block.back().a += 1;
        const ExactReal cand = string_action(block, golden());
        const int side = compare(cand, xi);
        if (side == 0) continue;
        if ((dir == PerturbDirection::up) != (side > 0)) continue;
        if (!(compare(cand, lo) > 0 && compare(cand, hi) < 0)) continue;

        const Real delta = abs(eval(cand) - b_xi);
        best.point = cand;
        best.surgery_index = std::size_t(n);
        best.offset = std::abs(double(to_real<Real>(cand) - xi_r));
        best.value_delta = double(delta);
        if (delta < Real(epsilon)) {
            best.satisfied = true;
            return best;
        }
    }
    return best;  // best attempt; satisfied stays false
}

inline PerturbResult mean_value_perturb(const ExactReal& xi, double epsilon, PerturbDirection dir,
                                        const ExactReal& alpha, int n_max = 160) {
    const CertifiedEvaluator<HighPrec> eval(alpha);
    return mean_value_perturb<HighPrec>(eval, xi, epsilon, dir, n_max);
}

// ---- lower-semicontinuity probe at irrational alpha --------------------------

struct SemicontinuityReport {
    ExactReal alphahat;
    struct Row {
        double eps;
        double b_left;
        double b_right;
    };
    std::vector<Row> rows;
    double b_at_alphahat{};
    double left_limit_estimate{};
    double right_limit_estimate{};
    double gap{};
    double expected_gap{};            // (alphahat - 1) log(a + g)
    double limit_identity_residual{};  // |B(ah) - (log(a+1+g) + B(g)/(a+1+g))|
};

/// Probes B_{alpha-hat} along x(eps) = 1/(1 + 1/(a + g +- eps)); the left and
/// right limits split by (alphahat - 1) log(a + g), breaking lower
/// semicontinuity from the left.
inline SemicontinuityReport semicontinuity_probe(long a, const std::vector<double>& eps_list) {
    using std::log;
    if (a < 2) throw std::domain_error("semicontinuity_probe: a >= 2");
    SemicontinuityReport rep;
    rep.alphahat = lsc_alpha(a);
    const CertifiedEvaluator<HighPrec> eval(rep.alphahat, HighPrec(1e-18), 4096);

    const ExactReal one(1);
    const ExactReal a_plus_g = ExactReal(a) + golden();
    const HighPrec b_ah = eval(rep.alphahat);
    rep.b_at_alphahat = double(b_ah);

    const HighPrec b_g = eval(golden());
    const HighPrec denom = to_real<HighPrec>(ExactReal(a + 1) + golden());
    rep.limit_identity_residual = double(abs(b_ah - (log(denom) + b_g / denom)));

    for (double eps : eps_list) {
        BigRational eq;
        mpq_set_d(eq.get_mpq_t(), eps);
        const ExactReal e(eq);
        const ExactReal x_left = (one + (a_plus_g - e).inverse()).inverse();
        const ExactReal x_right = (one + (a_plus_g + e).inverse()).inverse();
        rep.rows.push_back({eps, double(eval(x_left)), double(eval(x_right))});
    }
    if (!rep.rows.empty()) {
        rep.left_limit_estimate = rep.rows.back().b_left;
        rep.right_limit_estimate = rep.rows.back().b_right;
        rep.gap = rep.left_limit_estimate - rep.right_limit_estimate;
    }
    rep.expected_gap =
        double((to_real<HighPrec>(rep.alphahat) - 1) * log(to_real<HighPrec>(a_plus_g)));
    return rep;
}

// ---- CBM minorants and the alpha = 1/2 profile functions ---------------------

template <class Real>
Real minorant_phi0(Real x) {
    using std::log;
    if (!(x > 0 && x < 1)) throw std::domain_error("minorant_phi0: x in (0,1)");
    return -log(x) + x * golden_minimum_value<Real>();
}

template <class Real>
Real minorant_phi1(Real x) {
    using std::log;
    if (!(x > 0 && x < Real(0.5))) throw std::domain_error("minorant_phi1: x in (0,1/2)");
    return -log(x) + x * log(x / (1 - 2 * x)) + (1 - 2 * x) * golden_minimum_value<Real>();
}

/// phi0 below g^2, phi1 from g^2 on; continuous with phi(g^2) = -3 log g.
template <class Real>
Real minorant_phi(Real x) {
    if (!(x > 0 && x < Real(0.5))) throw std::domain_error("minorant_phi: x in (0,1/2)");
    static const Real gsq = to_real<Real>(golden() * golden());
    return x < gsq ? minorant_phi0(x) : minorant_phi1(x);
}

/// h(x) = log(1/x)/(1-x), strictly decreasing on (0, 1/2).
template <class Real>
Real h_profile(Real x) {
    using std::log;
    if (!(x > 0 && x < Real(0.5))) throw std::domain_error("h_profile: x in (0,1/2)");
    return -log(x) / (1 - x);
}

/// f(x) = log(1/x)/(2x) + (1/2) log(x/(1-2x)), increasing on (2/5, 1/2).
template <class Real>
Real f_profile(Real x) {
    using std::log;
    if (!(x > Real(0.4) && x < Real(0.5))) throw std::domain_error("f_profile: x in (2/5,1/2)");
    return -log(x) / (2 * x) + log(x / (1 - 2 * x)) / 2;
}

/// (1-2x) log x + 3x - 1: the numerator deciding the sign of f'.
template <class Real>
Real f_slope_term(Real x) {
    using std::log;
    return (1 - 2 * x) * log(x) + 3 * x - 1;
}

struct MinorantValues {
    std::optional<double> phi0, phi1, phi, h, f;
};

inline MinorantValues cbm_minorants(double x) {
    MinorantValues v;
    if (x > 0 && x < 1) v.phi0 = minorant_phi0<double>(x);
    if (x > 0 && x < 0.5) {
        v.phi1 = minorant_phi1<double>(x);
        v.phi = minorant_phi<double>(x);
        v.h = h_profile<double>(x);
    }
    if (x > 0.4 && x < 0.5) v.f = f_profile<double>(x);
    return v;
}

}  // namespace brjuno
