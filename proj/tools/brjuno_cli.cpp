// Command-line surface: expansion inspection, Brjuno evaluation, minima scans,
// cusp fits, comparisons, probes, and figure-data emission in CSV/JSON.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "brjuno/brjuno.hpp"

namespace {

using namespace brjuno;
using nlohmann::json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Common {
    std::string alpha_str = "1";
    double tol = 1e-8;
    int precision_bits = 0;  // 0 -> env override or 134
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string output = "text";
    std::string out_path;
};

void add_common(CLI::App* cmd, Common& c, bool with_alpha = true) {
    if (with_alpha) cmd->add_option("--alpha", c.alpha_str, "alpha in [1/2, 1]: rational, surd, or named literal");
    cmd->add_option("--tol", c.tol, "evaluation tolerance");
    cmd->add_option("--precision-bits", c.precision_bits, "mantissa bits (>= 53)");
    cmd->add_option("--seed", c.seed, "RNG seed for sampled commands");
    cmd->add_option("--threads", c.threads, "worker count for scans");
    cmd->add_option("--output", c.output, "text | csv | json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    cmd->add_option("--out", c.out_path, "write output to PATH instead of stdout");
}

int resolve_bits(const Common& c) {
    if (c.precision_bits > 0) return c.precision_bits;
    if (const char* env = std::getenv("BRJUNO_PRECISION_BITS")) {
        const int b = std::atoi(env);
        if (b > 0) return b;
    }
    return std::numeric_limits<HighPrec>::digits;
}

ExactReal parse_alpha(const std::string& s) {
    const ExactReal a = parse_exact_literal(s);
    if (compare(a, ExactReal(BigInt(1), BigInt(2))) < 0 || compare(a, ExactReal(1)) > 0)
        throw std::invalid_argument("alpha must lie in [1/2, 1]");
    return a;
}

int emit(const Common& c, const std::string& content) {
    if (c.out_path.empty()) {
        std::cout << content;
        return 0;
    }
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open " << c.out_path << "\n";
        return 3;
    }
    f << content;
    if (!f) {
        std::cerr << "error: write failed for " << c.out_path << "\n";
        return 3;
    }
    return 0;
}

json header_json(const char* command, const Common& c, double alpha_value, int bits) {
    json j;
    j["schema_version"] = 1;
    j["command"] = command;
    j["alpha"] = alpha_value;
    j["precision_bits"] = bits;
    j["seed"] = c.seed;
    return j;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i)
        out += (i ? "," : "") + header[i];
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + fmt17(row[i]);
        out += "\n";
    }
    return out;
}

const char* status_name(ExpansionStatus s) {
    switch (s) {
        case ExpansionStatus::terminated: return "Terminated";
        case ExpansionStatus::periodic: return "Periodic";
        default: return "TruncatedAt";
    }
}

// ---- expand ------------------------------------------------------------------

int run_expand(const Common& c, const std::string& x_str, int n_digits) {
    const ExactReal alpha = parse_alpha(c.alpha_str);
    const PointLiteral pt = parse_point_literal(x_str);
    const AlphaExpansion e = pt.is_exact() ? expand(*pt.exact, alpha, std::max(n_digits, 64))
                                           : expand(pt.value, alpha, std::max(n_digits, 64));

    const std::size_t depth =
        e.status == ExpansionStatus::periodic ? std::size_t(n_digits) : e.digit_count();
    const auto rows = convergents(e, depth);
    const Prop21Report rep = prop21_check(rows, alpha);

    if (c.output == "json") {
        json j = header_json("expand", c, to_real<double>(alpha), 53);
        j["x"] = x_str;
        j["status"] = status_name(e.status);
        if (e.status == ExpansionStatus::periodic) {
            j["preperiod"] = e.preperiod;
            j["period"] = e.period;
        }
        j["a0"] = e.a0;
        j["eps0"] = e.eps0;
        json digits = json::array();
        for (std::size_t n = 1; n <= depth; ++n) {
            const Digit d = e.digit(n);
            digits.push_back({{"n", n},
                              {"a", d.a},
                              {"eps", d.eps},
                              {"p", rows[n].p.get_str()},
                              {"q", rows[n].q.get_str()},
                              {"beta", to_real<double>(rows[n].beta)}});
        }
        j["digits"] = digits;
        j["prop21"] = {{"q_increasing", rep.q_increasing.passed},
                       {"p_positive", rep.p_positive.passed},
                       {"beta_window", rep.beta_window.passed},
                       {"golden_bound", !rep.golden_bound.applicable || rep.golden_bound.passed},
                       {"silver_bound", !rep.silver_bound.applicable || rep.silver_bound.passed},
                       {"all_passed", rep.all_passed()}};
        return emit(c, j.dump(2) + "\n");
    }
    if (c.output == "csv") {
        std::vector<std::vector<double>> data;
        for (std::size_t n = 1; n <= depth; ++n) {
            const Digit d = e.digit(n);
            data.push_back({double(n), double(d.a), double(d.eps), rows[n].p.get_d(),
                            rows[n].q.get_d(), to_real<double>(rows[n].beta)});
        }
        return emit(c, csv_table({"n", "a", "eps", "p", "q", "beta"}, data));
    }

    std::ostringstream os;
    os << "alpha = " << alpha.str() << "   x = " << x_str << "\n";
    os << "status: " << status_name(e.status);
    if (e.status == ExpansionStatus::periodic)
        os << "(preperiod=" << e.preperiod << ", period=" << e.period << ")";
    if (e.status == ExpansionStatus::truncated) os << "(" << e.digit_count() << ")";
    os << "   (a0,eps0) = (" << e.a0 << "," << (e.eps0 > 0 ? "+1" : "-1") << ")\n";
    os << "   n      (a,eps)            p/q            beta\n";
    for (std::size_t n = 1; n <= depth; ++n) {
        const Digit d = e.digit(n);
        char line[160];
        std::snprintf(line, sizeof line, "%4zu   (%lld,%+d)   %12s/%-12s   %.12g\n", n,
                      static_cast<long long>(d.a), d.eps, rows[n].p.get_str().c_str(),
                      rows[n].q.get_str().c_str(), to_real<double>(rows[n].beta));
        os << line;
    }
    auto clause = [&os](const char* name, const ClauseResult& r) {
        os << "  " << name << ": " << (!r.applicable ? "n/a" : (r.passed ? "pass" : "FAIL"));
        if (r.applicable && !r.passed && r.witness) os << " at n=" << *r.witness;
        os << "\n";
    };
    os << "Prop 2.1 clauses:\n";
    clause("(i)   q increasing", rep.q_increasing);
    clause("(ii)  p positive", rep.p_positive);
    clause("(iii) beta*q window", rep.beta_window);
    clause("(iv)  beta <= alpha g^n", rep.golden_bound);
    clause("(v)   beta <= alpha gamma^n", rep.silver_bound);
    return emit(c, os.str());
}

// ---- eval --------------------------------------------------------------------

template <class Real>
int run_eval_typed(const Common& c, const std::string& x_str) {
    const ExactReal alpha = parse_alpha(c.alpha_str);
    const PointLiteral pt = parse_point_literal(x_str);
    const Real cap = tail_cap<Real>(alpha);
    const BrjunoEvaluation<Real> ev =
        pt.is_exact() ? eval_exact<Real>(*pt.exact, alpha, Real(c.tol), cap)
                      : eval_float<Real>(pt.value, alpha, Real(c.tol), cap);

    const int bits = std::numeric_limits<Real>::digits;
    const double value = double(ev.value);
    const char* method = ev.method == EvalMethod::periodic_exact ? "PeriodicExact" : "TruncatedFloat";

    if (c.output == "json") {
        json j = header_json("eval", c, to_real<double>(alpha), bits);
        j["x"] = x_str;
        j["value"] = value;
        j["method"] = method;
        j["depth"] = ev.depth;
        if (ev.tail_bound)
            j["tail_bound"] = double(*ev.tail_bound);
        else
            j["tail_bound"] = nullptr;
        return emit(c, j.dump(2) + "\n");
    }
    std::ostringstream os;
    if (std::isinf(value)) {
        os << "B_alpha(" << x_str << ") = +inf   (rational)\n";
    } else {
        os << "B_alpha(" << x_str << ") = " << fmt17(value) << "   method=" << method
           << " K=" << ev.depth;
        if (ev.tail_bound)
            os << " tail<=" << fmt17(double(*ev.tail_bound));
        else if (ev.method != EvalMethod::periodic_exact)
            os << " tail=uncertified";
        os << "  (precision_bits=" << bits << ")\n";
    }
    return emit(c, os.str());
}

int run_eval(const Common& c, const std::string& x_str) {
    const int bits = resolve_bits(c);
    if (bits < 53) throw std::invalid_argument("precision-bits must be >= 53");
    if (bits <= 53) return run_eval_typed<double>(c, x_str);
    if (bits <= std::numeric_limits<HighPrec>::digits) return run_eval_typed<HighPrec>(c, x_str);
    return run_eval_typed<HighPrec100>(c, x_str);
}

// ---- scan --------------------------------------------------------------------

int run_scan(const Common& c, double lo, double hi, std::size_t n, std::size_t max_locals) {
    const ExactReal alpha = parse_alpha(c.alpha_str);
    const double ad = to_real<double>(alpha);
    if (hi == 0) hi = ad;
    if (!(lo >= 0 && hi <= ad)) throw std::invalid_argument("scan window must lie inside [0, alpha]");
    const FloatEvaluator eval(alpha, c.tol);
    const MinimaReport rep = scan_minima(eval, lo, hi, n, c.threads);

    if (c.output == "json") {
        json j = header_json("scan", c, ad, 53);
        j["lo"] = lo;
        j["hi"] = hi;
        j["n_points"] = rep.n_points;
        j["threads"] = rep.threads;
        j["argmin"] = rep.argmin;
        j["min_value"] = rep.min_value;
        json locals = json::array();
        for (std::size_t i = 0; i < rep.local_minima.size() && i < max_locals; ++i) {
            const auto& lm = rep.local_minima[i];
            locals.push_back({{"x", lm.x}, {"value", lm.value}, {"cusp_slope", lm.cusp_slope}});
        }
        j["local_minima_count"] = rep.local_minima.size();
        j["local_minima"] = locals;
        return emit(c, j.dump(2) + "\n");
    }
    if (c.output == "csv") {
        std::vector<std::vector<double>> data;
        data.push_back({rep.argmin, rep.min_value, 0.0});
        for (std::size_t i = 0; i < rep.local_minima.size() && i < max_locals; ++i) {
            const auto& lm = rep.local_minima[i];
            data.push_back({lm.x, lm.value, lm.cusp_slope});
        }
        return emit(c, csv_table({"x", "value", "cusp_slope"}, data));
    }
    std::ostringstream os;
    os << "scan alpha=" << alpha.str() << " [" << fmt17(lo) << ", " << fmt17(hi) << "] n=" << n
       << "\n";
    os << "argmin = " << fmt17(rep.argmin) << "   min = " << fmt17(rep.min_value) << "\n";
    os << "local minima candidates: " << rep.local_minima.size() << " (showing up to "
       << max_locals << ")\n";
    for (std::size_t i = 0; i < rep.local_minima.size() && i < max_locals; ++i) {
        const auto& lm = rep.local_minima[i];
        os << "  x=" << fmt17(lm.x) << " value=" << fmt17(lm.value)
           << " slope=" << fmt17(lm.cusp_slope) << "\n";
    }
    return emit(c, os.str());
}

// ---- cusp --------------------------------------------------------------------

int run_cusp(const Common& c, const std::string& side_str, int n_lo, int n_hi) {
    const ExactReal alpha = parse_alpha(c.alpha_str);
    ScalingMap map;
    if (alpha == ExactReal(1))
        map = ScalingMap::golden;
    else if (alpha == ExactReal(BigInt(1), BigInt(2)))
        map = ScalingMap::silver;
    else
        throw std::invalid_argument("cusp: alpha must be 1 (golden) or 1/2 (silver)");
    const Side side = side_str == "left" ? Side::left
                      : side_str == "right" ? Side::right
                                            : Side::both;

    const ExactReal fix = scaling_fixpoint(map);
    const ExactReal x0 = fix * fix;  // canonical orbit start 1-g resp. gamma^2
    const auto points = scaling_orbit(map, x0, n_lo, n_hi);
    const CertifiedEvaluator<HighPrec> eval(alpha);
    const LineFit<HighPrec> fit = cusp_fit<HighPrec>(fix, points, eval, side);

    const double slope = double(fit.slope);
    const bool ok = slope >= 0.45 && slope <= 0.60;
    if (c.output == "json") {
        json j = header_json("cusp", c, to_real<double>(alpha),
                             std::numeric_limits<HighPrec>::digits);
        j["side"] = side_str;
        j["n_lo"] = n_lo;
        j["n_hi"] = n_hi;
        j["slope"] = slope;
        j["intercept"] = double(fit.intercept);
        j["max_residual"] = double(fit.max_residual);
        j["slope_in_range"] = ok;
        const int rc = emit(c, j.dump(2) + "\n");
        return rc != 0 ? rc : (ok ? 0 : 4);
    }
    std::ostringstream os;
    os << "cusp fit alpha=" << alpha.str() << " orbit n=" << n_lo << ".." << n_hi << " side="
       << side_str << "\n";
    os << "slope = " << fmt17(slope) << "  intercept = " << fmt17(double(fit.intercept))
       << "  max_residual = " << fmt17(double(fit.max_residual)) << "\n";
    os << "slope in [0.45, 0.60]: " << (ok ? "yes" : "NO") << "\n";
    const int rc = emit(c, os.str());
    return rc != 0 ? rc : (ok ? 0 : 4);
}

// ---- compare -----------------------------------------------------------------

int run_compare(const Common& c, std::size_t n, double slack_tol) {
    const ExactReal alpha = parse_alpha(c.alpha_str);
    const ComparisonReport rep = compare_alpha_vs_gauss(alpha, n, c.seed);
    const bool ok = rep.min_slack >= -slack_tol;

    if (c.output == "json") {
        json j = header_json("compare", c, rep.alpha, 53);
        j["n_samples"] = rep.samples.size();
        j["min_slack"] = rep.min_slack;
        j["gap1_count"] = rep.gap1_count;
        j["gap2_count"] = rep.gap2_count;
        j["passed"] = ok;
        json rows = json::array();
        for (const auto& s : rep.samples)
            rows.push_back({{"x", s.x},
                            {"b_alpha", s.b_alpha},
                            {"b_one", s.b_one},
                            {"slack", s.slack},
                            {"matched_k", s.matched_k}});
        j["samples"] = rows;
        const int rc = emit(c, j.dump(2) + "\n");
        return rc != 0 ? rc : (ok ? 0 : 4);
    }
    if (c.output == "csv") {
        std::vector<std::vector<double>> data;
        for (const auto& s : rep.samples)
            data.push_back({s.x, s.b_alpha, s.b_one, s.slack, double(s.matched_k)});
        const int rc = emit(c, csv_table({"x", "b_alpha", "b_one", "slack", "matched_k"}, data));
        return rc != 0 ? rc : (ok ? 0 : 4);
    }
    std::ostringstream os;
    os << "compare alpha=" << alpha.str() << " samples=" << rep.samples.size()
       << " seed=" << c.seed << "\n";
    os << "min slack = " << fmt17(rep.min_slack) << " (tolerance " << fmt17(-slack_tol) << ")\n";
    os << "index gaps: 1 -> " << rep.gap1_count << ", 2 -> " << rep.gap2_count << "\n";
    os << (ok ? "comparison lemma holds on all samples\n" : "VIOLATION found\n");
    const int rc = emit(c, os.str());
    return rc != 0 ? rc : (ok ? 0 : 4);
}

// ---- perturb -----------------------------------------------------------------

int run_perturb(const Common& c, const std::string& xi_str, double epsilon,
                const std::string& dir_str) {
    const ExactReal alpha = parse_alpha(c.alpha_str);
    const PointLiteral pt = parse_point_literal(xi_str);
    if (!pt.is_exact() || pt.exact->is_rational())
        throw std::invalid_argument("perturb: xi must be a quadratic surd literal");
    const PerturbDirection dir =
        dir_str == "down" ? PerturbDirection::down : PerturbDirection::up;
    const PerturbResult res = mean_value_perturb(*pt.exact, epsilon, dir, alpha);

    if (c.output == "json") {
        json j = header_json("perturb", c, to_real<double>(alpha),
                             std::numeric_limits<HighPrec>::digits);
        j["xi"] = xi_str;
        j["epsilon"] = epsilon;
        j["direction"] = dir_str;
        j["satisfied"] = res.satisfied;
        j["point"] = res.point.str();
        j["point_value"] = to_real<double>(res.point);
        j["offset"] = res.offset;
        j["value_delta"] = res.value_delta;
        j["surgery_index"] = res.surgery_index;
        const int rc = emit(c, j.dump(2) + "\n");
        return rc != 0 ? rc : (res.satisfied ? 0 : 4);
    }
    std::ostringstream os;
    os << "perturb xi=" << xi_str << " eps=" << fmt17(epsilon) << " dir=" << dir_str << "\n";
    os << "xi' = " << res.point.str() << " = " << fmt17(to_real<double>(res.point)) << "\n";
    os << "|xi'-xi| = " << fmt17(res.offset) << "   |B(xi')-B(xi)| = " << fmt17(res.value_delta)
       << "   surgery n=" << res.surgery_index << "\n";
    os << (res.satisfied ? "both bounds met\n" : "FAILED to meet bounds (best attempt shown)\n");
    const int rc = emit(c, os.str());
    return rc != 0 ? rc : (res.satisfied ? 0 : 4);
}

// ---- semicont ------------------------------------------------------------------

std::vector<double> eps_ladder(double eps_min, int count) {
    std::vector<double> eps;
    const double lo = std::log10(0.1), hi = std::log10(eps_min);
    for (int i = 0; i < count; ++i)
        eps.push_back(std::pow(10.0, lo + (hi - lo) * double(i) / double(std::max(count - 1, 1))));
    return eps;
}

int run_semicont(const Common& c, long a, double eps_min, int eps_count, double gap_tol) {
    const auto eps = eps_ladder(eps_min, eps_count);
    const SemicontinuityReport rep = semicontinuity_probe(a, eps);
    const bool ok = std::abs(rep.gap - rep.expected_gap) < gap_tol;

    if (c.output == "json") {
        json j = header_json("semicont", c, to_real<double>(rep.alphahat),
                             std::numeric_limits<HighPrec>::digits);
        j["a"] = a;
        j["alphahat"] = rep.alphahat.str();
        j["b_at_alphahat"] = rep.b_at_alphahat;
        j["gap"] = rep.gap;
        j["expected_gap"] = rep.expected_gap;
        j["limit_identity_residual"] = rep.limit_identity_residual;
        j["passed"] = ok;
        json rows = json::array();
        for (const auto& r : rep.rows)
            rows.push_back({{"eps", r.eps}, {"b_left", r.b_left}, {"b_right", r.b_right}});
        j["rows"] = rows;
        const int rc = emit(c, j.dump(2) + "\n");
        return rc != 0 ? rc : (ok ? 0 : 4);
    }
    if (c.output == "csv") {
        std::vector<std::vector<double>> data;
        for (const auto& r : rep.rows) data.push_back({r.eps, r.b_left, r.b_right});
        const int rc = emit(c, csv_table({"eps", "B_left", "B_right"}, data));
        return rc != 0 ? rc : (ok ? 0 : 4);
    }
    std::ostringstream os;
    os << "alphahat(" << a << ") = " << rep.alphahat.str() << " = "
       << fmt17(to_real<double>(rep.alphahat)) << "\n";
    os << "B(alphahat) = " << fmt17(rep.b_at_alphahat)
       << "   identity residual = " << fmt17(rep.limit_identity_residual) << "\n";
    for (const auto& r : rep.rows)
        os << "  eps=" << fmt17(r.eps) << "  B_left=" << fmt17(r.b_left)
           << "  B_right=" << fmt17(r.b_right) << "\n";
    os << "gap = " << fmt17(rep.gap) << "   expected (alphahat-1)log(a+g) = "
       << fmt17(rep.expected_gap) << "\n";
    os << (ok ? "lower-semicontinuity failure reproduced\n" : "MISMATCH beyond tolerance\n");
    const int rc = emit(c, os.str());
    return rc != 0 ? rc : (ok ? 0 : 4);
}

// ---- figure ------------------------------------------------------------------

int run_figure(const Common& c, const std::string& id, std::size_t resolution, long a,
               const std::string& window_str) {
    std::string alpha_str;
    double def_lo = 0, def_hi = 0;
    if (id == "B1-graph") {
        alpha_str = "1";
        def_hi = 1;
    } else if (id == "B-half-graph") {
        alpha_str = "1/2";
        def_hi = 0.5;
    } else if (id == "B-3-5-graph") {
        alpha_str = "3/5";
        def_hi = 0.6;
    } else if (id == "B-2-3-graph") {
        alpha_str = "2/3";
        def_hi = 2.0 / 3.0;
    } else if (id != "scaling-loglog" && id != "semicont-alphahat") {
        throw std::invalid_argument("unknown figure id: " + id);
    }

    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    double alpha_value = 0;

    if (!alpha_str.empty()) {  // graph figures
        const ExactReal alpha = parse_exact_literal(alpha_str);
        alpha_value = to_real<double>(alpha);
        double lo = def_lo, hi = def_hi;
        if (!window_str.empty()) {
            const auto colon = window_str.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("window must be lo:hi");
            lo = std::stod(window_str.substr(0, colon));
            hi = std::stod(window_str.substr(colon + 1));
            if (!(0 <= lo && lo < hi && hi <= alpha_value))
                throw std::invalid_argument("window outside the figure's alpha-domain");
        }
        if (resolution == 0) resolution = 10000;
        const FloatEvaluator eval(alpha, c.tol);
        const double gd = to_real<double>(golden());
        const double h = (hi - lo) / double(resolution);
        std::vector<double> xs(resolution), vs(resolution);
        for (std::size_t i = 0; i < resolution; ++i) xs[i] = lo + (double(i) + gd / 2) * h;
        detail::parallel_for(resolution, c.threads,
                             [&](std::size_t i) { vs[i] = eval(xs[i]); });
        header = {"x", "B"};
        rows.reserve(resolution);
        for (std::size_t i = 0; i < resolution; ++i) rows.push_back({xs[i], vs[i]});
    } else if (id == "scaling-loglog") {
        alpha_value = 1;
        if (resolution == 0) resolution = 15;
        const CertifiedEvaluator<HighPrec> eval(ExactReal(1));
        const auto points = scaling_orbit(ScalingMap::golden, golden() * golden(), 1,
                                          int(resolution));
        const HighPrec bg = eval(golden());
        std::vector<std::pair<double, double>> pts;
        for (const auto& x : points) {
            const double dx = std::abs(to_real<double>(x - golden()));
            const double e = double(eval(x) - bg);
            if (dx > 0 && e > 0) pts.emplace_back(std::log(dx), std::log(e));
        }
        const auto fit = least_squares<double>(pts);
        header = {"log_abs_x_minus_g", "log_B_minus_Bmin", "fitted_slope"};
        for (const auto& [lx, ly] : pts) rows.push_back({lx, ly, fit.slope});
    } else {  // semicont-alphahat
        const SemicontinuityReport rep = semicontinuity_probe(a, eps_ladder(1e-8, resolution == 0 ? 8 : int(resolution)));
        alpha_value = to_real<double>(rep.alphahat);
        header = {"eps", "B_left", "B_right"};
        for (const auto& r : rep.rows) rows.push_back({r.eps, r.b_left, r.b_right});
    }

    if (c.output == "json") {
        json j = header_json("figure", c, alpha_value, 53);
        j["figure_id"] = id;
        j["columns"] = header;
        json data = json::array();
        for (const auto& row : rows) data.push_back(row);
        j["rows"] = data;
        return emit(c, j.dump(2) + "\n");
    }
    return emit(c, csv_table(header, rows));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alpha-continued fractions and alpha-Brjuno functions"};
    app.require_subcommand(1);

    std::string x_str, xi_str = "g", side = "both", dir = "up", figure_id, window;
    int n_digits = 20, n_lo = 3, n_hi = 15, eps_count = 8;
    std::size_t scan_n = 100000, compare_n = 1000, max_locals = 32, resolution = 0;
    double lo = 0, hi = 0, epsilon = 1e-2, eps_min = 1e-8, gap_tol = 1e-3, slack_tol = 1e-8;
    long a_param = 2;

    Common c_expand, c_eval, c_scan, c_cusp, c_compare, c_perturb, c_semicont, c_figure;
    c_scan.tol = 1e-6;
    c_figure.tol = 1e-6;
    c_figure.output = "csv";

    auto* cmd_expand = app.add_subcommand("expand", "digit table, convergents, Prop 2.1 checks");
    cmd_expand->add_option("x", x_str, "point literal")->required();
    cmd_expand->add_option("-n,--digits", n_digits, "digits to display");
    add_common(cmd_expand, c_expand);

    auto* cmd_eval = app.add_subcommand("eval", "evaluate B_alpha at a point");
    cmd_eval->add_option("x", x_str, "point literal")->required();
    add_common(cmd_eval, c_eval);

    auto* cmd_scan = app.add_subcommand("scan", "grid scan for minima of B_alpha");
    cmd_scan->add_option("--lo", lo, "window start");
    cmd_scan->add_option("--hi", hi, "window end (default alpha)");
    cmd_scan->add_option("-n,--points", scan_n, "sample count (>= 1000)");
    cmd_scan->add_option("--max-locals", max_locals, "local minima rows to print");
    add_common(cmd_scan, c_scan);

    auto* cmd_cusp = app.add_subcommand("cusp", "cusp exponent fit at the minimum");
    cmd_cusp->add_option("--side", side, "left | right | both")
        ->check(CLI::IsMember({"left", "right", "both"}));
    cmd_cusp->add_option("--n-lo", n_lo, "first orbit index");
    cmd_cusp->add_option("--n-hi", n_hi, "last orbit index");
    add_common(cmd_cusp, c_cusp);

    auto* cmd_compare = app.add_subcommand("compare", "B_alpha >= B_1 sample check");
    cmd_compare->add_option("-n,--samples", compare_n, "sample count");
    cmd_compare->add_option("--slack-tol", slack_tol, "allowed negative slack");
    add_common(cmd_compare, c_compare);

    auto* cmd_perturb = app.add_subcommand("perturb", "mean-value digit surgery");
    cmd_perturb->add_option("--xi", xi_str, "surd literal")->required();
    cmd_perturb->add_option("--epsilon", epsilon, "target bound");
    cmd_perturb->add_option("--direction", dir, "up | down")
        ->check(CLI::IsMember({"up", "down"}));
    add_common(cmd_perturb, c_perturb);

    auto* cmd_semicont = app.add_subcommand("semicont", "semicontinuity probe at alphahat(a)");
    cmd_semicont->add_option("--a", a_param, "integer a >= 2");
    cmd_semicont->add_option("--eps-min", eps_min, "smallest epsilon");
    cmd_semicont->add_option("--eps-count", eps_count, "ladder length");
    cmd_semicont->add_option("--gap-tol", gap_tol, "tolerance on the gap");
    add_common(cmd_semicont, c_semicont, false);

    auto* cmd_figure = app.add_subcommand("figure", "emit figure data as CSV/JSON");
    cmd_figure
        ->add_option("--id", figure_id,
                     "B1-graph | B-half-graph | B-3-5-graph | B-2-3-graph | scaling-loglog | "
                     "semicont-alphahat")
        ->required();
    cmd_figure->add_option("--resolution", resolution, "points (default per figure)");
    cmd_figure->add_option("--window", window, "lo:hi inside the alpha-domain");
    cmd_figure->add_option("--a", a_param, "a for semicont-alphahat");
    add_common(cmd_figure, c_figure, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_expand->parsed()) return run_expand(c_expand, x_str, n_digits);
        if (cmd_eval->parsed()) return run_eval(c_eval, x_str);
        if (cmd_scan->parsed()) return run_scan(c_scan, lo, hi, scan_n, max_locals);
        if (cmd_cusp->parsed()) return run_cusp(c_cusp, side, n_lo, n_hi);
        if (cmd_compare->parsed()) return run_compare(c_compare, compare_n, slack_tol);
        if (cmd_perturb->parsed()) return run_perturb(c_perturb, xi_str, epsilon, dir);
        if (cmd_semicont->parsed())
            return run_semicont(c_semicont, a_param, eps_min, eps_count, gap_tol);
        if (cmd_figure->parsed())
            return run_figure(c_figure, figure_id, resolution, a_param, window);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
