#pragma once

#include <random>
#include <vector>

#include "brjuno/brjuno.hpp"

namespace testsup {

using namespace brjuno;

// deterministic sampler for quadratic irrationals with small coefficients
class SurdSampler {
  public:
    explicit SurdSampler(std::uint64_t seed) : rng_(seed) {}

    ExactReal surd() {
        static const int ds[] = {2, 3, 5, 6, 7, 10, 11, 13};
        for (;;) {
            const long a = long(rng_() % 41) - 20;
            long b = long(rng_() % 21) - 10;
            if (b == 0) b = 1;
            const long c = 1 + long(rng_() % 20);
            const long d = ds[rng_() % 8];
            const ExactReal x = ExactReal::surd(a, b, c, d);
            if (!x.is_rational()) return x;
        }
    }

    /// surd inside (lo, hi)
    ExactReal surd_in(const ExactReal& lo, const ExactReal& hi) {
        for (;;) {
            ExactReal x = surd();
            // fold into (0,1) first
            if (x.sign() < 0) x = -x;
            const BigInt fl = x.floor();
            if (fl != 0) x = x - ExactReal(fl);
            if (x.is_rational()) continue;
            if (compare(x, lo) > 0 && compare(x, hi) < 0) return x;
        }
    }

    BigRational rational(long max_den) {
        const long q = 2 + long(rng_() % (max_den - 1));
        const long p = 1 + long(rng_() % (q - 1));
        BigRational r(p, q);
        r.canonicalize();
        return r;
    }

    double uniform01() { return double(rng_() >> 11) * 0x1.0p-53; }

    std::uint64_t raw() { return rng_(); }

  private:
    std::mt19937_64 rng_;
};

inline const std::vector<ExactReal>& alpha_set() {
    static const std::vector<ExactReal> v = {
        ExactReal(BigInt(1), BigInt(2)), ExactReal(BigInt(3), BigInt(5)),
        ExactReal(BigInt(2), BigInt(3)), ExactReal(1)};
    return v;
}

/// 50 small-coefficient quadratic irrationals in (0, 0.49), deterministic.
inline const std::vector<ExactReal>& surd_fixtures() {
    static const std::vector<ExactReal> v = [] {
        SurdSampler s(20240817);
        std::vector<ExactReal> out;
        const ExactReal lo(BigInt(1), BigInt(100)), hi(BigInt(49), BigInt(100));
        while (out.size() < 50) out.push_back(s.surd_in(lo, hi));
        return out;
    }();
    return v;
}

}  // namespace testsup
