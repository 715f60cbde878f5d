#pragma once
//
// Counter-based sampling for verification campaigns. Every sample owns an
// engine seeded from (campaign seed, stream, sample index), so results do not
// depend on how samples are distributed over workers.
//

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string_view>
#include <vector>

#include "mcflab/verifier.hpp"

namespace mcflab {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a; stable across platforms, unlike std::hash.
inline std::uint64_t stream_id(std::string_view name)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : name) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
    return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

class SampleRng {
public:
    explicit SampleRng(std::uint64_t s) : eng_(s) {}
    SampleRng(std::uint64_t seed, std::string_view stream, std::uint64_t index) : eng_(sample_seed(seed, stream_id(stream), index)) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    bool bernoulli(double p) { return uniform(0.0, 1.0) < p; }

private:
    std::mt19937_64 eng_;
};

struct SpectrumSampling {
    double lambda_max = 2.0;          ///< bulk draws are uniform in [0, lambda_max]
    double boundary_fraction = 0.2;   ///< share of samples forced into the near-boundary stratum
    double boundary_lo = 0.9;         ///< near-boundary stratum: max l_i l_j in [lo, hi]
    double boundary_hi = 0.999;
    double bulk_cap = 0.999;          ///< bulk rejection region: max l_i l_j < bulk_cap
    int max_rejections = 64;
};

/// Product of the two largest values.
inline double top_pair_product(const std::vector<double>& v)
{
    if (v.size() < 2) return 0.0;
    double a = 0.0, b = 0.0;
    for (double x : v) {
        if (x > a) {
            b = a;
            a = x;
        } else if (x > b) {
            b = x;
        }
    }
    return a * b;
}

/// min(n, m) singular values, sorted descending, strictly area-decreasing.
/// Bulk draws use rejection to max l_i l_j < bulk_cap; if rejection keeps
/// failing (large n) the last draw is scaled to a uniform product in (0, bulk_cap).
inline std::vector<double> sample_area_decreasing(SampleRng& rng, int n, int m, const SpectrumSampling& cfg = {})
{
    const int p = std::min(n, m);
    std::vector<double> v(p);
    auto draw = [&] {
        for (double& x : v) x = rng.uniform(0.0, cfg.lambda_max);
    };
    if (p >= 2 && rng.bernoulli(cfg.boundary_fraction)) {
        // Top pair (a, t/a) with a in [sqrt t, lambda_max], the rest below t/a; all values stay in [0, lambda_max].
        const double target = rng.uniform(cfg.boundary_lo, cfg.boundary_hi);
        const double a = rng.uniform(std::sqrt(target), std::max(std::sqrt(target), cfg.lambda_max));
        v[0] = a;
        v[1] = target / a;
        for (int i = 2; i < p; ++i) v[i] = rng.uniform(0.0, v[1]);
    } else {
        bool ok = false;
        for (int t = 0; t < cfg.max_rejections && !ok; ++t) {
            draw();
            ok = top_pair_product(v) < cfg.bulk_cap;
        }
        if (!ok) {
            const double f = std::sqrt(rng.uniform(0.0, cfg.bulk_cap) / top_pair_product(v));
            for (double& x : v) x *= f;
        }
    }
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

inline HCoefficients<double> sample_h(SampleRng& rng, int n, int m)
{
    HCoefficients<double> H(n, m);
    for (int l = 0; l < m; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = k; i < n; ++i) H.set(l, k, i, rng.normal());
    return H;
}

/// Off-diagonal sec' uniform in [lo1, hi1], sec'' uniform in [lo2, hi2].
inline CurvatureSample<double> sample_curvature(SampleRng& rng, int n, int m, double lo1, double hi1, double lo2, double hi2)
{
    CurvatureSample<double> c(n, m);
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) c.set_sec1(i, k, rng.uniform(lo1, hi1));
    const int p = std::min(n, m);
    for (int i = 0; i < p; ++i)
        for (int k = i + 1; k < p; ++k) c.set_sec2(i, k, rng.uniform(lo2, hi2));
    return c;
}

}  // namespace mcflab
