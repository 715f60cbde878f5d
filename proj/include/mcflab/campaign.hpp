#pragma once
//
// Seeded verification campaigns over the verifier's identities and inequalities.
//
// Samples are drawn in double precision and evaluated in long double: close to
// the area-decreasing boundary the summands reach (S_ii + S_jj)^-2 ~ 1e7 and
// double rounding alone would eat the absolute tolerances. Exact mode draws
// small-denominator rationals and evaluates with no rounding at all.
//

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "mcflab/errors.hpp"
#include "mcflab/oracle.hpp"
#include "mcflab/sampling.hpp"
#include "mcflab/svcore.hpp"
#include "mcflab/verifier.hpp"

namespace mcflab {

using Rational = boost::multiprecision::cpp_rational;
using Extended = long double;

struct CampaignConfig {
    std::string suite;
    int n = 3;
    int m = 3;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    double tol = -1.0;    ///< negative: suite default
    double delta = 1.0;   ///< lemma42 only
    bool exact = false;
    int threads = 1;
};

struct CampaignReport {
    CampaignConfig config;
    std::uint64_t evaluated = 0;
    std::uint64_t violations = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    double max_residual = 0.0;
    double aux = std::numeric_limits<double>::quiet_NaN();  ///< suite-specific statistic, see aux_name
    std::string aux_name;
    nlohmann::json failures = nlohmann::json::array();  ///< first few, by sample index
    nlohmann::json constants = nlohmann::json::object();
    bool passed = false;

    nlohmann::json to_json() const;
};

inline const std::vector<std::string>& campaign_suites()
{
    static const std::vector<std::string> s{"logdet", "lemma31", "thm32", "qs", "lemma42", "lemma43", "vijk", "ricci", "rs1", "ss14"};
    return s;
}

inline bool exact_suite(const std::string& s) { return s == "lemma31" || s == "thm32" || s == "ricci" || s == "qs" || s == "vijk"; }

namespace campaign_detail {

inline constexpr std::size_t kMaxFailures = 10;

template <class T>
struct Sample {
    int n = 0, m = 0;
    std::vector<T> lambda;  // min(n, m) leading values
    HCoefficients<T> H;
    CurvatureSample<T> curv;
    T param{0};  // tau, sigma or delta
};

struct Outcome {
    double gap = std::numeric_limits<double>::infinity();
    double residual = 0.0;
    double aux = std::numeric_limits<double>::quiet_NaN();
    bool violation = false;
    std::string reason;
};

template <class T>
double to_double(const T& x)
{
    if constexpr (std::is_floating_point_v<T>)
        return static_cast<double>(x);
    else
        return x.template convert_to<double>();
}

template <class T>
nlohmann::json scalar_json(const T& x)
{
    if constexpr (std::is_floating_point_v<T>)
        return static_cast<double>(x);
    else
        return x.str();
}

template <class T>
nlohmann::json payload(const Sample<T>& s)
{
    nlohmann::json j;
    j["n"] = s.n;
    j["m"] = s.m;
    nlohmann::json lam = nlohmann::json::array();
    for (const T& x : s.lambda) lam.push_back(scalar_json(x));
    j["lambda"] = lam;
    if (s.H.n() > 0) {
        nlohmann::json h = nlohmann::json::array();
        for (const T& x : s.H.raw()) h.push_back(scalar_json(x));
        j["h"] = h;
    }
    if (s.curv.n() > 0) {
        nlohmann::json a = nlohmann::json::array(), b = nlohmann::json::array();
        for (int i = 0; i < s.n; ++i)
            for (int k = 0; k < s.n; ++k) {
                a.push_back(scalar_json(s.curv.sec1(i, k)));
                b.push_back(scalar_json(s.curv.sec2(i, k)));
            }
        j["sec1"] = a;
        j["sec2"] = b;
    }
    j["param"] = scalar_json(s.param);
    return j;
}

template <class U, class T>
Sample<U> convert(const Sample<T>& s)
{
    Sample<U> out;
    out.n = s.n;
    out.m = s.m;
    for (const T& x : s.lambda) out.lambda.push_back(U(x));
    if (s.H.n() > 0) {
        out.H = HCoefficients<U>(s.n, s.m);
        for (int l = 0; l < s.m; ++l)
            for (int k = 0; k < s.n; ++k)
                for (int i = 0; i < s.n; ++i) out.H.at(l, k, i) = U(s.H.at(l, k, i));
    }
    if (s.curv.n() > 0) {
        out.curv = CurvatureSample<U>(s.n, s.m);
        for (int i = 0; i < s.n; ++i)
            for (int k = i + 1; k < s.n; ++k) {
                out.curv.set_sec1(i, k, U(s.curv.sec1(i, k)));
                if (i < s.curv.target_block() && k < s.curv.target_block()) out.curv.set_sec2(i, k, U(s.curv.sec2(i, k)));
            }
    }
    out.param = U(s.param);
    return out;
}

inline double default_tol(const std::string& suite)
{
    if (suite == "lemma31" || suite == "vijk" || suite == "lemma42") return 1e-12;
    if (suite == "lemma43") return 0.0;
    return 1e-10;
}

inline void require_dims(const CampaignConfig& c)
{
    const auto& s = c.suite;
    if (c.n < 2 || c.m < 1) throw ConfigError("need n >= 2 and m >= 1");
    if (c.n > 12 || c.m > 12) throw ConfigError("dimensions above 12 are not supported by campaigns");
    if ((s == "rs1") && !(c.n >= c.m && c.m >= 2)) throw ConfigError("rs1 needs n >= m >= 2");
    if (s == "lemma42" && !(c.delta > 0.0)) throw ConfigError("lemma42 needs delta > 0");
    if (c.exact) {
        if (!exact_suite(s)) throw ConfigError("exact mode supports lemma31, thm32, qs, ricci, vijk");
        if (c.n > 3 || c.m > 3) throw ConfigError("exact mode is limited to n, m <= 3");
    }
}

// ---- floating-point sample generation --------------------------------------

inline Sample<double> draw_float(const CampaignConfig& c, std::uint64_t index)
{
    SampleRng rng(c.seed, c.suite, index);
    Sample<double> s;
    s.n = c.n;
    s.m = c.m;
    const std::string& suite = c.suite;
    const int p = std::min(c.n, c.m);

    if (suite == "lemma42") {
        const double lam2_max = std::expm1(c.delta);
        auto phi_of = [&](const std::vector<double>& v) {
            if (top_pair_product(v) >= 1.0) return -std::numeric_limits<double>::infinity();
            return phi(SingularSpectrum::from_values(c.n, c.m, v));
        };
        std::vector<double> v(p);
        bool ok = false;
        if (rng.bernoulli(0.5)) {
            for (int t = 0; t < 64 && !ok; ++t) {
                for (double& x : v) x = rng.uniform(0.0, std::sqrt(lam2_max));
                ok = phi_of(v) >= -c.delta;
            }
        }
        if (!ok) {
            // Scale a random direction until Phi reaches a target level in [-delta, -delta/2].
            for (double& x : v) x = rng.uniform(0.0, 1.0);
            const double target = -c.delta * rng.uniform(0.5, 1.0);
            const double top = top_pair_product(v);
            double lo = 0.0;
            double hi = top > 0.0 ? 1.0 / std::sqrt(top) : 1.0;
            if (top <= 0.0) {
                auto scaled = [&](double f) { std::vector<double> w = v; for (double& x : w) x *= f; return w; };
                while (phi_of(scaled(hi)) > target) hi *= 2.0;
            }
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                std::vector<double> w = v;
                for (double& x : w) x *= mid;
                (phi_of(w) >= target ? lo : hi) = mid;
            }
            for (double& x : v) x *= lo;
        }
        std::sort(v.begin(), v.end(), std::greater<>());
        s.lambda = v;
        return s;
    }

    if (suite == "vijk") {
        std::vector<double> v = sample_area_decreasing(rng, 3, 3);
        std::shuffle(v.begin(), v.end(), std::mt19937_64(rng.integer(0, 1 << 30)));
        s.n = s.m = 3;
        s.lambda = v;
        return s;
    }

    s.lambda = sample_area_decreasing(rng, c.n, c.m);
    if (suite == "logdet") return s;

    if (suite == "lemma31" || suite == "thm32" || suite == "qs" || suite == "lemma43") s.H = sample_h(rng, c.n, c.m);

    if (suite == "thm32" || suite == "ricci") {
        s.curv = sample_curvature(rng, c.n, c.m, -2.0, 2.0, -2.0, 2.0);
    } else if (suite == "rs1") {
        const double bound = double(2 * c.n - c.m - 1) / double(c.m - 1);
        s.param = rng.uniform(0.05, 1.5 * bound);
        if (rng.bernoulli(0.25))
            s.curv = sample_curvature(rng, c.n, c.m, 1.0, 1.0, s.param, s.param);
        else
            s.curv = sample_curvature(rng, c.n, c.m, 1.0, 3.0, -2.0, s.param);
    } else if (suite == "ss14") {
        const double sigma = rng.uniform(0.1, 2.0);
        s.param = sigma;
        if (rng.bernoulli(0.1)) {
            s.curv = sample_curvature(rng, c.n, c.m, sigma, sigma, sigma, sigma);
        } else {
            bool ok = false;
            for (int t = 0; t < 64 && !ok; ++t) {
                s.curv = sample_curvature(rng, c.n, c.m, -sigma * (1.0 - 1e-9), 3.0 * sigma, -2.0 * sigma, sigma);
                ok = true;
                for (int i = 0; i < c.n; ++i) ok = ok && s.curv.ricci1(i) >= (c.n - 1) * sigma;
            }
            if (!ok) s.curv = sample_curvature(rng, c.n, c.m, sigma, 3.0 * sigma, -2.0 * sigma, sigma);
        }
    } else if (suite == "lemma43") {
        const double ph = phi(SingularSpectrum::from_values(c.n, c.m, s.lambda));
        s.param = ph < 0.0 ? -ph * rng.uniform(1.0, 3.0) : rng.uniform(0.1, 3.0);
    }
    return s;
}

// ---- exact sample generation ------------------------------------------------

inline Rational small_rational(SampleRng& rng, int lo, int hi, int max_den)
{
    const int q = rng.integer(1, max_den);
    return Rational(rng.integer(lo * q, hi * q), q);
}

inline Sample<Rational> draw_exact(const CampaignConfig& c, std::uint64_t index)
{
    SampleRng rng(c.seed, c.suite + "/exact", index);
    Sample<Rational> s;
    const bool triple = c.suite == "vijk";
    s.n = triple ? 3 : c.n;
    s.m = triple ? 3 : c.m;
    const int p = std::min(s.n, s.m);
    // Pairwise products strictly below 1.
    for (;;) {
        s.lambda.clear();
        for (int i = 0; i < p; ++i) s.lambda.push_back(small_rational(rng, 0, 2, 6));
        bool ok = true;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) ok = ok && s.lambda[i] * s.lambda[j] < 1;
        if (ok) break;
    }
    if (triple) return s;
    std::sort(s.lambda.begin(), s.lambda.end(), std::greater<>());
    s.H = HCoefficients<Rational>(s.n, s.m);
    for (int l = 0; l < s.m; ++l)
        for (int k = 0; k < s.n; ++k)
            for (int i = k; i < s.n; ++i) s.H.set(l, k, i, small_rational(rng, -3, 3, 2));
    s.curv = CurvatureSample<Rational>(s.n, s.m);
    for (int i = 0; i < s.n; ++i)
        for (int k = i + 1; k < s.n; ++k) {
            s.curv.set_sec1(i, k, small_rational(rng, -2, 2, 2));
            if (k < p) s.curv.set_sec2(i, k, small_rational(rng, -2, 2, 2));
        }
    return s;
}

// ---- evaluation ---------------------------------------------------------------

template <class T>
void gap_check(Outcome& o, const T& gap, double tol, const char* what)
{
    const double g = to_double(gap);
    o.gap = std::min(o.gap, g);
    const bool bad = std::is_floating_point_v<T> ? !(g >= -tol) : gap < T(0);
    if (bad && !o.violation) {
        o.violation = true;
        o.reason = std::string(what) + " below tolerance";
    }
}

template <class T>
void residual_check(Outcome& o, const T& res, double tol, const char* what)
{
    const double r = std::abs(to_double(res));
    o.residual = std::max(o.residual, r);
    const bool bad = std::is_floating_point_v<T> ? !(r <= tol) : res != T(0);
    if (bad && !o.violation) {
        o.violation = true;
        o.reason = std::string(what) + " above tolerance";
    }
}

template <class T>
Outcome evaluate(const CampaignConfig& c, const Sample<T>& s, double tol)
{
    Outcome o;
    const std::string& suite = c.suite;

    if (suite == "vijk") {
        const T v = v_ijk(s.lambda[0], s.lambda[1], s.lambda[2]);
        gap_check(o, v, tol, "V_ijk");
        residual_check(o, T(v - v_ijk_expanded(s.lambda[0], s.lambda[1], s.lambda[2])), tol, "form disagreement");
        residual_check(o, T(v - v_ijk(s.lambda[1], s.lambda[0], s.lambda[2])), tol, "i/j asymmetry");
        return o;
    }

    const SRestriction<T> rest = make_restriction<T>(s.n, s.m, s.lambda);

    if (suite == "lemma31") {
        for (int i = 0; i < s.n; ++i)
            for (int j = i + 1; j < s.n; ++j) {
                gap_check(o, lemma31_claim_gap(rest, s.H, i, j), tol, "claim gap");
                residual_check(o, lemma31_key_identity_residual(rest, i, j), tol, "key identity");
            }
    } else if (suite == "thm32") {
        gap_check(o, theorem32_master_gap(rest, s.H, s.curv), tol, "master gap");
    } else if (suite == "qs") {
        gap_check(o, qs(rest, s.H), tol, "Q_S");
    } else if (suite == "ricci") {
        residual_check(o, ricci_regroup_residual(rest, s.curv), tol, "regroup residual");
    } else if (suite == "rs1") {
        const Rs1Result<T> r = rs1_lowerbound(rest, s.curv, s.param);
        gap_check(o, r.gap, tol, "RS1 gap");
        if (s.m == 2) {
            gap_check(o, r.aux_pair, tol, "pair display");
            gap_check(o, r.aux_mixed, tol, "mixed display");
            residual_check(o, r.aux_pair_residual, tol, "pair display residual");
            residual_check(o, r.aux_mixed_residual, tol, "mixed display residual");
        }
        // Empirical c3: ratio of the lower bound to sum l^2 when the bound factor is positive.
        const T bound = rs(rest, s.curv) - r.gap;
        T lsum(0);
        for (const T& x : s.lambda) lsum += x * x;
        const double limit = double(2 * s.n - s.m - 1) / double(s.m - 1);
        if (to_double(s.param) < limit && to_double(lsum) > 1e-8) o.aux = to_double(T(bound / lsum));
    } else if (suite == "ss14") {
        const Ss14Result<T> r = ss14_rs_lowerbound(rest, s.curv, s.param);
        gap_check(o, r.gap, tol, "SS14 gap");
        gap_check(o, r.bound, tol, "SS14 bound");
    }
    return o;
}

inline Outcome evaluate_double_only(const CampaignConfig& c, const Sample<double>& s, double tol)
{
    Outcome o;
    const SingularSpectrum spec = SingularSpectrum::from_values(s.n, s.m, s.lambda);
    if (c.suite == "logdet") {
        const std::vector<double>& l = spec.lambda();
        SquareArray<double> S(s.n);
        const SRestriction<double> rest = s_restriction(spec);
        for (int i = 0; i < s.n; ++i) S(i, i) = rest.s[i];
        const double oracle = lu_log_det(s_two_matrix(S));
        (void)l;
        residual_check(o, log_det_s2(spec) - oracle, tol, "log-det disagreement");
    } else if (c.suite == "lemma42") {
        const PhiBounds b = est_vph_bounds(s.n, c.delta);
        const double ph = phi(spec);
        double lsum = 0.0;
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < s.n; ++i) {
            const double li2 = spec[i] * spec[i];
            lsum += li2;
            worst = std::min(worst, (b.lam2_max - li2) / b.lam2_max);
            for (int j = i + 1; j < s.n; ++j) worst = std::min(worst, (b.pair_max - li2 * spec[j] * spec[j]) / b.pair_max);
        }
        const double c1_slack = b.c1 * lsum - std::abs(ph);
        worst = std::min(worst, lsum > 0.0 ? c1_slack / (b.c1 * lsum) : 0.0);
        gap_check(o, worst, tol, "relative slack");
        if (lsum > 0.0) o.aux = std::abs(ph) / lsum;
    } else if (c.suite == "lemma43") {
        const GradBoundResult r = grad_logdet_bound(s_restriction(spec), s.H, s.param);
        o.gap = r.rhs > 0.0 ? (r.rhs - r.lhs) / r.rhs : (r.lhs == 0.0 ? 0.0 : -1.0);
        o.aux = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
        if (!r.holds) {
            o.violation = true;
            o.reason = "gradient bound violated";
        }
    }
    return o;
}

inline bool double_only(const std::string& suite) { return suite == "logdet" || suite == "lemma42" || suite == "lemma43"; }

/// max for ratios that must stay small, min for ratios that must stay large.
inline bool aux_uses_max(const std::string& suite) { return suite != "rs1"; }

inline std::string aux_label(const std::string& suite)
{
    if (suite == "rs1") return "empirical_c3_min_ratio";
    if (suite == "lemma42") return "max_abs_phi_over_sum_lambda2";
    if (suite == "lemma43") return "max_lhs_over_rhs";
    return "";
}

struct Partial {
    std::uint64_t evaluated = 0, violations = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    double max_residual = 0.0;
    double aux = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<std::uint64_t, nlohmann::json>> failures;
};

inline void fold_aux(double& acc, double v, bool use_max)
{
    if (std::isnan(v)) return;
    if (std::isnan(acc))
        acc = v;
    else
        acc = use_max ? std::max(acc, v) : std::min(acc, v);
}

inline void run_range(const CampaignConfig& c, double tol, std::uint64_t begin, std::uint64_t end, Partial& out)
{
    const bool use_max = aux_uses_max(c.suite);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
        Outcome o;
        nlohmann::json pay;
        if (c.exact) {
            const Sample<Rational> s = draw_exact(c, idx);
            o = evaluate(c, s, tol);
            if (o.violation) pay = payload(s);
        } else {
            const Sample<double> s = draw_float(c, idx);
            o = double_only(c.suite) ? evaluate_double_only(c, s, tol) : evaluate(c, convert<Extended>(s), tol);
            if (o.violation) pay = payload(s);
        }
        ++out.evaluated;
        out.min_gap = std::min(out.min_gap, o.gap);
        out.max_residual = std::max(out.max_residual, o.residual);
        fold_aux(out.aux, o.aux, use_max);
        if (o.violation) {
            ++out.violations;
            if (out.failures.size() < kMaxFailures) {
                nlohmann::json f;
                f["index"] = idx;
                f["reason"] = o.reason;
                f["gap"] = std::isfinite(o.gap) ? nlohmann::json(o.gap) : nlohmann::json(nullptr);
                f["residual"] = o.residual;
                f["sample"] = pay;
                out.failures.emplace_back(idx, std::move(f));
            }
        }
    }
}

}  // namespace campaign_detail

/// Runs one campaign. Results do not depend on config.threads.
inline CampaignReport run_campaign(const CampaignConfig& config)
{
    using namespace campaign_detail;
    const auto& suites = campaign_suites();
    if (std::find(suites.begin(), suites.end(), config.suite) == suites.end()) throw ConfigError("unknown suite '" + config.suite + "'");
    require_dims(config);
    if (config.samples == 0) throw ConfigError("samples must be positive");
    if (config.threads < 1) throw ConfigError("threads must be >= 1");

    CampaignReport rep;
    rep.config = config;
    if (rep.config.tol < 0.0) rep.config.tol = default_tol(config.suite);
    const double tol = rep.config.tol;

    const int workers = static_cast<int>(std::min<std::uint64_t>(config.threads, config.samples));
    std::vector<Partial> parts(workers);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (config.samples + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::uint64_t b = std::min(config.samples, w * chunk);
        const std::uint64_t e = std::min(config.samples, b + chunk);
        if (workers == 1)
            run_range(rep.config, tol, b, e, parts[w]);
        else
            pool.emplace_back([&, b, e, w] { run_range(rep.config, tol, b, e, parts[w]); });
    }
    for (auto& t : pool) t.join();

    const bool use_max = aux_uses_max(config.suite);
    std::vector<std::pair<std::uint64_t, nlohmann::json>> fails;
    for (const Partial& p : parts) {
        rep.evaluated += p.evaluated;
        rep.violations += p.violations;
        rep.min_gap = std::min(rep.min_gap, p.min_gap);
        rep.max_residual = std::max(rep.max_residual, p.max_residual);
        fold_aux(rep.aux, p.aux, use_max);
        fails.insert(fails.end(), p.failures.begin(), p.failures.end());
    }
    std::sort(fails.begin(), fails.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    if (fails.size() > kMaxFailures) fails.resize(kMaxFailures);
    for (auto& f : fails) rep.failures.push_back(std::move(f.second));
    rep.aux_name = aux_label(config.suite);

    if (config.suite == "lemma42") {
        const PhiBounds b = est_vph_bounds(config.n, config.delta);
        rep.constants = {{"delta", config.delta}, {"lam2_max", b.lam2_max}, {"pair_max", b.pair_max}, {"c1", b.c1}};
    } else if (config.suite == "lemma43") {
        const double n = config.n;
        rep.constants = {{"c2", 4.0 * n * n * (n - 1) * (n - 1)}};
    } else if (config.suite == "rs1") {
        rep.constants = {{"tau_limit", double(2 * config.n - config.m - 1) / double(config.m - 1)}};
    }
    rep.passed = rep.violations == 0;
    return rep;
}

inline nlohmann::json CampaignReport::to_json() const
{
    nlohmann::json j;
    j["suite"] = config.suite;
    j["n"] = config.n;
    j["m"] = config.m;
    j["samples"] = config.samples;
    j["seed"] = config.seed;
    j["tolerance"] = config.tol;
    j["exact"] = config.exact;
    if (config.suite == "lemma42") j["delta"] = config.delta;
    j["evaluated"] = evaluated;
    j["violations"] = violations;
    j["min_gap"] = std::isfinite(min_gap) ? nlohmann::json(min_gap) : nlohmann::json(nullptr);
    j["max_residual"] = max_residual;
    if (!aux_name.empty()) j["statistics"] = {{aux_name, std::isnan(aux) ? nlohmann::json(nullptr) : nlohmann::json(aux)}};
    j["constants"] = constants;
    j["failures"] = failures;
    j["passed"] = passed;
    return j;
}

}  // namespace mcflab
