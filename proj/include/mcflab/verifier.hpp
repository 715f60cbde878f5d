#pragma once
//
// Algebraic identities and inequalities behind the monotonicity of log det S^[2]
// along graphical mean curvature flow, evaluated in the singular-value frame.
//
// Every routine is a template over the scalar field so the same code runs in
// double precision for sampled campaigns and in exact rational arithmetic for
// spot checks. Spectra, second fundamental forms and curvature arrays are free
// variables constrained only by the stated hypotheses; they are not required to
// be realized by actual manifolds.
//
// Index conventions (0-based): tangent indices i, j, k < n; a normal index l < m
// labels e_{n+l}. h(l, k, i) = <nabla_{e_k} e_i, e_{n+l}>.
//

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mcflab/dense.hpp"
#include "mcflab/errors.hpp"
#include "mcflab/svcore.hpp"

namespace mcflab {

template <class T>
T abs_value(const T& x)
{
    return x < T(0) ? T(-x) : x;
}

/// Second fundamental form coefficients h_{(n+l) k i}, symmetric in (k, i).
template <class T>
class HCoefficients {
public:
    HCoefficients() = default;
    HCoefficients(int n, int m) : n_(n), m_(m), h_(static_cast<std::size_t>(m) * n * n, T(0)) {}

    int n() const { return n_; }
    int m() const { return m_; }

    T& at(int l, int k, int i) { return h_[(static_cast<std::size_t>(l) * n_ + k) * n_ + i]; }
    const T& at(int l, int k, int i) const { return h_[(static_cast<std::size_t>(l) * n_ + k) * n_ + i]; }

    /// Sets both (k, i) and (i, k).
    void set(int l, int k, int i, const T& v)
    {
        at(l, k, i) = v;
        at(l, i, k) = v;
    }

    /// h for normal index l, zero when e_{n+l} does not exist (l >= m).
    T normal(int l, int k, int i) const { return l < m_ ? at(l, k, i) : T(0); }

    /// |A|^2 = sum of all squared coefficients.
    T norm2() const
    {
        T s(0);
        for (const T& x : h_) s += x * x;
        return s;
    }

    /// sum_{i<n, k} h_{(n+i) k i}^2.
    T diagonal_norm2() const
    {
        T s(0);
        for (int i = 0; i < std::min(n_, m_); ++i)
            for (int k = 0; k < n_; ++k) s += at(i, k, i) * at(i, k, i);
        return s;
    }

    bool is_symmetric() const
    {
        for (int l = 0; l < m_; ++l)
            for (int k = 0; k < n_; ++k)
                for (int i = k + 1; i < n_; ++i)
                    if (at(l, k, i) != at(l, i, k)) return false;
        return true;
    }

    const std::vector<T>& raw() const { return h_; }

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<T> h_;
};

/// Sectional curvatures of the domain (sec1, n x n) and target (sec2, p x p with
/// p = min(n, m)) along the singular-value frames u_i, v_i. Diagonals are zero;
/// target entries past p read as zero.
template <class T>
class CurvatureSample {
public:
    CurvatureSample() = default;
    CurvatureSample(int n, int m) : n_(n), m_(m), sec1_(n), sec2_(std::min(n, m)) {}

    int n() const { return n_; }
    int m() const { return m_; }

    T sec1(int i, int k) const { return sec1_(i, k); }
    T sec2(int i, int k) const
    {
        const int p = sec2_.size();
        return (i < p && k < p) ? sec2_(i, k) : T(0);
    }

    void set_sec1(int i, int k, const T& v)
    {
        if (i == k) throw DomainError("diagonal sectional curvature is undefined");
        sec1_(i, k) = v;
        sec1_(k, i) = v;
    }
    void set_sec2(int i, int k, const T& v)
    {
        if (i == k) throw DomainError("diagonal sectional curvature is undefined");
        if (i >= sec2_.size() || k >= sec2_.size()) throw DimensionError("target index out of range");
        sec2_(i, k) = v;
        sec2_(k, i) = v;
    }

    /// Ric'(i, i) = sum_k sec'(i, k).
    T ricci1(int i) const
    {
        T s(0);
        for (int k = 0; k < n_; ++k) s += sec1_(i, k);
        return s;
    }
    T ricci2(int i) const
    {
        T s(0);
        for (int k = 0; k < n_; ++k) s += sec2(i, k);
        return s;
    }

    int target_block() const { return sec2_.size(); }

private:
    int n_ = 0;
    int m_ = 0;
    SquareArray<T> sec1_;
    SquareArray<T> sec2_;
};

/// S_{ij;k}, stored as at(i, j, k).
template <class T>
class GradS {
public:
    explicit GradS(int n) : n_(n), g_(static_cast<std::size_t>(n) * n * n, T(0)) {}
    int n() const { return n_; }
    T& at(int i, int j, int k) { return g_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }
    const T& at(int i, int j, int k) const { return g_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }

    /// The symmetric n x n slice nabla_k S.
    SquareArray<T> slice(int k) const
    {
        SquareArray<T> out(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) out(i, j) = at(i, j, k);
        return out;
    }

private:
    int n_;
    std::vector<T> g_;
};

namespace detail {

template <class T>
void check_dims(const SRestriction<T>& rest, int n, int m, const char* what)
{
    if (rest.n != n || rest.m != m) throw DimensionError(std::string(what) + ": dimensions do not agree");
}

template <class T>
void require_positive_s2(const SRestriction<T>& rest)
{
    for (int i = 0; i < rest.n; ++i)
        for (int j = i + 1; j < rest.n; ++j)
            if (!(rest.pair_sum(i, j) > T(0))) throw HypothesisError("S^[2] is not positive definite (map not area-decreasing)");
}

template <class T>
T lambda2(const SRestriction<T>& rest, int i)
{
    return rest.lambda[i] * rest.lambda[i];
}

/// l_i^2 / (1 + l_i^2)^2
template <class T>
T weight(const SRestriction<T>& rest, int i)
{
    const T l2 = lambda2(rest, i);
    return l2 / ((T(1) + l2) * (T(1) + l2));
}

/// sum_k [ sec'(i,k) / (1 + l_k^2) - l_k^2 sec''(i,k) / (1 + l_k^2) ]
template <class T>
T mixed_curvature_row(const SRestriction<T>& rest, const CurvatureSample<T>& curv, int i)
{
    T s(0);
    for (int k = 0; k < rest.n; ++k) {
        const T lk2 = lambda2(rest, k);
        s += (curv.sec1(i, k) - lk2 * curv.sec2(i, k)) / (T(1) + lk2);
    }
    return s;
}

}  // namespace detail

/// S_{ij;k} = h_{a k i} S_{a j} + h_{a k j} S_{a i}, with S_{(n+l) j} = -C_jj d_{lj}.
template <class T>
GradS<T> grad_S(const SRestriction<T>& rest, const HCoefficients<T>& H)
{
    detail::check_dims(rest, H.n(), H.m(), "grad_S");
    const int n = rest.n;
    GradS<T> out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                out.at(i, j, k) = -(H.normal(j, k, i) * rest.c[j] + H.normal(i, k, j) * rest.c[i]);
    return out;
}

/// Right side of the evolution equation of F*S in the singular-value frame.
///
/// Only the curvature components R_{kik(n+i)} are determined by sectional data;
/// the mixed components R_{kik(n+j)}, i != j, are taken to vanish (they do on
/// space forms). This affects off-diagonal entries only.
template <class T>
SquareArray<T> evolution_rhs_S(const SRestriction<T>& rest, const HCoefficients<T>& H, const CurvatureSample<T>& curv)
{
    detail::check_dims(rest, H.n(), H.m(), "evolution_rhs_S");
    detail::check_dims(rest, curv.n(), curv.m(), "evolution_rhs_S");
    const int n = rest.n;
    const int m = rest.m;
    SquareArray<T> out(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            T hh(0);       // sum_{l,k} h_{lki} h_{lkj}
            T hh_s(0);     // sum_{l,k} h_{lki} h_{lkj} S_ll
            for (int l = 0; l < m; ++l)
                for (int k = 0; k < n; ++k) {
                    const T p = H.at(l, k, i) * H.at(l, k, j);
                    hh += p;
                    hh_s += p * rest.s[l];
                }
            T v = hh * (rest.s[i] + rest.s[j]) + T(2) * hh_s;
            if (i == j) v += T(4) * detail::weight(rest, i) * detail::mixed_curvature_row(rest, curv, i);
            out(i, j) = v;
            out(j, i) = v;
        }
    return out;
}

/// 2 S_ii + C_ii^2 / (S_ii + S_jj) - (S_ii + S_jj) - C_jj^2 / (S_ii + S_jj); vanishes identically.
template <class T>
T lemma31_key_identity_residual(const SRestriction<T>& rest, int i, int j)
{
    const T sigma = rest.pair_sum(i, j);
    return (T(2) * rest.s[i] + rest.c[i] * rest.c[i] / sigma) - (sigma + rest.c[j] * rest.c[j] / sigma);
}

/// (I + II) minus the lower bound claimed for it in the per-pair evolution lemma.
template <class T>
T lemma31_claim_gap(const SRestriction<T>& rest, const HCoefficients<T>& H, int i, int j)
{
    detail::check_dims(rest, H.n(), H.m(), "lemma31_claim_gap");
    detail::require_positive_s2(rest);
    if (!(0 <= i && i < j && j < rest.n)) throw DomainError("need 0 <= i < j < n");
    const int n = rest.n;
    const int m = rest.m;
    const T sigma = rest.pair_sum(i, j);
    const T si = rest.s[i], sj = rest.s[j], ci = rest.c[i], cj = rest.c[j];

    T term_I(0);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < m; ++l) {
            const T a = H.at(l, k, i), b = H.at(l, k, j);
            term_I += a * a * (si + rest.s[l]) + b * b * (sj + rest.s[l]);
        }

    T term_II(0);
    T rhs_h(0);
    T rhs_c(0);
    for (int k = 0; k < n; ++k) {
        const T hii = H.normal(i, k, i), hjj = H.normal(j, k, j);
        const T hji = H.normal(j, k, i), hij = H.normal(i, k, j);
        const T d = hii * ci + hjj * cj;
        term_II += d * d;
        const T e = hii * cj + hjj * ci;
        rhs_c += e * e;
        rhs_h += hji * hji + hij * hij + hii * hii + hjj * hjj;
        for (int l = n; l < m; ++l) rhs_h += H.at(l, k, i) * H.at(l, k, i) + H.at(l, k, j) * H.at(l, k, j);
    }
    term_II /= sigma;
    const T rhs = sigma * rhs_h + rhs_c / sigma;
    return term_I + term_II - rhs;
}

/// Gradient-square term Q_S; a sum of squares.
template <class T>
T qs(const SRestriction<T>& rest, const HCoefficients<T>& H)
{
    detail::check_dims(rest, H.n(), H.m(), "qs");
    detail::require_positive_s2(rest);
    const int n = rest.n;
    T total(0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const T sigma = rest.pair_sum(i, j);
            T acc(0);
            for (int k = 0; k < n; ++k) {
                const T hii = H.normal(i, k, i), hjj = H.normal(j, k, j);
                const T a = hii * rest.c[i] + hjj * rest.c[j];
                const T b = hii * rest.c[j] + hjj * rest.c[i];
                acc += a * a + b * b;
            }
            total += acc / (sigma * sigma);
        }
    return total;
}

/// Ambient curvature term R_S written through domain and target sectional curvatures.
template <class T>
T rs(const SRestriction<T>& rest, const CurvatureSample<T>& curv)
{
    detail::check_dims(rest, curv.n(), curv.m(), "rs");
    detail::require_positive_s2(rest);
    const int n = rest.n;
    std::vector<T> row(n);
    for (int i = 0; i < n; ++i) row[i] = T(2) * detail::weight(rest, i) * detail::mixed_curvature_row(rest, curv, i);
    T total(0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) total += (row[i] + row[j]) / rest.pair_sum(i, j);
    return total;
}

/// Left side of the log det S^[2] evolution inequality, assembled from the
/// evolution of S and its gradient:
///   sum_A Q^AA (d_t - Lap) S^[2]_AA + sum_{A,B} Q^AA Q^BB |nabla S^[2]_AB|^2.
template <class T>
T theorem32_lhs(const SRestriction<T>& rest, const HCoefficients<T>& H, const CurvatureSample<T>& curv)
{
    detail::require_positive_s2(rest);
    const int n = rest.n;
    const int N = pair_count(n);
    const SquareArray<T> evo = evolution_rhs_S(rest, H, curv);
    std::vector<T> q(N);
    T first(0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const int A = pair_index(i, j, n);
            q[A] = T(1) / rest.pair_sum(i, j);
            first += q[A] * (evo(i, i) + evo(j, j));
        }
    const GradS<T> grad = grad_S(rest, H);
    T second(0);
    for (int k = 0; k < n; ++k) {
        const STwoOperator<T> d2 = s_two_matrix(grad.slice(k));
        for (int A = 0; A < N; ++A)
            for (int B = 0; B < N; ++B) {
                const T v = d2(A, B);
                if (v != T(0)) second += q[A] * q[B] * v * v;
            }
    }
    return first + second;
}

/// LHS minus 2|A|^2 + 2(n-2) sum h_{(n+i)ki}^2 + 2 R_S + 2 Q_S; non-negative when S^[2] > 0.
template <class T>
T theorem32_master_gap(const SRestriction<T>& rest, const HCoefficients<T>& H, const CurvatureSample<T>& curv)
{
    detail::check_dims(rest, H.n(), H.m(), "theorem32_master_gap");
    detail::check_dims(rest, curv.n(), curv.m(), "theorem32_master_gap");
    const T lhs = theorem32_lhs(rest, H, curv);
    const T rhs = T(2) * H.norm2() + T(2) * T(rest.n - 2) * H.diagonal_norm2() + T(2) * rs(rest, curv) + T(2) * qs(rest, H);
    return lhs - rhs;
}

struct PhiBounds {
    double lam2_max;  ///< bound on each l_i^2
    double pair_max;  ///< bound on each l_i^2 l_j^2
    double c1;        ///< |Phi| <= c1 * sum l_i^2
};

/// Consequences of Phi >= -delta, with the constructive constant
/// c1 = (n-1) (1 + pair_max (e^delta + 1) / 2).
inline PhiBounds est_vph_bounds(int n, double delta)
{
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    if (n < 2) throw DomainError("need n >= 2");
    const double em1 = std::expm1(delta);
    const double ep1 = std::exp(delta) + 1.0;
    const double pair = em1 / ep1;
    return {em1, pair, (n - 1) * (1.0 + pair * ep1 / 2.0)};
}

/// nabla_k log det S^[2] in closed form:
///   -2 sum_{i<j} (1+l_i^2)(1+l_j^2)/(1-l_i^2 l_j^2) (h_{(n+i)ki} l_i/(1+l_i^2) + h_{(n+j)kj} l_j/(1+l_j^2)).
template <class T>
std::vector<T> grad_log_det(const SRestriction<T>& rest, const HCoefficients<T>& H)
{
    detail::check_dims(rest, H.n(), H.m(), "grad_log_det");
    detail::require_positive_s2(rest);
    const int n = rest.n;
    std::vector<T> g(n, T(0));
    for (int k = 0; k < n; ++k) {
        T acc(0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const T li2 = detail::lambda2(rest, i), lj2 = detail::lambda2(rest, j);
                const T coef = (T(1) + li2) * (T(1) + lj2) / (T(1) - li2 * lj2);
                acc += coef * (H.normal(i, k, i) * rest.lambda[i] / (T(1) + li2) + H.normal(j, k, j) * rest.lambda[j] / (T(1) + lj2));
            }
        g[k] = T(-2) * acc;
    }
    return g;
}

struct GradBoundResult {
    bool holds;
    double lhs;  ///< |nabla log det S^[2]|^2
    double rhs;  ///< c2 e^{4 delta} (e^delta - 1) |A|^2
    double c2;
};

/// Checks |nabla log det S^[2]|^2 <= c2 e^{4 delta}(e^delta - 1)|A|^2, c2 = 4 n^2 (n-1)^2.
inline GradBoundResult grad_logdet_bound(const SRestriction<double>& rest, const HCoefficients<double>& H, double delta)
{
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    const SingularSpectrum spec = SingularSpectrum::from_values(
        rest.n, rest.m, std::vector<double>(rest.lambda.begin(), rest.lambda.begin() + std::min(rest.n, rest.m)));
    if (phi(spec) < -delta) throw HypothesisError("Phi < -delta");
    const std::vector<double> g = grad_log_det(rest, H);
    double lhs = 0.0;
    for (double x : g) lhs += x * x;
    const double n = rest.n;
    const double c2 = 4.0 * n * n * (n - 1) * (n - 1);
    const double rhs = c2 * std::exp(4.0 * delta) * std::expm1(delta) * H.norm2();
    return {lhs <= rhs, lhs, rhs, c2};
}

inline bool grad_logdet_bound_check(const SRestriction<double>& rest, const HCoefficients<double>& H, double delta)
{
    return grad_logdet_bound(rest, H, delta).holds;
}

namespace detail {

template <class T>
void check_v_domain(const T& li, const T& lj, const T& lk)
{
    if (!(T(1) - li * li * lk * lk > T(0)) || !(T(1) - lj * lj * lk * lk > T(0)))
        throw DomainError("V_ijk needs l_i^2 l_k^2 < 1 and l_j^2 l_k^2 < 1");
}

template <class T>
T v_denominator(const T& li, const T& lj, const T& lk)
{
    const T li2 = li * li, lj2 = lj * lj, lk2 = lk * lk;
    return T(2) * (T(1) + li2) * (T(1) + lj2) * (T(1) - li2 * lk2) * (T(1) - lj2 * lk2);
}

}  // namespace detail

/// Regrouping weight V_ijk in factored form; symmetric in (i, j), and
/// non-negative once additionally l_i l_j < 1.
template <class T>
T v_ijk(const T& li, const T& lj, const T& lk)
{
    detail::check_v_domain(li, lj, lk);
    const T lk2 = lk * lk;
    const T d = li - lj;
    const T p = li * lj;
    const T bracket = d * d * (T(1) + p * p * lk2) + T(2) * p * (T(1) - p * lk2) * (T(1) - p);
    return (T(1) + lk2) * bracket / detail::v_denominator(li, lj, lk);
}

/// Same weight from the expanded numerator.
template <class T>
T v_ijk_expanded(const T& li, const T& lj, const T& lk)
{
    detail::check_v_domain(li, lj, lk);
    const T li2 = li * li, lj2 = lj * lj, lk2 = lk * lk;
    const T num = li2 + lj2 - T(2) * li2 * lj2 - T(2) * li2 * lj2 * lk2 + li2 * li2 * lj2 * lk2 + li2 * lj2 * lj2 * lk2;
    return (T(1) + lk2) * num / detail::v_denominator(li, lj, lk);
}

/// Ricci part of the regrouped curvature term.
template <class T>
T ricci_regroup_ricci_part(const SRestriction<T>& rest, const CurvatureSample<T>& curv)
{
    const int n = rest.n;
    T total(0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            total += (detail::weight(rest, i) * (curv.ricci1(i) - curv.ricci2(i)) + detail::weight(rest, j) * (curv.ricci1(j) - curv.ricci2(j))) /
                     rest.pair_sum(i, j);
    return total;
}

/// Pair and triple contributions sum_{i<j} P_ij T(i,j) + sum_{i<j<k} V-weighted T,
/// for an arbitrary symmetric plane function T(i, j).
template <class T, class PlaneFn>
T regrouped_sectional_part(const SRestriction<T>& rest, PlaneFn&& plane)
{
    const int n = rest.n;
    const auto& l = rest.lambda;
    T total(0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const T li2 = detail::lambda2(rest, i), lj2 = detail::lambda2(rest, j);
            total += (li2 + lj2) / (T(2) * (T(1) + li2) * (T(1) + lj2)) * plane(i, j);
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                total += v_ijk(l[i], l[j], l[k]) * plane(i, j) + v_ijk(l[j], l[k], l[i]) * plane(j, k) +
                         v_ijk(l[i], l[k], l[j]) * plane(i, k);
    return total;
}

/// |R_S - (Ricci part + pair terms + V-weighted triple terms)|; vanishes identically.
template <class T>
T ricci_regroup_residual(const SRestriction<T>& rest, const CurvatureSample<T>& curv)
{
    detail::check_dims(rest, curv.n(), curv.m(), "ricci_regroup_residual");
    detail::require_positive_s2(rest);
    const T regrouped = ricci_regroup_ricci_part(rest, curv) +
                        regrouped_sectional_part(rest, [&](int i, int j) { return curv.sec1(i, j) + curv.sec2(i, j); });
    return abs_value(T(rs(rest, curv) - regrouped));
}

template <class T>
struct Rs1Result {
    T gap;  ///< R_S minus the uniform lower bound
    // Two-dimensional-target auxiliaries (zero when m > 2).
    T aux_pair;                ///< closed form over the pair (1, 2)
    T aux_pair_residual;       ///< closed form minus the summed definition
    T aux_mixed;               ///< closed form over pairs (i <= 2, j > 2)
    T aux_mixed_residual;
};

/// R_S minus sum_{i<j} (S_ii+S_jj)^{-1} (w_i + w_j) ((2n-m-1) - (m-1) tau),
/// under sec' >= 1, sec'' <= tau, n >= m >= 2.
template <class T>
Rs1Result<T> rs1_lowerbound(const SRestriction<T>& rest, const CurvatureSample<T>& curv, const T& tau)
{
    detail::check_dims(rest, curv.n(), curv.m(), "rs1_lowerbound");
    detail::require_positive_s2(rest);
    const int n = rest.n;
    const int m = rest.m;
    if (!(n >= m && m >= 2)) throw HypothesisError("need n >= m >= 2");
    if (!(tau > T(0))) throw HypothesisError("tau must be positive");
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (i == k) continue;
            if (curv.sec1(i, k) < T(1)) throw HypothesisError("domain sectional curvature below 1");
            if (curv.sec2(i, k) > tau) throw HypothesisError("target sectional curvature above tau");
        }

    const T factor = T(2 * n - m - 1) - T(m - 1) * tau;
    T bound(0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) bound += (detail::weight(rest, i) + detail::weight(rest, j)) / rest.pair_sum(i, j) * factor;

    Rs1Result<T> out{rs(rest, curv) - bound, T(0), T(0), T(0), T(0)};
    if (m == 2) {
        const T l1 = rest.lambda[0], l2 = rest.lambda[1];
        const T a = l1 * l1, b = l2 * l2;
        const T s1 = rest.s[0], s2 = rest.s[1];
        const T w1 = detail::weight(rest, 0), w2 = detail::weight(rest, 1);
        // excess X_i = -S_ii + S_11 + S_22
        const T x1 = s2, x2 = s1;
        const T pair_sum_form = (w1 * x1 + w2 * x2) / (s1 + s2);
        out.aux_pair = (a + b) * (T(1) - a * b) / ((T(1) + a) * (T(1) + a) * (T(1) + b) * (T(1) + b)) / (s1 + s2);
        out.aux_pair_residual = out.aux_pair - pair_sum_form;
        const T mixed_sum_form = w1 * x1 / (s1 + T(1)) + w2 * x2 / (s2 + T(1));
        const T d = l1 - l2;
        out.aux_mixed = (d * d + T(2) * l1 * l2 * (T(1) - l1 * l2)) / (T(2) * (T(1) + a) * (T(1) + b));
        out.aux_mixed_residual = out.aux_mixed - mixed_sum_form;
    }
    return out;
}

template <class T>
T rs1_lowerbound_gap(const SRestriction<T>& rest, const CurvatureSample<T>& curv, const T& tau)
{
    return rs1_lowerbound(rest, curv, tau).gap;
}

template <class T>
struct Ss14Result {
    T gap;    ///< R_S minus the lower-bound expression
    T bound;  ///< the lower-bound expression itself (non-negative under the hypotheses)
};

/// Lower bound for R_S under sec' > -sigma and Ric' >= (n-1) sigma >= (n-1) sec''.
template <class T>
Ss14Result<T> ss14_rs_lowerbound(const SRestriction<T>& rest, const CurvatureSample<T>& curv, const T& sigma)
{
    detail::check_dims(rest, curv.n(), curv.m(), "ss14_rs_lowerbound");
    detail::require_positive_s2(rest);
    const int n = rest.n;
    if (n < 2) throw HypothesisError("need n >= 2");
    if (!(sigma > T(0))) throw HypothesisError("sigma must be positive");
    const T ric_floor = T(n - 1) * sigma;
    for (int i = 0; i < n; ++i) {
        if (curv.ricci1(i) < ric_floor) throw HypothesisError("domain Ricci curvature below (n-1) sigma");
        for (int k = 0; k < n; ++k) {
            if (i == k) continue;
            if (!(curv.sec1(i, k) > -sigma)) throw HypothesisError("domain sectional curvature not above -sigma");
            if (curv.sec2(i, k) > sigma) throw HypothesisError("target sectional curvature above sigma");
        }
    }

    T bound(0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const T li2 = detail::lambda2(rest, i), lj2 = detail::lambda2(rest, j);
            const T den = T(1) - li2 * lj2;
            bound += li2 * (T(1) + lj2) / (T(2) * (T(1) + li2) * den) * (curv.ricci1(i) - ric_floor) +
                     lj2 * (T(1) + li2) / (T(2) * (T(1) + lj2) * den) * (curv.ricci1(j) - ric_floor);
        }
    bound += regrouped_sectional_part(rest, [&](int i, int j) { return curv.sec1(i, j) + sigma; });
    return {rs(rest, curv) - bound, bound};
}

}  // namespace mcflab
