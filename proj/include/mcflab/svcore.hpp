#pragma once
//
// Singular-value spectra of map differentials, the restriction of the
// product tensor S = g1 - g2 to a graph, the induced operator S^[2] on
// 2-vectors, and the monotone quantity
//
//     Phi = sum_{i<j} [ log(1 - l_i^2 l_j^2) - log(1 + l_i^2) - log(1 + l_j^2) ].
//

#include <algorithm>
#include <cmath>
#include <functional>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "mcflab/dense.hpp"
#include "mcflab/errors.hpp"

namespace mcflab {

/// Singular values of a differential between an n-manifold and an m-manifold.
/// Always n entries, sorted descending, zero beyond min(n, m).
class SingularSpectrum {
public:
    SingularSpectrum() = default;

    /// Missing trailing entries are zero. Throws if a value is negative or non-finite,
    /// or if more than min(n, m) values are nonzero.
    static SingularSpectrum from_values(int n, int m, std::vector<double> values)
    {
        if (n < 1 || m < 1) throw DomainError("spectrum dimensions must be positive");
        if (static_cast<int>(values.size()) > n) throw DimensionError("more singular values than source dimension");
        for (double v : values)
            if (!std::isfinite(v) || v < 0.0) throw DomainError("singular values must be finite and non-negative");
        values.resize(n, 0.0);
        std::stable_sort(values.begin(), values.end(), std::greater<>());
        const int p = std::min(n, m);
        for (int i = p; i < n; ++i)
            if (values[i] != 0.0) throw DomainError("at most min(n, m) singular values can be nonzero");
        SingularSpectrum s;
        s.n_ = n;
        s.m_ = m;
        s.lambda_ = std::move(values);
        return s;
    }

    int n() const { return n_; }
    int m() const { return m_; }
    const std::vector<double>& lambda() const { return lambda_; }
    double operator[](int i) const { return lambda_[i]; }

    friend bool operator==(const SingularSpectrum&, const SingularSpectrum&) = default;

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<double> lambda_;
};

/// df is n x m: row a holds the derivatives of the m target components along source direction a.
inline SingularSpectrum singular_values(const Eigen::MatrixXd& df)
{
    const int n = static_cast<int>(df.rows());
    const int m = static_cast<int>(df.cols());
    if (n < 1 || m < 1) throw DimensionError("empty differential");
    if (!df.allFinite()) throw DomainError("differential has non-finite entries");

    // Gram matrix of the smaller side; its eigenvalues are the squared singular values.
    const Eigen::MatrixXd gram = (m <= n) ? Eigen::MatrixXd(df.transpose() * df) : Eigen::MatrixXd(df * df.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    std::vector<double> values;
    values.reserve(n);
    for (int i = 0; i < eig.eigenvalues().size(); ++i) values.push_back(std::sqrt(std::max(0.0, eig.eigenvalues()[i])));
    return SingularSpectrum::from_values(n, m, std::move(values));
}

/// max_{i<j} l_i l_j, which for a sorted spectrum is l_1 l_2.
inline double two_dilation(const SingularSpectrum& spec)
{
    if (spec.n() < 2) throw DomainError("2-dilation needs at least two singular values");
    return spec[0] * spec[1];
}

inline bool is_area_decreasing(const SingularSpectrum& spec) { return two_dilation(spec) < 1.0; }

/// Multiplying the target metric by rho^2 multiplies every singular value by rho.
inline SingularSpectrum rescale_spectrum(const SingularSpectrum& spec, double rho)
{
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rescale factor must be positive");
    std::vector<double> v = spec.lambda();
    for (double& x : v) x *= rho;
    return SingularSpectrum::from_values(spec.n(), spec.m(), std::move(v));
}

/// Diagonal of F*S and the mixed entries in the singular-value frame:
///   S_ii = (1 - l_i^2) / (1 + l_i^2),   C_ii = 2 l_i / (1 + l_i^2).
///
/// Arrays have length max(n, m); entries past min(n, m) have l = 0, so S = 1 and C = 0.
/// The first n entries belong to the graph's tangent frame; indices below m also
/// label the normal frame e_{n+l}. Entries need not be sorted.
template <class T>
struct SRestriction {
    int n = 0;
    int m = 0;
    std::vector<T> lambda;
    std::vector<T> s;
    std::vector<T> c;

    int width() const { return static_cast<int>(lambda.size()); }
    T pair_sum(int i, int j) const { return s[i] + s[j]; }
};

/// Builds the restriction from up to min(n, m) leading singular values (any order).
template <class T>
SRestriction<T> make_restriction(int n, int m, const std::vector<T>& lambda)
{
    if (n < 1 || m < 1) throw DomainError("dimensions must be positive");
    const int p = std::min(n, m);
    if (static_cast<int>(lambda.size()) > std::max(n, m)) throw DimensionError("too many singular values");
    SRestriction<T> r;
    r.n = n;
    r.m = m;
    const int w = std::max(n, m);
    r.lambda.assign(w, T(0));
    for (int i = 0; i < static_cast<int>(lambda.size()); ++i) {
        if (lambda[i] < T(0)) throw DomainError("singular values must be non-negative");
        if (i >= p && lambda[i] != T(0)) throw DomainError("singular values past min(n, m) must vanish");
        r.lambda[i] = lambda[i];
    }
    r.s.resize(w);
    r.c.resize(w);
    for (int i = 0; i < w; ++i) {
        const T l2 = r.lambda[i] * r.lambda[i];
        r.s[i] = (T(1) - l2) / (T(1) + l2);
        r.c[i] = T(2) * r.lambda[i] / (T(1) + l2);
    }
    return r;
}

inline SRestriction<double> s_restriction(const SingularSpectrum& spec)
{
    return make_restriction<double>(spec.n(), spec.m(), spec.lambda());
}

/// Symmetric operator on pairs (i<j), stored dense with pair_index ordering.
template <class T>
using STwoOperator = SquareArray<T>;

/// S^[2]_{(ij)(kl)} = S_ik d_jl + S_jl d_ik - S_il d_jk - S_jk d_il  for i<j, k<l.
template <class T>
STwoOperator<T> s_two_matrix(const SquareArray<T>& S)
{
    const int n = S.size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if constexpr (std::is_floating_point_v<T>) {
                if (!(std::abs(S(i, j) - S(j, i)) <= 1e-12)) throw DomainError("S must be symmetric");
            } else {
                if (S(i, j) != S(j, i)) throw DomainError("S must be symmetric");
            }
        }
    const int N = pair_count(n);
    STwoOperator<T> out(N);
    auto delta = [](int a, int b) { return a == b; };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const int A = pair_index(i, j, n);
            for (int k = 0; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    T v(0);
                    if (delta(j, l)) v += S(i, k);
                    if (delta(i, k)) v += S(j, l);
                    if (delta(j, k)) v -= S(i, l);
                    if (delta(i, l)) v -= S(j, k);
                    out(A, pair_index(k, l, n)) = v;
                }
        }
    return out;
}

/// Pairs with 1 - l_i^2 l_j^2 below this are rejected rather than sent to -inf.
inline constexpr double kAreaDecreasingGuard = 1e-14;

inline double phi(const SingularSpectrum& spec)
{
    const auto& l = spec.lambda();
    const int n = spec.n();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double li2 = l[i] * l[i];
        for (int j = i + 1; j < n; ++j) {
            const double lj2 = l[j] * l[j];
            const double gap = 1.0 - li2 * lj2;
            if (!(gap >= kAreaDecreasingGuard)) throw NotAreaDecreasingError("spectrum is not area-decreasing");
            sum += std::log1p(-li2 * lj2) - std::log1p(li2) - std::log1p(lj2);
        }
    }
    return sum;
}

/// log det S^[2] = (n(n-1)/2) log 2 + Phi.
inline double log_det_s2(const SingularSpectrum& spec)
{
    return pair_count(spec.n()) * std::log(2.0) + phi(spec);
}

}  // namespace mcflab
