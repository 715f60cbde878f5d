#pragma once
// Independent reference computations used only by the tests. None of these
// share code paths with the library beyond plain data types.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Random orthogonal matrix from the QR factorisation of a Gaussian matrix.
inline Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = N(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    return qr.householderQ();
}

/// S = (I - D D^T)(I + D D^T)^{-1} in an orthonormal graph frame for a differential D (n x m),
/// written through a random rotation so the matrix is not diagonal.
inline Eigen::MatrixXd rotated_s(const std::vector<double>& lambda, int n, int m, std::mt19937_64& rng)
{
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, m);
    for (int i = 0; i < static_cast<int>(lambda.size()); ++i) D(i, i) = lambda[i];
    const Eigen::MatrixXd U = random_orthogonal(n, rng), V = random_orthogonal(m, rng);
    const Eigen::MatrixXd Df = U * D * V.transpose();
    const Eigen::MatrixXd A = Df * Df.transpose();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    return (I + A).ldlt().solve(I - A);
}

/// Second additive compound of a symmetric matrix: (S^[2])_{(ij)(kl)} as an n(n-1)/2 square matrix.
inline Eigen::MatrixXd second_compound(const Eigen::MatrixXd& S)
{
    const int n = static_cast<int>(S.rows());
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    const int N = static_cast<int>(pairs.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N, N);
    for (int A = 0; A < N; ++A)
        for (int B = 0; B < N; ++B) {
            const auto [i, j] = pairs[A];
            const auto [k, l] = pairs[B];
            double v = 0.0;
            if (j == l) v += S(i, k);
            if (i == k) v += S(j, l);
            if (j == k) v -= S(i, l);
            if (i == l) v -= S(j, k);
            out(A, B) = v;
        }
    return out;
}

/// log det through the eigenvalues of a symmetric matrix; NaN unless positive definite.
inline double log_det_eigen(const Eigen::MatrixXd& M)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        if (!(es.eigenvalues()[i] > 0.0)) return std::nan("");
        s += std::log(es.eigenvalues()[i]);
    }
    return s;
}

/// Ambient curvature term for n = m = 2 written out by hand:
///   R = 2 [ l1^2/(1+l1^2)^2 (a - l2^2 b)/(1+l2^2) + l2^2/(1+l2^2)^2 (a - l1^2 b)/(1+l1^2) ] / (S11 + S22)
/// with a = sec'(1,2), b = sec''(1,2), S11 + S22 = 2 (1 - l1^2 l2^2) / ((1+l1^2)(1+l2^2)).
inline double rs_two_by_two(double l1, double l2, double a, double b)
{
    const double p = l1 * l1, q = l2 * l2;
    const double t1 = p / ((1 + p) * (1 + p)) * (a - q * b) / (1 + q);
    const double t2 = q / ((1 + q) * (1 + q)) * (a - p * b) / (1 + p);
    const double sum = 2.0 * (1 - p * q) / ((1 + p) * (1 + q));
    return 2.0 * (t1 + t2) / sum;
}

/// Closed-form speed of rotationally symmetric maps S^2 -> S^2 under the graph flow:
///   rho_t = rho'' / (1 + rho'^2) + (rho' sin 2r - sin 2rho) / (2 (sin^2 r + sin^2 rho)).
inline double equivariant_speed(double r, double rho, double d1, double d2)
{
    const double sr = std::sin(r), sq = std::sin(rho);
    return d2 / (1.0 + d1 * d1) + (d1 * std::sin(2.0 * r) - std::sin(2.0 * rho)) / (2.0 * (sr * sr + sq * sq));
}

/// Phi for a spectrum straight from the definition as a product, for cross-checking log1p forms.
inline double phi_product(const std::vector<double>& l)
{
    long double prod = 1.0L;
    for (std::size_t i = 0; i < l.size(); ++i)
        for (std::size_t j = i + 1; j < l.size(); ++j) {
            const long double a = l[i] * l[i], b = l[j] * l[j];
            prod *= (1.0L - a * b) / ((1.0L + a) * (1.0L + b));
        }
    return static_cast<double>(std::log(prod));
}

}  // namespace oracle
