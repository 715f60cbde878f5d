#pragma once
//
// Grid measurement of (d_t - Lap) S, nabla S and (d_t - Lap) Phi on a torus
// graph, compared with the closed forms of the verifier (flat ambient space).
//
// The nonparametric flow moves the graph with velocity (0, v), v = g^{ab} f_ab,
// which is the normal flow H plus the tangential field F_* w, w^a = g^{ab} <J_b, v>.
// The normal-flow derivative of the pulled-back tensor is therefore
//   d_t S|_np - L_w S,
// and keeping the frame orthonormal while g evolves by -2 H_ab adds
//   H^c_a S_cb + S_ac H^c_b,   H_ab = <v - J w, f_ab>.
// Christoffel symbols of the graph metric are Gamma_dab = <J_d, f_ab>.
//

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "mcflab/errors.hpp"
#include "mcflab/flowsim/torus.hpp"
#include "mcflab/svcore.hpp"
#include "mcflab/verifier.hpp"

namespace mcflab::flowsim {

struct ConsistencyResult {
    int N = 0;
    double residual_evol_S = 0.0;  ///< max |measured (d_t - Lap) S_ij - evolution_rhs_S|
    double residual_grad_S = 0.0;  ///< max |measured S_ij;k - grad_S|
    double residual_phi = 0.0;     ///< max |measured (d_t - Lap) Phi - log det chain|
    int nodes = 0;
};

namespace consistency_detail {

using Mat2 = Eigen::Matrix2d;

struct NodeFields {
    Eigen::MatrixXd J;                 // m x 2
    std::array<Eigen::VectorXd, 3> f2; // f_00, f_01, f_11 (each m)
    Mat2 g, ginv, S;
    Eigen::VectorXd v;                 // m
    Eigen::Vector2d w;
    double phi = 0.0;

    const Eigen::VectorXd& second(int a, int b) const { return f2[a + b]; }
};

/// Gamma^e_ab = g^{ed} <J_d, f_ab>.
inline double christoffel(const NodeFields& q, int e, int a, int b)
{
    double s = 0.0;
    for (int d = 0; d < 2; ++d) s += q.ginv(e, d) * q.J.col(d).dot(q.second(a, b));
    return s;
}

}  // namespace consistency_detail

/// Evaluates the three residuals at the given nodes of a torus state.
inline ConsistencyResult consistency_check_evol_S(const TorusGrid& grid, const std::vector<double>& u, const std::vector<std::array<int, 2>>& nodes)
{
    using namespace consistency_detail;
    const int N = grid.N(), m = grid.m();
    const double h = grid.h();
    if (m < 2) throw ConfigError("consistency check needs target dimension >= 2");

    // Pointwise fields on the whole grid (periodic, so every node has neighbours).
    std::vector<NodeFields> F(static_cast<std::size_t>(N) * N);
    auto id = [&](int i, int j) { return static_cast<std::size_t>(grid.wrap(i)) * N + grid.wrap(j); };
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const TorusJet t = grid.jet(u, i, j);
            NodeFields& q = F[id(i, j)];
            q.J.resize(m, 2);
            for (int a = 0; a < m; ++a) {
                q.J(a, 0) = t.J[a][0];
                q.J(a, 1) = t.J[a][1];
            }
            for (int s = 0; s < 3; ++s) {
                q.f2[s].resize(m);
                for (int a = 0; a < m; ++a) q.f2[s][a] = t.second[a][s];
            }
            const Mat2 JtJ = q.J.transpose() * q.J;
            q.g = Mat2::Identity() + JtJ;
            q.ginv = q.g.inverse();
            q.S = Mat2::Identity() - JtJ;
            q.v = q.ginv(0, 0) * q.f2[0] + 2.0 * q.ginv(0, 1) * q.f2[1] + q.ginv(1, 1) * q.f2[2];
            q.w = q.ginv * (q.J.transpose() * q.v);
            const auto [l1, l2] = TorusGrid::singular_pair(t);
            q.phi = pair_phi(l1, l2);
        }

    // Centered first difference of a per-node field; evaluated eagerly so no expression outlives its operands.
    auto d1 = [&](auto get, int i, int j, int c) {
        using V = decltype(get(F[0]));
        const V plus = c == 0 ? get(F[id(i + 1, j)]) : get(F[id(i, j + 1)]);
        const V minus = c == 0 ? get(F[id(i - 1, j)]) : get(F[id(i, j - 1)]);
        return V((plus - minus) / (2.0 * h));
    };

    // nabla S at every node: (nabla_c S)_ab = d_c S_ab - Gamma^e_ca S_eb - Gamma^e_cb S_ae.
    std::vector<std::array<Mat2, 2>> nablaS(F.size());
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const NodeFields& q = F[id(i, j)];
            for (int c = 0; c < 2; ++c) {
                Mat2 dS = d1([](const NodeFields& x) { return x.S; }, i, j, c);
                Mat2 out;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        double s = dS(a, b);
                        for (int e = 0; e < 2; ++e) s -= christoffel(q, e, c, a) * q.S(e, b) + christoffel(q, e, c, b) * q.S(a, e);
                        out(a, b) = s;
                    }
                nablaS[id(i, j)][c] = out;
            }
        }

    ConsistencyResult res;
    res.N = N;
    const double tau = h * h;
    for (const auto& node : nodes) {
        const int i = node[0], j = node[1];
        const NodeFields& q = F[id(i, j)];

        // Time derivative of S at fixed coordinates by a centered probe f +- tau v (exact: S is quadratic in J).
        Eigen::MatrixXd Dv(m, 2);
        for (int c = 0; c < 2; ++c) Dv.col(c) = d1([](const NodeFields& x) { return Eigen::VectorXd(x.v); }, i, j, c);
        auto S_of = [&](const Eigen::MatrixXd& Jx) { return Mat2(Mat2::Identity() - Jx.transpose() * Jx); };
        const Mat2 dtS = (S_of(q.J + tau * Dv) - S_of(q.J - tau * Dv)) / (2.0 * tau);

        // Lie derivative along w.
        Mat2 dw;  // dw(c, a) = d_a w^c
        for (int a = 0; a < 2; ++a) {
            const Eigen::Vector2d col = d1([](const NodeFields& x) { return Eigen::Vector2d(x.w); }, i, j, a);
            dw(0, a) = col[0];
            dw(1, a) = col[1];
        }
        const Mat2 dS0 = d1([](const NodeFields& x) { return x.S; }, i, j, 0);
        const Mat2 dS1 = d1([](const NodeFields& x) { return x.S; }, i, j, 1);
        Mat2 LwS = q.w[0] * dS0 + q.w[1] * dS1;
        LwS += dw.transpose() * q.S + q.S * dw;

        // Normal-flow second fundamental form pairing H_ab = <v - J w, f_ab>, raised index H^c_a.
        const Eigen::VectorXd Hn = q.v - q.J * q.w;
        Mat2 Hab;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) Hab(a, b) = Hn.dot(q.second(a, b));
        const Mat2 Hup = q.ginv * Hab;  // Hup(c, a) = H^c_a
        const Mat2 DtS = dtS - LwS + Hup.transpose() * q.S + q.S * Hup;

        // Rough Laplacian g^{dc} (nabla_d nabla_c S)_ab.
        Mat2 lap = Mat2::Zero();
        for (int d = 0; d < 2; ++d)
            for (int c = 0; c < 2; ++c) {
                const Mat2 deriv = d == 0 ? Mat2((nablaS[id(i + 1, j)][c] - nablaS[id(i - 1, j)][c]) / (2.0 * h))
                                          : Mat2((nablaS[id(i, j + 1)][c] - nablaS[id(i, j - 1)][c]) / (2.0 * h));
                Mat2 nn;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        double s = deriv(a, b);
                        for (int e = 0; e < 2; ++e)
                            s -= christoffel(q, e, d, c) * nablaS[id(i, j)][e](a, b) + christoffel(q, e, d, a) * nablaS[id(i, j)][c](e, b) +
                                 christoffel(q, e, d, b) * nablaS[id(i, j)][c](a, e);
                        nn(a, b) = s;
                    }
                lap += q.ginv(d, c) * nn;
            }
        const Mat2 measured = DtS - lap;

        // Singular-value frame: J = U Sigma V^T, tangent frame p_i = V_i / sqrt(1 + s_i^2).
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(q.J, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::VectorXd sv = svd.singularValues();
        const Eigen::MatrixXd U = svd.matrixU();
        const Eigen::MatrixXd V = svd.matrixV();
        std::array<Eigen::Vector2d, 2> p;
        for (int k = 0; k < 2; ++k) p[k] = V.col(k) / std::sqrt(1.0 + sv[k] * sv[k]);

        HCoefficients<double> H(2, m);
        for (int l = 0; l < m; ++l) {
            const double sl = l < 2 ? sv[l] : 0.0;
            Mat2 B;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) B(a, b) = U.col(l).dot(q.second(a, b));
            B /= std::sqrt(1.0 + sl * sl);
            for (int k = 0; k < 2; ++k)
                for (int ii = 0; ii < 2; ++ii) H.at(l, k, ii) = p[k].dot(B * p[ii]);
        }
        const SRestriction<double> rest = make_restriction<double>(2, m, {sv[0], sv[1]});
        const CurvatureSample<double> flat(2, m);
        const SquareArray<double> rhs = evolution_rhs_S(rest, H, flat);
        const GradS<double> gS = grad_S(rest, H);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                res.residual_evol_S = std::max(res.residual_evol_S, std::abs(p[a].dot(measured * p[b]) - rhs(a, b)));
                for (int k = 0; k < 2; ++k) {
                    const Mat2 nk = p[k][0] * nablaS[id(i, j)][0] + p[k][1] * nablaS[id(i, j)][1];
                    res.residual_grad_S = std::max(res.residual_grad_S, std::abs(p[a].dot(nk * p[b]) - gS.at(a, b, k)));
                }
            }

        // (d_t - Lap) Phi: probe in time, subtract the tangential drift, scalar Laplacian.
        auto phi_of = [&](const Eigen::MatrixXd& Jx) {
            Eigen::JacobiSVD<Eigen::MatrixXd> s(Jx);
            return pair_phi(s.singularValues()[0], s.singularValues()[1]);
        };
        const double dtPhi = (phi_of(q.J + tau * Dv) - phi_of(q.J - tau * Dv)) / (2.0 * tau);
        auto P = [&](int di, int dj) { return F[id(i + di, j + dj)].phi; };
        const Eigen::Vector2d dPhi((P(1, 0) - P(-1, 0)) / (2.0 * h), (P(0, 1) - P(0, -1)) / (2.0 * h));
        Mat2 ddPhi;
        ddPhi(0, 0) = (P(1, 0) - 2.0 * P(0, 0) + P(-1, 0)) / (h * h);
        ddPhi(1, 1) = (P(0, 1) - 2.0 * P(0, 0) + P(0, -1)) / (h * h);
        ddPhi(0, 1) = ddPhi(1, 0) = (P(1, 1) - P(1, -1) - P(-1, 1) + P(-1, -1)) / (4.0 * h * h);
        double lapPhi = 0.0;
        for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d) {
                double hess = ddPhi(c, d);
                for (int e = 0; e < 2; ++e) hess -= christoffel(q, e, c, d) * dPhi[e];
                lapPhi += q.ginv(c, d) * hess;
            }
        const double measured_phi = dtPhi - q.w.dot(dPhi) - lapPhi;
        res.residual_phi = std::max(res.residual_phi, std::abs(measured_phi - theorem32_lhs(rest, H, flat)));
        ++res.nodes;
    }
    return res;
}

/// Nodes of the 32-grid that are nodes of every finer power-of-two grid.
inline std::vector<std::array<int, 2>> common_sample_nodes(int N)
{
    if (N % 32 != 0) throw ConfigError("consistency study needs a multiple of 32");
    const int f = N / 32;
    std::vector<std::array<int, 2>> out;
    for (int a : {3, 10, 17, 27})
        for (int b : {5, 12, 21, 29}) out.push_back({a * f, b * f});
    return out;
}

struct ConsistencyStudy {
    std::vector<ConsistencyResult> levels;
    std::vector<double> order_evol_S, order_grad_S, order_phi;  ///< log2 ratios of successive levels
};

/// Measures the residuals on the initial data at each resolution and the observed orders.
inline ConsistencyStudy consistency_study(const std::string& initial, double amplitude, const std::vector<int>& resolutions, int m = 2)
{
    ConsistencyStudy st;
    for (int N : resolutions) {
        const TorusGrid g = make_torus(N, m, initial, amplitude, {});
        st.levels.push_back(consistency_check_evol_S(g, g.values(), common_sample_nodes(N)));
    }
    for (std::size_t k = 1; k < st.levels.size(); ++k) {
        const auto& a = st.levels[k - 1];
        const auto& b = st.levels[k];
        st.order_evol_S.push_back(std::log2(a.residual_evol_S / b.residual_evol_S));
        st.order_grad_S.push_back(std::log2(a.residual_grad_S / b.residual_grad_S));
        st.order_phi.push_back(std::log2(a.residual_phi / b.residual_phi));
    }
    return st;
}

}  // namespace mcflab::flowsim
