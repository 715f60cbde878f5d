#pragma once
//
// Graphs of maps from the flat 2-torus [0, 2 pi)^2 into R^m (or a flat m-torus,
// through the lift), evolved by the nonparametric mean curvature flow
//
//     d_t f = g^{ab} d_a d_b f,    g = I + Df^T Df.
//
// The lift is f(x) = W x + u(x) with u periodic; W carries the winding.
//

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "mcflab/errors.hpp"
#include "mcflab/flowsim/common.hpp"

namespace mcflab::flowsim {

inline constexpr int kTorusMaxTarget = 4;

/// Centered-difference jet of the lift at one node.
struct TorusJet {
    int m = 0;
    std::array<std::array<double, 2>, kTorusMaxTarget> J{};       ///< J[a][i] = d_i f^a
    std::array<std::array<double, 3>, kTorusMaxTarget> second{};  ///< (f_00, f_01, f_11) per component
    std::array<double, 3> ginv{};                                  ///< (g^00, g^01, g^11)

    double ginv_at(int a, int b) const { return a == b ? ginv[a == 0 ? 0 : 2] : ginv[1]; }
    double f2(int a, int i, int j) const { return second[a][i + j]; }
};

class TorusGrid {
public:
    TorusGrid(int N, int m, std::vector<double> winding)
        : N_(N), m_(m), h_(2.0 * M_PI / N), W_(std::move(winding)), u_(static_cast<std::size_t>(m) * N * N, 0.0)
    {
        if (N < 8) throw ConfigError("torus resolution must be >= 8");
        if (m < 1 || m > kTorusMaxTarget) throw ConfigError("torus target dimension must be in [1, 4]");
        if (W_.empty()) W_.assign(static_cast<std::size_t>(m) * 2, 0.0);
        if (static_cast<int>(W_.size()) != 2 * m) throw ConfigError("winding needs 2 m entries (row-major m x 2)");
    }

    int N() const { return N_; }
    int m() const { return m_; }
    double h() const { return h_; }
    int source_dim() const { return 2; }
    double x(int i) const { return i * h_; }
    double winding(int a, int i) const { return W_[a * 2 + i]; }
    const std::vector<double>& winding() const { return W_; }

    std::size_t index(int a, int i, int j) const
    {
        i = wrap(i);
        j = wrap(j);
        return (static_cast<std::size_t>(a) * N_ + i) * N_ + j;
    }

    int wrap(int i) const
    {
        if (i < 0) return i % N_ == 0 ? 0 : i % N_ + N_;
        return i < N_ ? i : i % N_;
    }

    std::vector<double>& values() { return u_; }
    const std::vector<double>& values() const { return u_; }

    /// Periodic part u^a at node (i, j) of an arbitrary value array.
    double u(const std::vector<double>& v, int a, int i, int j) const { return v[index(a, i, j)]; }

    TorusJet jet(const std::vector<double>& v, int i, int j) const
    {
        TorusJet t;
        t.m = m_;
        const double ih = 1.0 / h_, ih2 = ih * ih;
        for (int a = 0; a < m_; ++a) {
            const double c = u(v, a, i, j);
            const double xp = u(v, a, i + 1, j), xm = u(v, a, i - 1, j);
            const double yp = u(v, a, i, j + 1), ym = u(v, a, i, j - 1);
            t.J[a][0] = winding(a, 0) + 0.5 * (xp - xm) * ih;
            t.J[a][1] = winding(a, 1) + 0.5 * (yp - ym) * ih;
            t.second[a][0] = (xp - 2.0 * c + xm) * ih2;
            t.second[a][2] = (yp - 2.0 * c + ym) * ih2;
            t.second[a][1] = 0.25 * (u(v, a, i + 1, j + 1) - u(v, a, i + 1, j - 1) - u(v, a, i - 1, j + 1) + u(v, a, i - 1, j - 1)) * ih2;
        }
        double g00 = 1.0, g01 = 0.0, g11 = 1.0;
        for (int a = 0; a < m_; ++a) {
            g00 += t.J[a][0] * t.J[a][0];
            g01 += t.J[a][0] * t.J[a][1];
            g11 += t.J[a][1] * t.J[a][1];
        }
        const double det = g00 * g11 - g01 * g01;
        t.ginv = {g11 / det, -g01 / det, g00 / det};
        return t;
    }

    /// d_t u = g^{ab} f_ab at every node. Returns min Phi of v (NaN if some node is not area-decreasing).
    double velocity(const std::vector<double>& v, std::vector<double>& out) const
    {
        out.resize(v.size());
        double mp = 0.0;
        bool flagged = false;
        for (int i = 0; i < N_; ++i)
            for (int j = 0; j < N_; ++j) {
                const TorusJet t = jet(v, i, j);
                for (int a = 0; a < m_; ++a)
                    out[index(a, i, j)] = t.ginv[0] * t.second[a][0] + 2.0 * t.ginv[1] * t.second[a][1] + t.ginv[2] * t.second[a][2];
                const auto [l1, l2] = singular_pair(t);
                const double ph = pair_phi(l1, l2);
                if (std::isnan(ph))
                    flagged = true;
                else
                    mp = std::min(mp, ph);
            }
        return flagged ? kNaN : mp;
    }

    /// Pointwise spectra, Phi, |A|^2 and speed; reductions in fixed node order.
    MonitorRecord monitor(const std::vector<double>& v, const std::vector<double>& vel, double t) const
    {
        MonitorRecord r;
        r.t = t;
        double min_phi = 0.0;
        for (int i = 0; i < N_; ++i)
            for (int j = 0; j < N_; ++j) {
                const TorusJet q = jet(v, i, j);
                const auto [l1, l2] = singular_pair(q);
                r.max_lambda = std::max(r.max_lambda, l1);
                r.max_two_dilation = std::max(r.max_two_dilation, l1 * l2);
                const double ph = pair_phi(l1, l2);
                if (std::isnan(ph))
                    r.flagged = true;
                else
                    min_phi = std::min(min_phi, ph);
                r.sup_A2 = std::max(r.sup_A2, second_fundamental_norm2(q));
                for (int a = 0; a < m_; ++a) r.max_velocity = std::max(r.max_velocity, std::abs(vel[index(a, i, j)]));
            }
        r.min_phi = r.flagged ? kNaN : min_phi;
        return r;
    }

    /// Singular values of the m x 2 differential from its 2 x 2 Gram matrix.
    static std::pair<double, double> singular_pair(const TorusJet& q)
    {
        double a = 0.0, b = 0.0, c = 0.0;
        for (int k = 0; k < q.m; ++k) {
            a += q.J[k][0] * q.J[k][0];
            b += q.J[k][0] * q.J[k][1];
            c += q.J[k][1] * q.J[k][1];
        }
        const double mean = 0.5 * (a + c);
        const double rad = std::hypot(0.5 * (a - c), b);
        const double e1 = mean + rad;
        const double e2 = std::max(0.0, (a * c - b * b) / (e1 > 0.0 ? e1 : 1.0));
        const double l1 = std::sqrt(std::max(0.0, e1));
        const double l2 = q.m >= 2 ? std::sqrt(e2) : 0.0;
        return {l1, l2};
    }

    /// |A|^2 = g^{ik} g^{jl} <f_ij, (I + J J^T)^{-1} f_kl>, using (I + J J^T)^{-1} = I - J g^{-1} J^T.
    static double second_fundamental_norm2(const TorusJet& q)
    {
        auto pairing = [&](int i, int j, int k, int l) {
            double dot = 0.0;
            std::array<double, 2> ja{0.0, 0.0}, jb{0.0, 0.0};
            for (int a = 0; a < q.m; ++a) {
                const double x = q.f2(a, i, j), y = q.f2(a, k, l);
                dot += x * y;
                ja[0] += q.J[a][0] * x;
                ja[1] += q.J[a][1] * x;
                jb[0] += q.J[a][0] * y;
                jb[1] += q.J[a][1] * y;
            }
            double corr = 0.0;
            for (int s = 0; s < 2; ++s)
                for (int r = 0; r < 2; ++r) corr += ja[s] * q.ginv_at(s, r) * jb[r];
            return dot - corr;
        };
        double total = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) {
                        const double w = q.ginv_at(i, k) * q.ginv_at(j, l);
                        if (w != 0.0) total += w * pairing(i, j, k, l);
                    }
        return total;
    }

    /// Stable explicit step for the parabolic system: cfl h^2 / n.
    double stable_dt(double cfl) const { return cfl * h_ * h_ / source_dim(); }

    bool is_graphical(const std::vector<double>& v) const
    {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }

private:
    int N_;
    int m_;
    double h_;
    std::vector<double> W_;
    std::vector<double> u_;
};

/// Named initial data: sine (a sin x, a sin y, ...), mixed, linear (winding only), constant.
inline TorusGrid make_torus(int N, int m, const std::string& initial, double amplitude, std::vector<double> winding)
{
    if (initial == "linear" && winding.empty()) throw ConfigError("linear initial data needs a winding matrix");
    TorusGrid g(N, m, std::move(winding));
    auto& u = g.values();
    if (initial == "sine") {
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) u[g.index(a, i, j)] = amplitude * std::sin(a % 2 == 0 ? g.x(i) : g.x(j));
    } else if (initial == "mixed") {
        // Non-separable data whose differential has no preferred axes.
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) {
                    const double x = g.x(i), y = g.x(j);
                    u[g.index(a, i, j)] = amplitude * (std::sin(x + (a + 1) * y) + 0.5 * std::cos((a + 2) * x - y + 0.3 * a));
                }
    } else if (initial == "constant") {
        for (double& x : u) x = amplitude;
    } else if (initial != "linear") {
        throw ConfigError("unknown torus initial data '" + initial + "'");
    }
    return g;
}

}  // namespace mcflab::flowsim
