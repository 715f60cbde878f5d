#pragma once
//
// Rotationally equivariant maps S^2 -> S^2, (r, theta) -> (rho(r), theta),
// evolved by mean curvature flow of the graph in S^2 x S^2.
//
// The surface is embedded in R^6 by
//   X(r, theta) = (cos r, sin r cos theta, sin r sin theta, cos rho, sin rho cos theta, sin rho sin theta).
// Second derivatives come from finite differences of X, lose their components
// along the sphere normals (p, 0), (0, q) and the tangent plane, and are traced
// with diag(1 + rho'^2, sin^2 r + sin^2 rho). Invariance under the diagonal
// rotation keeps H inside span(nu); the orthogonal normal mu is monitored.
//

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "mcflab/errors.hpp"
#include "mcflab/flowsim/common.hpp"

namespace mcflab::flowsim {

using Vec6 = std::array<double, 6>;

inline double dot6(const Vec6& a, const Vec6& b)
{
    double s = 0.0;
    for (int k = 0; k < 6; ++k) s += a[k] * b[k];
    return s;
}

inline Vec6 axpy6(const Vec6& x, double a, const Vec6& y)  // x + a y
{
    Vec6 r;
    for (int k = 0; k < 6; ++k) r[k] = x[k] + a * y[k];
    return r;
}

/// Pointwise result of the embedded computation.
struct EquivariantNode {
    double speed = 0.0;  ///< d_t rho = sqrt(1 + rho'^2) <H, nu>
    double h_nu = 0.0;   ///< <H, nu>
    double h_mu = 0.0;   ///< <H, mu>
    double h_norm = 0.0;
    double A2 = 0.0;
    double rho_prime = 0.0;
};

class EquivariantProfile {
public:
    /// end_value is rho(pi): 0 for the trivial class, pi for the identity.
    EquivariantProfile(int J, double end_value, double theta0 = 0.7)
        : J_(J), h_(M_PI / J), end_(end_value), theta0_(theta0), rho_(J + 1, 0.0)
    {
        if (J < 8) throw ConfigError("equivariant resolution must be >= 8");
        rho_[J] = end_value;
        for (int j = 0; j <= J; ++j) {
            cr_.push_back(std::cos(r(j)));
            sr_.push_back(std::sin(r(j)));
        }
        const double th[3] = {theta0, theta0 + h_, theta0 - h_};
        for (int a = 0; a < 3; ++a) {
            ct_[a] = std::cos(th[a]);
            st_[a] = std::sin(th[a]);
        }
    }

    int J() const { return J_; }
    double h() const { return h_; }
    int source_dim() const { return 2; }
    double r(int j) const { return j * h_; }
    double end_value() const { return end_; }
    std::vector<double>& values() { return rho_; }
    const std::vector<double>& values() const { return rho_; }

    /// Ghost values by odd reflection through the poles.
    double at(const std::vector<double>& v, int j) const
    {
        if (j < 0) return -v[-j];
        if (j > J_) return 2.0 * end_ - v[2 * J_ - j];
        return v[j];
    }

    Vec6 embed(double r, double rho, double theta) const
    {
        const double c = std::cos(theta), s = std::sin(theta);
        return {std::cos(r), std::sin(r) * c, std::sin(r) * s, std::cos(rho), std::sin(rho) * c, std::sin(rho) * s};
    }

    /// Interior node computation, 0 < j < J. The mixed derivative is only needed for |A|^2.
    EquivariantNode node(const std::vector<double>& v, int j, bool with_A2 = true) const
    {
        const double qp = at(v, j + 1), qm = at(v, j - 1);
        return node_from(j, std::cos(qm), std::sin(qm), std::cos(v[j]), std::sin(v[j]), std::cos(qp), std::sin(qp), qp - qm, with_A2);
    }

    EquivariantNode node_from(int j, double cqm, double sqm, double cq0, double sq0, double cqp, double sqp, double dq, bool with_A2) const
    {
        // X depends on theta only through cos and sin, so dividing the differences by
        // 2 sin k and 4 sin^2(k/2) instead of 2k and k^2 makes the angular quotients exact.
        const double k = h_;
        const double dk1 = 2.0 * std::sin(k), dk2 = 4.0 * std::sin(0.5 * k) * std::sin(0.5 * k);
        // Angular factors at theta0 and theta0 +- k.
        const double c0 = ct_[0], s0 = st_[0], cP = ct_[1], sP = st_[1], cM = ct_[2], sM = st_[2];
        const double cr0 = cr_[j], sr0 = sr_[j], crp = cr_[j + 1], srp = sr_[j + 1], crm = cr_[j - 1], srm = sr_[j - 1];

        auto E = [](double cr, double sr, double cq, double sq, double c, double s) -> Vec6 {
            return {cr, sr * c, sr * s, cq, sq * c, sq * s};
        };
        const Vec6 X = E(cr0, sr0, cq0, sq0, c0, s0);
        const Vec6 Xrp = E(crp, srp, cqp, sqp, c0, s0), Xrm = E(crm, srm, cqm, sqm, c0, s0);
        const Vec6 Xtp = E(cr0, sr0, cq0, sq0, cP, sP), Xtm = E(cr0, sr0, cq0, sq0, cM, sM);

        Vec6 Xr, Xt, Xrr, Xtt;
        for (int c = 0; c < 6; ++c) {
            Xr[c] = (Xrp[c] - Xrm[c]) / (2.0 * h_);
            Xt[c] = (Xtp[c] - Xtm[c]) / dk1;
            Xrr[c] = (Xrp[c] - 2.0 * X[c] + Xrm[c]) / (h_ * h_);
            Xtt[c] = (Xtp[c] - 2.0 * X[c] + Xtm[c]) / dk2;
        }
        const double rho_prime = dq / (2.0 * h_);
        const double grr = 1.0 + rho_prime * rho_prime;
        const double gtt = sr0 * sr0 + sq0 * sq0;

        const Vec6 P{X[0], X[1], X[2], 0, 0, 0};
        const Vec6 Q{0, 0, 0, X[3], X[4], X[5]};

        // Orthonormal tangent basis from the computed tangents.
        const double nr = std::sqrt(dot6(Xr, Xr));
        Vec6 e1;
        for (int c = 0; c < 6; ++c) e1[c] = Xr[c] / nr;
        Vec6 e2 = axpy6(Xt, -dot6(Xt, e1), e1);
        const double n2 = std::sqrt(dot6(e2, e2));
        for (double& x : e2) x /= n2;

        auto normal_part = [&](Vec6 y) {
            y = axpy6(y, -dot6(y, P), P);
            y = axpy6(y, -dot6(y, Q), Q);
            y = axpy6(y, -dot6(y, e1), e1);
            y = axpy6(y, -dot6(y, e2), e2);
            return y;
        };
        const Vec6 Arr = normal_part(Xrr);
        const Vec6 Att = normal_part(Xtt);
        Vec6 H;
        for (int c = 0; c < 6; ++c) H[c] = Arr[c] / grr + Att[c] / gtt;

        const Vec6 p_r{-sr0, cr0 * c0, cr0 * s0, 0, 0, 0};
        const Vec6 q_rho{0, 0, 0, -sq0, cq0 * c0, cq0 * s0};
        Vec6 nu;
        for (int c = 0; c < 6; ++c) nu[c] = (-rho_prime * p_r[c] + q_rho[c]) / std::sqrt(grr);

        EquivariantNode out;
        out.rho_prime = rho_prime;
        out.h_nu = dot6(H, nu);
        out.speed = std::sqrt(grr) * out.h_nu;
        if (with_A2) {
            Vec6 mu{0, -sq0 * s0, sq0 * c0, 0, sr0 * s0, -sr0 * c0};
            const double mn = std::sqrt(dot6(mu, mu));
            for (double& x : mu) x /= mn;
            out.h_mu = dot6(H, mu);
            out.h_norm = std::sqrt(dot6(H, H));
            Vec6 Xrt;
            const Vec6 a = E(crp, srp, cqp, sqp, cP, sP), b = E(crp, srp, cqp, sqp, cM, sM);
            const Vec6 c2 = E(crm, srm, cqm, sqm, cP, sP), d = E(crm, srm, cqm, sqm, cM, sM);
            for (int c = 0; c < 6; ++c) Xrt[c] = (a[c] - b[c] - c2[c] + d[c]) / (2.0 * h_ * dk1);
            const Vec6 Art = normal_part(Xrt);
            out.A2 = dot6(Arr, Arr) / (grr * grr) + 2.0 * dot6(Art, Art) / (grr * gtt) + dot6(Att, Att) / (gtt * gtt);
        }
        return out;
    }

    /// Returns min Phi of v (NaN if some node is not area-decreasing).
    double velocity(const std::vector<double>& v, std::vector<double>& out) const
    {
        out.assign(v.size(), 0.0);
        cq_.resize(v.size());
        sq_.resize(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) {
            cq_[j] = std::cos(v[j]);
            sq_[j] = std::sin(v[j]);
        }
        for (int j = 1; j < J_; ++j) out[j] = node_from(j, cq_[j - 1], sq_[j - 1], cq_[j], sq_[j], cq_[j + 1], sq_[j + 1], v[j + 1] - v[j - 1], false).speed;
        return min_phi(v);
    }

    /// lambda_1 = |rho'|, lambda_2 = |sin rho / sin r|, with the pole limit lambda_2 = |rho'|.
    std::pair<double, double> spectrum(const std::vector<double>& v, int j) const
    {
        const double d = (at(v, j + 1) - at(v, j - 1)) / (2.0 * h_);
        const double l1 = std::abs(d);
        if (j == 0 || j == J_) return {l1, l1};
        return {l1, std::abs(std::sin(v[j]) / sr_[j])};
    }

    /// min Phi alone (NaN when flagged), for per-step monotonicity checks.
    double min_phi(const std::vector<double>& v) const
    {
        double mp = 0.0;
        for (int j = 0; j <= J_; ++j) {
            const auto [l1, l2] = spectrum(v, j);
            const double ph = pair_phi(l1, l2);
            if (std::isnan(ph)) return kNaN;
            mp = std::min(mp, ph);
        }
        return mp;
    }

    MonitorRecord monitor(const std::vector<double>& v, const std::vector<double>& vel, double t) const
    {
        MonitorRecord rec;
        rec.t = t;
        double min_phi = 0.0;
        double mu_ratio = 0.0;
        for (int j = 0; j <= J_; ++j) {
            const auto [l1, l2] = spectrum(v, j);
            rec.max_lambda = std::max({rec.max_lambda, l1, l2});
            rec.max_two_dilation = std::max(rec.max_two_dilation, l1 * l2);
            const double ph = pair_phi(l1, l2);
            if (std::isnan(ph))
                rec.flagged = true;
            else
                min_phi = std::min(min_phi, ph);
            rec.max_velocity = std::max(rec.max_velocity, std::abs(vel[j]));
            if (j > 0 && j < J_) {
                const EquivariantNode nd = node(v, j);
                rec.sup_A2 = std::max(rec.sup_A2, nd.A2);
                mu_ratio = std::max(mu_ratio, std::abs(nd.h_mu) / (kMuRelative * nd.h_norm + mu_floor()));
            }
        }
        rec.min_phi = rec.flagged ? kNaN : min_phi;
        rec.max_mu_ratio = mu_ratio;
        return rec;
    }

    /// The 1/(1 + rho'^2) coefficient is at most 1, so the flat bound applies.
    double stable_dt(double cfl) const { return cfl * h_ * h_ / source_dim(); }

    bool is_graphical(const std::vector<double>& v) const
    {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        for (int j = 0; j <= J_; ++j)
            if (std::abs((at(v, j + 1) - at(v, j - 1)) / (2.0 * h_)) > kBreakdownSlope) return false;
        return true;
    }

    static constexpr double kBreakdownSlope = 1e3;
    /// mu self-check: |<H, mu>| <= kMuRelative |H| + mu_floor(); the monitor reports the ratio, which must stay <= 1.
    static constexpr double kMuRelative = 1e-6;
    /// Roundoff floor of second differences: 100 eps / h^2.
    double mu_floor() const { return 100.0 * 2.220446049250313e-16 / (h_ * h_); }

private:
    int J_;
    double h_;
    double end_;
    double theta0_;
    std::vector<double> rho_;
    std::vector<double> cr_, sr_;
    std::array<double, 3> ct_{}, st_{};
    mutable std::vector<double> cq_, sq_;
};

/// Named initial data: sine (a sin r), identity (rho = r), constant (rho = 0).
inline EquivariantProfile make_equivariant(int J, const std::string& initial, double amplitude)
{
    if (initial == "identity") {
        EquivariantProfile p(J, M_PI);
        for (int j = 0; j <= J; ++j) p.values()[j] = p.r(j);
        p.values()[J] = M_PI;
        return p;
    }
    EquivariantProfile p(J, 0.0);
    if (initial == "sine") {
        for (int j = 0; j <= J; ++j) p.values()[j] = amplitude * std::sin(p.r(j));
        p.values()[0] = 0.0;
        p.values()[J] = 0.0;
    } else if (initial != "constant") {
        throw ConfigError("unknown equivariant initial data '" + initial + "'");
    }
    return p;
}

}  // namespace mcflab::flowsim
