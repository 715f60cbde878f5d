#pragma once
//
// Closed-form curvature descriptors for the homogeneous model spaces used by
// the homotopy criteria: round spheres, Fubini-Study CP^l and HP^l, flat tori.
//
// A model carries a metric multiplier rho; the metric is rho^2 * g, so every
// curvature output is divided by rho^2.
//

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "mcflab/errors.hpp"

namespace mcflab {

enum class ModelKind { RoundSphere, FubiniStudyCP, FubiniStudyHP, FlatTorus };

/// Invariants of an orthonormal pair X, Y needed to evaluate sectional curvature.
/// CP uses pairings[0] = <JX,Y>; HP uses all three <J_mu X,Y>; other models ignore it.
struct PlaneInvariants {
    std::array<double, 3> pairings{0.0, 0.0, 0.0};

    static PlaneInvariants kahler(double c) { return {{c, 0.0, 0.0}}; }
    static PlaneInvariants quaternionic(double c1, double c2, double c3) { return {{c1, c2, c3}}; }
};

class CurvatureModel {
public:
    static CurvatureModel round_sphere(int dim, double radius = 1.0)
    {
        if (dim < 1) throw DomainError("sphere dimension must be >= 1");
        if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("sphere radius must be positive");
        return CurvatureModel(ModelKind::RoundSphere, dim, radius, 1.0);
    }
    static CurvatureModel fubini_study_cp(int complex_dim)
    {
        if (complex_dim < 1) throw DomainError("CP complex dimension must be >= 1");
        return CurvatureModel(ModelKind::FubiniStudyCP, complex_dim, 1.0, 1.0);
    }
    static CurvatureModel fubini_study_hp(int quat_dim)
    {
        if (quat_dim < 1) throw DomainError("HP quaternionic dimension must be >= 1");
        return CurvatureModel(ModelKind::FubiniStudyHP, quat_dim, 1.0, 1.0);
    }
    static CurvatureModel flat_torus(int dim)
    {
        if (dim < 1) throw DomainError("torus dimension must be >= 1");
        return CurvatureModel(ModelKind::FlatTorus, dim, 1.0, 1.0);
    }

    ModelKind kind() const { return kind_; }
    /// Dimension parameter as given (complex dimension for CP, quaternionic for HP).
    int dim_parameter() const { return dim_; }
    double radius() const { return radius_; }
    double scale() const { return scale_; }

    int real_dim() const
    {
        switch (kind_) {
            case ModelKind::FubiniStudyCP: return 2 * dim_;
            case ModelKind::FubiniStudyHP: return 4 * dim_;
            default: return dim_;
        }
    }

    /// Metric rho^2 * g. Scales compose multiplicatively.
    CurvatureModel rescaled(double rho) const
    {
        if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rescale factor must be positive");
        CurvatureModel out = *this;
        out.scale_ *= rho;
        return out;
    }

    /// Descriptor in the CLI grammar, e.g. "cp(3) scaled 1.0408".
    std::string describe() const;

    friend bool operator==(const CurvatureModel&, const CurvatureModel&) = default;

private:
    CurvatureModel(ModelKind k, int dim, double radius, double scale)
        : kind_(k), dim_(dim), radius_(radius), scale_(scale) {}

    ModelKind kind_;
    int dim_;
    double radius_;
    double scale_;
};

inline CurvatureModel rescale(const CurvatureModel& model, double rho) { return model.rescaled(rho); }

inline double sectional_curvature(const CurvatureModel& model, const PlaneInvariants& plane = {})
{
    for (double c : plane.pairings)
        if (!(c >= -1.0 && c <= 1.0)) throw DomainError("plane invariant outside [-1, 1]");

    const double inv_s2 = 1.0 / (model.scale() * model.scale());
    switch (model.kind()) {
        case ModelKind::RoundSphere:
            return inv_s2 / (model.radius() * model.radius());
        case ModelKind::FlatTorus:
            return 0.0;
        case ModelKind::FubiniStudyCP: {
            const double c = plane.pairings[0];
            return (1.0 + 3.0 * c * c) * inv_s2;
        }
        case ModelKind::FubiniStudyHP: {
            double sum = 0.0;
            for (double c : plane.pairings) sum += c * c;
            if (sum > 1.0 + 1e-12) throw DomainError("sum of squared quaternionic pairings exceeds 1");
            return (1.0 + 3.0 * sum) * inv_s2;
        }
    }
    return 0.0;
}

/// Einstein constant kappa with Ric = kappa * g (every supported model is Einstein).
inline double ricci_constant(const CurvatureModel& model)
{
    const double inv_s2 = 1.0 / (model.scale() * model.scale());
    const int d = model.dim_parameter();
    switch (model.kind()) {
        case ModelKind::RoundSphere:
            return (d - 1) / (model.radius() * model.radius()) * inv_s2;
        case ModelKind::FubiniStudyCP:
            return 2.0 * (d + 1) * inv_s2;
        case ModelKind::FubiniStudyHP:
            return 4.0 * (d + 2) * inv_s2;
        case ModelKind::FlatTorus:
            return 0.0;
    }
    return 0.0;
}

struct CurvatureBounds {
    double sec_min;
    double sec_max;
    double ricci;
};

/// Tight sectional range over all planes, plus the Einstein constant.
/// CP^1 and HP^1 have a single plane type (they are round spheres of radius 1/2),
/// so their range collapses to {4}.
inline CurvatureBounds curvature_bounds(const CurvatureModel& model)
{
    const double inv_s2 = 1.0 / (model.scale() * model.scale());
    const double ric = ricci_constant(model);
    switch (model.kind()) {
        case ModelKind::RoundSphere: {
            const double k = inv_s2 / (model.radius() * model.radius());
            return {k, k, ric};
        }
        case ModelKind::FlatTorus:
            return {0.0, 0.0, 0.0};
        case ModelKind::FubiniStudyCP:
        case ModelKind::FubiniStudyHP:
            if (model.dim_parameter() == 1) return {4.0 * inv_s2, 4.0 * inv_s2, ric};
            return {1.0 * inv_s2, 4.0 * inv_s2, ric};
    }
    return {0.0, 0.0, 0.0};
}

inline std::string CurvatureModel::describe() const
{
    auto num = [](double x) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    std::string s;
    switch (kind_) {
        case ModelKind::RoundSphere:
            s = "sphere(" + std::to_string(dim_);
            if (radius_ != 1.0) s += ", " + num(radius_);
            s += ")";
            break;
        case ModelKind::FubiniStudyCP: s = "cp(" + std::to_string(dim_) + ")"; break;
        case ModelKind::FubiniStudyHP: s = "hp(" + std::to_string(dim_) + ")"; break;
        case ModelKind::FlatTorus: s = "torus(" + std::to_string(dim_) + ")"; break;
    }
    if (scale_ != 1.0) s += " scaled " + num(scale_);
    return s;
}

}  // namespace mcflab
