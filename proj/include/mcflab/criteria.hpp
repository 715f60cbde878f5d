#pragma once
//
// Homotopy-triviality criteria for maps between model spaces, the named
// spectra of the standard Hopf-type maps, and the dilation search that rescales
// the target so both area-decreasing and curvature hypotheses hold at once.
//
// Verdicts never claim a map is essential: the criteria only certify triviality.
//

#include <cmath>
#include <limits>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "mcflab/errors.hpp"
#include "mcflab/geometry.hpp"
#include "mcflab/svcore.hpp"

namespace mcflab {

/// Bound on pair products for S^n -> S^m: (2n - m - 1) / (m - 1).
inline double sphere_pair_bound(int n, int m)
{
    if (!(n >= m && m >= 2)) throw DomainError("need n >= m >= 2");
    return double(2 * n - m - 1) / double(m - 1);
}

/// 2-dilation bound for S^{2n+1} -> CP^n.
inline double cp_bound(int n)
{
    if (n < 1) throw DomainError("need n >= 1");
    return 2.0 * n / (2.0 * n + 1.0);
}

/// 2-dilation bound for S^{4n+3} -> HP^n.
inline double hp_bound(int n)
{
    if (n < 1) throw DomainError("need n >= 1");
    return (4.0 * n + 2.0) / (4.0 * (n + 2.0));
}

/// Minimal degree of a homotopically nontrivial polynomial map S^n -> S^m.
inline double polynomial_degree_bound(int n, int m) { return std::sqrt(sphere_pair_bound(n, m)); }

enum class Criterion { Sectional, Ricci };

inline Criterion criterion_from_number(int theorem)
{
    if (theorem == 13) return Criterion::Sectional;
    if (theorem == 14) return Criterion::Ricci;
    throw ConfigError("theorem selector must be 13 or 14");
}

inline const char* criterion_name(Criterion c) { return c == Criterion::Sectional ? "sectional-curvature criterion" : "Ricci criterion"; }
inline int criterion_number(Criterion c) { return c == Criterion::Sectional ? 13 : 14; }

struct BoundCheck {
    std::string name;
    double lhs;
    std::string relation;  // "<", ">", ">="
    double rhs;
    bool ok;
};

/// Outcome of checking the curvature hypotheses of one criterion on a model pair.
struct HypothesisVerdict {
    Criterion criterion = Criterion::Sectional;
    bool holds = false;
    std::vector<BoundCheck> checks;
    std::string failing;  ///< first failing check, empty when holds
    std::vector<std::string> notes;
};

namespace criteria_detail {

inline BoundCheck make_check(std::string name, double lhs, const std::string& rel, double rhs)
{
    bool ok = false;
    if (rel == "<") ok = lhs < rhs;
    else if (rel == ">") ok = lhs > rhs;
    else ok = lhs >= rhs;
    return {std::move(name), lhs, rel, rhs, ok};
}

inline void finish(HypothesisVerdict& v)
{
    v.holds = true;
    for (const auto& c : v.checks)
        if (!c.ok) {
            v.holds = false;
            if (v.failing.empty()) v.failing = c.name;
        }
}

inline void note_rank_one_projective(const CurvatureModel& m, std::vector<std::string>& notes, const char* role)
{
    if (m.dim_parameter() != 1) return;
    if (m.kind() == ModelKind::FubiniStudyCP)
        notes.push_back(std::string(role) + " CP^1 is treated as the round sphere S^2(1/2): sectional curvature 4, Einstein constant 4");
    if (m.kind() == ModelKind::FubiniStudyHP)
        notes.push_back(std::string(role) + " HP^1 is treated as the round sphere S^4(1/2): sectional curvature 4");
}

inline void require_dims(const CurvatureModel& source, const CurvatureModel& target)
{
    const int n = source.real_dim(), m = target.real_dim();
    if (!(n >= m && m >= 2)) throw DimensionError("criteria need dim source >= dim target >= 2");
}

}  // namespace criteria_detail

/// Sectional criterion: sec_1 >= 1 and sec_2 < (2n - m - 1)/(m - 1).
inline HypothesisVerdict check_thm13(const CurvatureModel& source, const CurvatureModel& target)
{
    using namespace criteria_detail;
    require_dims(source, target);
    const int n = source.real_dim(), m = target.real_dim();
    const CurvatureBounds b1 = curvature_bounds(source), b2 = curvature_bounds(target);
    HypothesisVerdict v;
    v.criterion = Criterion::Sectional;
    v.checks.push_back(make_check("source sectional curvature >= 1", b1.sec_min, ">=", 1.0));
    v.checks.push_back(make_check("target sectional curvature < (2n-m-1)/(m-1)", b2.sec_max, "<", sphere_pair_bound(n, m)));
    note_rank_one_projective(source, v.notes, "source");
    note_rank_one_projective(target, v.notes, "target");
    finish(v);
    return v;
}

/// Ricci criterion: Ric_1/g_1 >= Ric_2/g_2 and sec_1 + sec_2 > 0.
inline HypothesisVerdict check_thm14(const CurvatureModel& source, const CurvatureModel& target)
{
    using namespace criteria_detail;
    require_dims(source, target);
    const CurvatureBounds b1 = curvature_bounds(source), b2 = curvature_bounds(target);
    HypothesisVerdict v;
    v.criterion = Criterion::Ricci;
    v.checks.push_back(make_check("source Einstein constant >= target Einstein constant", b1.ricci, ">=", b2.ricci));
    v.checks.push_back(make_check("min source sectional + min target sectional > 0", b1.sec_min + b2.sec_min, ">", 0.0));
    note_rank_one_projective(source, v.notes, "source");
    note_rank_one_projective(target, v.notes, "target");
    finish(v);
    return v;
}

inline HypothesisVerdict check_criterion(Criterion c, const CurvatureModel& source, const CurvatureModel& target)
{
    return c == Criterion::Sectional ? check_thm13(source, target) : check_thm14(source, target);
}

/// A map between model spaces described by its singular-value spectra.
class MapProfile {
public:
    MapProfile(std::string name, CurvatureModel source, CurvatureModel target, std::vector<SingularSpectrum> spectra)
        : name_(std::move(name)), source_(source), target_(target), spectra_(std::move(spectra))
    {
        if (spectra_.empty()) throw DomainError("profile needs at least one spectrum");
        for (const auto& s : spectra_) {
            if (s.n() != source_.real_dim() || s.m() != target_.real_dim()) throw DimensionError("spectrum dimensions do not match the models");
            sup_ = std::max(sup_, two_dilation(s));
        }
    }

    const std::string& name() const { return name_; }
    const CurvatureModel& source() const { return source_; }
    const CurvatureModel& target() const { return target_; }
    const std::vector<SingularSpectrum>& spectra() const { return spectra_; }
    double sup_two_dilation() const { return sup_; }
    bool is_constant() const { return spectra_.size() == 1; }

    /// Same profile with every spectrum multiplied by a common factor so the supremum becomes s.
    MapProfile with_sup_two_dilation(double s) const
    {
        if (!(s > 0.0) || !(sup_ > 0.0)) throw DomainError("cannot rescale a profile with zero 2-dilation");
        const double f = std::sqrt(s / sup_);
        std::vector<SingularSpectrum> out;
        for (const auto& sp : spectra_) out.push_back(rescale_spectrum(sp, f));
        return MapProfile(name_, source_, target_, std::move(out));
    }

private:
    std::string name_;
    CurvatureModel source_;
    CurvatureModel target_;
    std::vector<SingularSpectrum> spectra_;
    double sup_ = 0.0;
};

namespace criteria_detail {

inline SingularSpectrum repeated(int n, int m, int count, double value)
{
    return SingularSpectrum::from_values(n, m, std::vector<double>(count, value));
}

}  // namespace criteria_detail

/// Catalog: hopf_s3_s2, hopf_s7_s4, hopf_s15_s8, hopf_s2n1_cpn(n), hopf_s4n3_hpn(n), identity(n).
/// Sphere targets are unit spheres; projective targets carry the Fubini-Study metric.
inline MapProfile named_spectrum(const std::string& name)
{
    using criteria_detail::repeated;
    auto sphere = [](int d) { return CurvatureModel::round_sphere(d); };
    if (name == "hopf_s3_s2") return MapProfile(name, sphere(3), sphere(2), {repeated(3, 2, 2, 2.0)});
    if (name == "hopf_s7_s4") return MapProfile(name, sphere(7), sphere(4), {repeated(7, 4, 4, 2.0)});
    if (name == "hopf_s15_s8") return MapProfile(name, sphere(15), sphere(8), {repeated(15, 8, 8, 2.0)});

    static const std::regex param(R"(^\s*(hopf_s2n1_cpn|hopf_s4n3_hpn|identity)\s*\(\s*(\d+)\s*\)\s*$)");
    std::smatch mt;
    if (std::regex_match(name, mt, param)) {
        const std::string kind = mt[1];
        const int k = std::stoi(mt[2]);
        if (k < 1 || k > 64) throw ConfigError("profile parameter out of range in '" + name + "'");
        if (kind == "hopf_s2n1_cpn")
            return MapProfile(name, sphere(2 * k + 1), CurvatureModel::fubini_study_cp(k), {repeated(2 * k + 1, 2 * k, 2 * k, 1.0)});
        if (kind == "hopf_s4n3_hpn")
            return MapProfile(name, sphere(4 * k + 3), CurvatureModel::fubini_study_hp(k), {repeated(4 * k + 3, 4 * k, 4 * k, 1.0)});
        if (k < 2) throw ConfigError("identity needs dimension >= 2");
        return MapProfile(name, sphere(k), sphere(k), {repeated(k, k, k, 1.0)});
    }
    throw ConfigError("unknown profile '" + name + "'");
}

/// Feasible target scales for one criterion, with a witness.
struct DilationResult {
    Criterion criterion = Criterion::Sectional;
    bool feasible = false;
    double rho_lo = 0.0;  ///< open or closed lower end of the feasible rho set
    double rho_hi = 0.0;  ///< may be +inf
    bool lo_closed = false;
    bool hi_closed = false;
    std::optional<double> witness;
    std::optional<HypothesisVerdict> witness_check;
    bool witness_area_decreasing = false;
    double dilation_bound = 0.0;  ///< sup 2-dilation must be below this for some scale to work (+inf if unconstrained)
    std::string citation;
    std::vector<std::string> notes;

    /// Whether a given rho lies in the computed feasible set.
    bool contains(double rho) const
    {
        if (!feasible) return false;
        const bool above = lo_closed ? rho >= rho_lo : rho > rho_lo;
        const bool below = hi_closed ? rho <= rho_hi : rho < rho_hi;
        return above && below;
    }
};

namespace criteria_detail {

/// Interval in u = 1/rho^2 > 0.
struct UInterval {
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    bool lo_closed = false, hi_closed = false;
    bool empty = false;

    void above(double v, bool closed)
    {
        if (v > lo || (v == lo && !closed)) {
            lo = v;
            lo_closed = closed;
        }
    }
    void below(double v, bool closed)
    {
        if (v < hi || (v == hi && !closed)) {
            hi = v;
            hi_closed = closed;
        }
    }
    bool is_empty() const
    {
        if (empty) return true;
        if (lo < hi) return false;
        return !(lo == hi && lo_closed && hi_closed);
    }
};

/// a + b u > 0 (strict) or >= 0.
inline void linear_constraint(UInterval& I, double a, double b, bool strict)
{
    if (b > 0.0)
        I.above(-a / b, !strict);
    else if (b < 0.0)
        I.below(-a / b, !strict);
    else if (strict ? !(a > 0.0) : !(a >= 0.0))
        I.empty = true;
}

inline std::string corollary_label(const MapProfile& p, Criterion c)
{
    const auto& s = p.source();
    const auto& t = p.target();
    if (s.kind() == ModelKind::RoundSphere && t.kind() == ModelKind::RoundSphere && c == Criterion::Sectional) return "sphere-pair dilation corollary";
    if (s.kind() == ModelKind::RoundSphere && t.kind() == ModelKind::FubiniStudyCP) return "odd-sphere to CP^n dilation corollary";
    if (s.kind() == ModelKind::RoundSphere && t.kind() == ModelKind::FubiniStudyHP) return "odd-sphere to HP^n dilation remark";
    if (s.kind() == ModelKind::FubiniStudyCP && t.kind() == ModelKind::FubiniStudyCP) return "projective-space corollary";
    return "";
}

/// Scales u = 1/rho^2 for which the target metric rho^2 g satisfies the curvature
/// hypotheses; target curvature scales by u and the pair product by 1/u.
inline UInterval curvature_scales(const CurvatureModel& source, const CurvatureModel& target, Criterion criterion)
{
    const CurvatureBounds b1 = curvature_bounds(source);
    const CurvatureBounds b2 = curvature_bounds(target);
    const int n = source.real_dim(), m = target.real_dim();
    UInterval I;
    I.above(0.0, false);
    if (criterion == Criterion::Sectional) {
        if (!(b1.sec_min >= 1.0)) I.empty = true;
        linear_constraint(I, sphere_pair_bound(n, m), -b2.sec_max, true);
    } else {
        linear_constraint(I, b1.ricci, -b2.ricci, false);
        linear_constraint(I, b1.sec_min, b2.sec_min, true);
    }
    return I;
}

}  // namespace criteria_detail

/// Searches rho > 0 with sup 2-dilation * rho^2 < 1 and the criterion holding on the
/// target metric rho^2 g. The witness is the geometric mean of the endpoints; a
/// one-sided interval uses a factor 2 beyond the finite end, and the unconstrained
/// case uses rho = 1.
inline DilationResult dilation_trick(const MapProfile& profile, Criterion criterion)
{
    using namespace criteria_detail;
    require_dims(profile.source(), profile.target());
    const double s = profile.sup_two_dilation();
    if (!std::isfinite(s)) throw DomainError("profile 2-dilation must be finite");

    UInterval I = curvature_scales(profile.source(), profile.target(), criterion);
    DilationResult r;
    r.criterion = criterion;
    r.dilation_bound = I.is_empty() ? 0.0 : I.hi;
    I.above(s, false);  // s/u < 1
    note_rank_one_projective(profile.source(), r.notes, "source");
    note_rank_one_projective(profile.target(), r.notes, "target");
    if (I.is_empty()) return r;

    r.feasible = true;
    const double inf = std::numeric_limits<double>::infinity();
    r.rho_lo = std::isinf(I.hi) ? 0.0 : 1.0 / std::sqrt(I.hi);
    r.lo_closed = I.hi_closed;
    r.rho_hi = I.lo > 0.0 ? 1.0 / std::sqrt(I.lo) : inf;
    r.hi_closed = I.lo_closed;

    double w;
    if (r.rho_lo == r.rho_hi)
        w = r.rho_lo;
    else if (r.rho_lo > 0.0 && std::isfinite(r.rho_hi))
        w = std::sqrt(r.rho_lo * r.rho_hi);
    else if (r.rho_lo > 0.0)
        w = 2.0 * r.rho_lo;
    else if (std::isfinite(r.rho_hi))
        w = 0.5 * r.rho_hi;
    else
        w = 1.0;
    r.witness = w;
    r.witness_check = check_criterion(criterion, profile.source(), rescale(profile.target(), w));
    bool area = true;
    for (const auto& sp : profile.spectra()) area = area && is_area_decreasing(rescale_spectrum(sp, w));
    r.witness_area_decreasing = area;

    std::string label = corollary_label(profile, criterion);
    r.citation = "homotopically trivial by the " + std::string(criterion_name(criterion)) + (label.empty() ? "" : " (" + label + ")");
    return r;
}

}  // namespace mcflab
