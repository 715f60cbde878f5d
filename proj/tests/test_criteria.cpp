#include <gtest/gtest.h>

#include <cmath>

#include "mcflab/criteria.hpp"
#include "mcflab/io.hpp"

using namespace mcflab;

TEST(Bounds, ClosedForms)
{
    EXPECT_DOUBLE_EQ(sphere_pair_bound(3, 2), 3.0);
    EXPECT_DOUBLE_EQ(sphere_pair_bound(7, 4), 3.0);
    EXPECT_DOUBLE_EQ(sphere_pair_bound(15, 8), 3.0);
    EXPECT_DOUBLE_EQ(sphere_pair_bound(5, 5), 1.0);
    EXPECT_DOUBLE_EQ(polynomial_degree_bound(3, 2), std::sqrt(3.0));
    EXPECT_DOUBLE_EQ(cp_bound(1), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(hp_bound(1), 0.5);
    EXPECT_THROW(sphere_pair_bound(2, 3), DomainError);
    EXPECT_THROW(cp_bound(0), DomainError);
}

TEST(Bounds, CriterionSelector)
{
    EXPECT_EQ(criterion_from_number(13), Criterion::Sectional);
    EXPECT_EQ(criterion_from_number(14), Criterion::Ricci);
    EXPECT_THROW(criterion_from_number(12), ConfigError);
}

TEST(Hypotheses, SectionalOnSpheres)
{
    const auto ok = check_thm13(CurvatureModel::round_sphere(5), CurvatureModel::round_sphere(3));
    EXPECT_TRUE(ok.holds);
    EXPECT_TRUE(ok.failing.empty());
    // A small source radius raises curvature above 1; a small target radius breaks the upper bound.
    EXPECT_TRUE(check_thm13(CurvatureModel::round_sphere(5, 0.5), CurvatureModel::round_sphere(3)).holds);
    const auto bad = check_thm13(CurvatureModel::round_sphere(5), CurvatureModel::round_sphere(3, 0.5));
    EXPECT_FALSE(bad.holds);
    EXPECT_NE(bad.failing.find("target"), std::string::npos);
    EXPECT_FALSE(check_thm13(CurvatureModel::round_sphere(5, 2.0), CurvatureModel::round_sphere(3)).holds);
}

TEST(Hypotheses, RicciOnSpheresAndFlatSource)
{
    EXPECT_TRUE(check_thm14(CurvatureModel::round_sphere(5), CurvatureModel::round_sphere(3)).holds);
    EXPECT_FALSE(check_thm14(CurvatureModel::round_sphere(3), CurvatureModel::round_sphere(3, 0.9)).holds);
    const auto flat = check_thm14(CurvatureModel::flat_torus(3), CurvatureModel::flat_torus(2));
    EXPECT_FALSE(flat.holds);
    EXPECT_NE(flat.failing.find("sectional"), std::string::npos);
}

TEST(Hypotheses, DimensionOrderEnforced)
{
    EXPECT_THROW(check_thm13(CurvatureModel::round_sphere(2), CurvatureModel::round_sphere(3)), DimensionError);
    EXPECT_THROW(check_thm14(CurvatureModel::round_sphere(1), CurvatureModel::round_sphere(1)), DimensionError);
}

TEST(Hypotheses, RankOneProjectiveNotes)
{
    const auto v = check_thm14(CurvatureModel::round_sphere(3), CurvatureModel::fubini_study_cp(1));
    ASSERT_EQ(v.notes.size(), 1u);
    EXPECT_NE(v.notes[0].find("CP^1"), std::string::npos);
}

TEST(Profiles, HopfSpectra)
{
    const auto h = named_spectrum("hopf_s3_s2");
    EXPECT_EQ(h.source().real_dim(), 3);
    EXPECT_EQ(h.target().real_dim(), 2);
    EXPECT_DOUBLE_EQ(h.sup_two_dilation(), 4.0);
    EXPECT_DOUBLE_EQ(named_spectrum("hopf_s7_s4").sup_two_dilation(), 4.0);
    EXPECT_DOUBLE_EQ(named_spectrum("hopf_s15_s8").sup_two_dilation(), 4.0);
    const auto c = named_spectrum("hopf_s2n1_cpn(3)");
    EXPECT_EQ(c.source().real_dim(), 7);
    EXPECT_EQ(c.target().real_dim(), 6);
    EXPECT_DOUBLE_EQ(c.sup_two_dilation(), 1.0);
    const auto q = named_spectrum("hopf_s4n3_hpn(2)");
    EXPECT_EQ(q.source().real_dim(), 11);
    EXPECT_EQ(q.target().real_dim(), 8);
    EXPECT_DOUBLE_EQ(named_spectrum("identity(4)").sup_two_dilation(), 1.0);
    EXPECT_THROW(named_spectrum("identity(1)"), ConfigError);
    EXPECT_THROW(named_spectrum("hopf_s2n1_cpn(0)"), ConfigError);
    EXPECT_THROW(named_spectrum("nope"), ConfigError);
}

TEST(Profiles, RescaleToSupremum)
{
    const auto h = named_spectrum("hopf_s3_s2").with_sup_two_dilation(2.0);
    EXPECT_NEAR(h.sup_two_dilation(), 2.0, 1e-15);
    EXPECT_NEAR(h.spectra()[0].lambda()[0], std::sqrt(2.0), 1e-15);
}

TEST(Dilation, UnscaledHopfMapsAreOutsideTheSectionalCriterion)
{
    for (const char* name : {"hopf_s3_s2", "hopf_s7_s4", "hopf_s15_s8"}) {
        const auto r = dilation_trick(named_spectrum(name), Criterion::Sectional);
        EXPECT_FALSE(r.feasible) << name;
        EXPECT_DOUBLE_EQ(r.dilation_bound, 3.0) << name;
        EXPECT_FALSE(r.contains(1.0));
    }
}

TEST(Dilation, ShrunkHopfMapFeasibleWithOpenInterval)
{
    // sup 2-dilation 2: need 2 < u < 3 with u = 1/rho^2.
    const auto r = dilation_trick(named_spectrum("hopf_s3_s2").with_sup_two_dilation(2.0), Criterion::Sectional);
    ASSERT_TRUE(r.feasible);
    EXPECT_NEAR(r.rho_lo, 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(r.rho_hi, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_FALSE(r.lo_closed);
    EXPECT_FALSE(r.hi_closed);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_NEAR(*r.witness, std::sqrt(r.rho_lo * r.rho_hi), 1e-15);
    EXPECT_TRUE(r.witness_check->holds);
    EXPECT_TRUE(r.witness_area_decreasing);
    EXPECT_FALSE(r.contains(r.rho_lo));
    EXPECT_FALSE(r.contains(r.rho_hi));
    EXPECT_NE(r.citation.find("sphere-pair"), std::string::npos);
}

TEST(Dilation, RicciIntervalClosedAtEinsteinEquality)
{
    // S^3 -> S^2: Einstein constants 2 and u, so u <= 2 closed; sup 1 gives u > 1.
    const auto r = dilation_trick(named_spectrum("hopf_s3_s2").with_sup_two_dilation(1.0), Criterion::Ricci);
    ASSERT_TRUE(r.feasible);
    EXPECT_NEAR(r.rho_lo, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_TRUE(r.lo_closed);
    EXPECT_NEAR(r.rho_hi, 1.0, 1e-15);
    EXPECT_FALSE(r.hi_closed);
    EXPECT_TRUE(r.contains(r.rho_lo));
    EXPECT_DOUBLE_EQ(r.dilation_bound, 2.0);
}

TEST(Dilation, ProjectiveTargetsFollowEinsteinConstants)
{
    // Ric(S^{2k+1}) = 2k and Ric(CP^k) = 2(k+1): bound k/(k+1).
    for (int k = 1; k <= 6; ++k) {
        const auto r = dilation_trick(named_spectrum("hopf_s2n1_cpn(" + std::to_string(k) + ")"), Criterion::Ricci);
        EXPECT_FALSE(r.feasible);
        EXPECT_NEAR(r.dilation_bound, double(k) / (k + 1), 1e-15) << k;
    }
    // Ric(S^{4k+3}) = 4k+2 and Ric(HP^k) = 4(k+2): matches the quaternionic closed form.
    for (int k = 1; k <= 6; ++k) {
        const auto r = dilation_trick(named_spectrum("hopf_s4n3_hpn(" + std::to_string(k) + ")"), Criterion::Ricci);
        EXPECT_NEAR(r.dilation_bound, hp_bound(k), 1e-15) << k;
    }
}

TEST(Dilation, IdentityIsNeverCertified)
{
    for (int k = 2; k <= 6; ++k)
        for (auto c : {Criterion::Sectional, Criterion::Ricci}) {
            const auto r = dilation_trick(named_spectrum("identity(" + std::to_string(k) + ")"), c);
            EXPECT_FALSE(r.feasible);
            EXPECT_DOUBLE_EQ(r.dilation_bound, 1.0);
        }
}

TEST(Dilation, FlatSourceHasNoScale)
{
    const MapProfile p("flat", CurvatureModel::flat_torus(3), CurvatureModel::round_sphere(2), {SingularSpectrum::from_values(3, 2, {0.1, 0.1})});
    EXPECT_FALSE(dilation_trick(p, Criterion::Sectional).feasible);
    EXPECT_FALSE(dilation_trick(p, Criterion::Ricci).feasible);
}

TEST(Io, ModelParserRejectsMalformed)
{
    for (const char* bad : {"", "sphere", "sphere()", "cube(3)", "cp(2, 1)", "sphere(3) scaled -1", "sphere(0)", "sphere(x)", "torus(3) scaled"})
        EXPECT_THROW(parse_model(bad), ConfigError) << bad;
    EXPECT_DOUBLE_EQ(ricci_constant(parse_model("  sphere( 4 , 2 ) ")), 3.0 / 4.0);
}

TEST(Io, KeyValueConfig)
{
    const auto c = KeyValueConfig::parse("a = 1\n# note\n b=two # trailing\n\nc = 2.5\n");
    EXPECT_EQ(c.integer("a"), 1);
    EXPECT_EQ(c.get("b"), "two");
    EXPECT_EQ(c.unused(), std::vector<std::string>{"c"});
    EXPECT_DOUBLE_EQ(c.real("c"), 2.5);
    EXPECT_TRUE(c.unused().empty());
    EXPECT_EQ(c.integer("missing", 7), 7);
    EXPECT_THROW(c.get("missing"), ConfigError);
    EXPECT_THROW(c.integer("b"), ConfigError);
    EXPECT_THROW(KeyValueConfig::parse("a = 1\na = 2\n"), ConfigError);
    EXPECT_THROW(KeyValueConfig::parse("just words\n"), ConfigError);
    EXPECT_THROW(KeyValueConfig::parse(" = 3\n"), ConfigError);
    EXPECT_THROW(KeyValueConfig::load("/nonexistent/file.cfg"), ConfigError);
}

TEST(Io, ProfileFromJson)
{
    const auto p = profile_from_json(nlohmann::json::parse(R"j({"name": "p", "source": "sphere(3)", "target": "sphere(2)", "spectra": [[1, 0.5], [0.2]]})j"));
    EXPECT_EQ(p.name(), "p");
    EXPECT_EQ(p.spectra().size(), 2u);
    EXPECT_DOUBLE_EQ(p.sup_two_dilation(), 0.5);
    EXPECT_FALSE(p.is_constant());
    EXPECT_TRUE(profile_from_json(nlohmann::json::parse(R"j({"source": "sphere(3)", "target": "sphere(2)", "spectrum": [1]})j")).is_constant());
    for (const char* bad : {R"j([1])j", R"j({"source": "sphere(3)"})j", R"j({"source": "sphere(3)", "target": "sphere(2)"})j",
                            R"j({"source": "sphere(3)", "target": "sphere(2)", "spectrum": [1, 1, 1]})j",
                            R"j({"source": "sphere(3)", "target": "sphere(2)", "spectrum": ["a"]})j",
                            R"j({"source": "sphere(3)", "target": "sphere(2)", "spectrum": [-1]})j",
                            R"j({"source": "sphere(3)", "target": "sphere(2)", "spectra": []})j"})
        EXPECT_THROW(profile_from_json(nlohmann::json::parse(bad)), ConfigError) << bad;
}

TEST(Io, DilationJson)
{
    const auto r = dilation_trick(named_spectrum("hopf_s3_s2").with_sup_two_dilation(1.0), Criterion::Ricci);
    const auto j = dilation_to_json(r);
    EXPECT_EQ(j.at("criterion"), 14);
    EXPECT_TRUE(j.at("feasible").get<bool>());
    EXPECT_TRUE(j.at("rho_interval").at("lo_closed").get<bool>());
    EXPECT_TRUE(j.at("witness_hypotheses").at("holds").get<bool>());
    EXPECT_TRUE(j.at("witness_hypotheses").at("failing").is_null());

    const auto none = dilation_to_json(dilation_trick(named_spectrum("identity(3)"), Criterion::Sectional));
    EXPECT_FALSE(none.contains("witness"));
    EXPECT_EQ(real_to_json(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_TRUE(real_to_json(std::nan("")).is_null());
}
