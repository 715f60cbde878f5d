#include <gtest/gtest.h>

#include "mcflab/campaign.hpp"
#include "mcflab/sampling.hpp"

using namespace mcflab;

TEST(Sampling, SeedsAreStableAndStreamSeparated)
{
    EXPECT_EQ(sample_seed(1, stream_id("a"), 0), sample_seed(1, stream_id("a"), 0));
    EXPECT_NE(sample_seed(1, stream_id("a"), 0), sample_seed(1, stream_id("b"), 0));
    EXPECT_NE(sample_seed(1, stream_id("a"), 0), sample_seed(1, stream_id("a"), 1));
    EXPECT_NE(sample_seed(1, stream_id("a"), 0), sample_seed(2, stream_id("a"), 0));
}

TEST(Sampling, SpectraAreAreaDecreasingAndBounded)
{
    SampleRng rng(3);
    int boundary = 0;
    for (int t = 0; t < 20000; ++t) {
        const int n = 2 + t % 7, m = 2 + t % 5;
        const auto v = sample_area_decreasing(rng, n, m);
        ASSERT_EQ(static_cast<int>(v.size()), std::min(n, m));
        EXPECT_TRUE(std::is_sorted(v.rbegin(), v.rend()));
        for (double x : v) {
            EXPECT_GE(x, 0.0);
            EXPECT_LE(x, 2.0);
        }
        const double p = top_pair_product(v);
        EXPECT_LT(p, 0.999 + 1e-15);
        if (p >= 0.9) ++boundary;
    }
    EXPECT_GT(boundary, 20000 / 10);  // the near-boundary stratum is populated
}

TEST(Campaign, RejectsBadConfig)
{
    CampaignConfig c;
    c.suite = "nope";
    EXPECT_THROW(run_campaign(c), ConfigError);
    c.suite = "thm32";
    c.samples = 0;
    EXPECT_THROW(run_campaign(c), ConfigError);
    c.samples = 10;
    c.threads = 0;
    EXPECT_THROW(run_campaign(c), ConfigError);
    c.threads = 1;
    c.n = 9;
    c.exact = true;
    EXPECT_THROW(run_campaign(c), ConfigError);
    CampaignConfig r;
    r.suite = "rs1";
    r.n = 2;
    r.m = 3;
    EXPECT_THROW(run_campaign(r), ConfigError);
}

TEST(Campaign, EverySuitePassesSmallRuns)
{
    for (const auto& suite : campaign_suites()) {
        CampaignConfig c;
        c.suite = suite;
        c.n = 4;
        c.m = 3;
        c.samples = 2000;
        c.seed = 42;
        const auto rep = run_campaign(c);
        EXPECT_TRUE(rep.passed) << suite << ": " << rep.to_json().dump();
        EXPECT_EQ(rep.evaluated, c.samples) << suite;
    }
}

TEST(Campaign, ExactSuitesPass)
{
    for (const char* suite : {"lemma31", "thm32", "qs", "ricci", "vijk"}) {
        CampaignConfig c;
        c.suite = suite;
        c.n = 3;
        c.m = 2;
        c.samples = 100;
        c.exact = true;
        const auto rep = run_campaign(c);
        EXPECT_TRUE(rep.passed) << suite << ": " << rep.to_json().dump();
        if (std::string(suite) == "thm32") {
            EXPECT_GE(rep.min_gap, 0.0);
        }
    }
}

TEST(Campaign, ResultsIndependentOfThreadCount)
{
    for (const char* suite : {"thm32", "lemma42", "rs1"}) {
        CampaignConfig c;
        c.suite = suite;
        c.n = 4;
        c.m = 2;
        c.samples = 3001;
        c.seed = 9;
        c.threads = 1;
        const std::string one = run_campaign(c).to_json().dump();
        c.threads = 4;
        EXPECT_EQ(one, run_campaign(c).to_json().dump()) << suite;
        c.threads = 7;
        EXPECT_EQ(one, run_campaign(c).to_json().dump()) << suite;
    }
}

TEST(Campaign, ReportJsonCarriesConfigAndStatistics)
{
    CampaignConfig c;
    c.suite = "lemma42";
    c.n = 3;
    c.m = 3;
    c.samples = 500;
    c.delta = 3.0;
    const auto j = run_campaign(c).to_json();
    EXPECT_EQ(j.at("suite"), "lemma42");
    EXPECT_EQ(j.at("evaluated"), 500);
    EXPECT_EQ(j.at("delta"), 3.0);
    EXPECT_TRUE(j.at("constants").contains("c1"));
    EXPECT_EQ(j.at("tolerance"), 1e-12);
    EXPECT_TRUE(j.at("failures").empty());
    EXPECT_TRUE(j.at("passed").get<bool>());
}

TEST(Campaign, LogDetOracleAgreement)
{
    for (int n = 2; n <= 8; ++n) {
        CampaignConfig c;
        c.suite = "logdet";
        c.n = n;
        c.m = n;
        c.samples = 3000;
        const auto rep = run_campaign(c);
        EXPECT_TRUE(rep.passed) << n;
        EXPECT_LE(rep.max_residual, 1e-10) << n;
    }
}
