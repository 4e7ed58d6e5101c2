#include <gtest/gtest.h>

#include <martin/runner.hpp>

using namespace martin;

TEST(Config, DefaultsRoundTrip)
{
    ExperimentConfig c;
    c.command = "probe";
    auto const j = to_json(c);
    EXPECT_EQ(j.at("M"), 64);
    EXPECT_EQ(j.at("walks"), 100000);
    EXPECT_FALSE(j.contains("threads"));
    EXPECT_FALSE(j.contains("out_dir"));
    auto const back = config_from_json(j);
    EXPECT_EQ(to_json(back), j);
}

TEST(Config, ApplyOverrides)
{
    ExperimentConfig c;
    apply_json(json::parse(R"({"command":"exitdist","domain":"cutdisk","n":[2,4],
                               "z":[0.5,0.2],"seed":9})"),
               c);
    EXPECT_EQ(c.domain, "cutdisk");
    EXPECT_EQ(c.n, (std::vector<int>{2, 4}));
    EXPECT_EQ(c.seed, 9u);
    apply_json(json::parse(R"({"seed":11})"), c);
    EXPECT_EQ(c.seed, 11u);
    EXPECT_EQ(c.domain, "cutdisk");
    EXPECT_NO_THROW(validate(c));
}

TEST(Config, Rejects)
{
    ExperimentConfig c;
    EXPECT_THROW(apply_json(json::parse(R"({"wlaks":5})"), c), InputError);
    EXPECT_THROW(apply_json(json::parse(R"({"seed":"x"})"), c), InputError);
    EXPECT_THROW(apply_json(json::parse("[1]"), c), InputError);

    c.command = "exitdist";
    c.domain = "torus";
    EXPECT_THROW(validate(c), InputError);
    c.domain = "disk";
    c.n = {};
    EXPECT_THROW(validate(c), InputError);
    c.n = {2};
    c.cells = 0;
    EXPECT_THROW(validate(c), InputError);
    c.cells = 64;
    c.command = "teleport";
    EXPECT_THROW(validate(c), InputError);
}

TEST(Runner, ExitdistIsDeterministic)
{
    ExperimentConfig c;
    c.command = "exitdist";
    c.walks = 4000;
    c.budget_multiplier = 1;
    RunOutput a(c), b(c);
    run_exitdist(c, a);
    c.threads = 3;
    run_exitdist(c, b);
    EXPECT_EQ(a.files(), b.files());
    auto const files = a.files();
    ASSERT_EQ(files.size(), 2u);
    EXPECT_EQ(files[0].first, "exitdist.csv");
    EXPECT_TRUE(files[0].second.starts_with("# martinlab"));
    auto const summary = json::parse(files[1].second);
    EXPECT_EQ(summary.at("status"), "ok");
    EXPECT_EQ(summary.at("resolved_config").at("walks"), 4000);
    EXPECT_GT(summary.at("runtime").at("walks").get<std::uint64_t>(), 0u);
}

TEST(Runner, ProbeSchema)
{
    ExperimentConfig c;
    c.command = "probe";
    c.domain = "cutdisk";
    c.pair = "slit:0.5";
    c.n = {2, 4};
    c.walks = 3000;
    c.bootstrap = 20;
    RunOutput out(c);
    run_probe(c, out);
    auto const files = out.files();
    ASSERT_EQ(files[0].first, "probe.csv");
    auto const& text = files[0].second;
    EXPECT_NE(text.find("\ndomain,n,M,x,y,f_hat,ci,acc_x,acc_y,abort_x,abort_y,seed\n"),
              std::string::npos);
    EXPECT_TRUE(out.summary().at("verdicts").is_object());
}

TEST(Runner, OracleCheckMatchesGolden)
{
    ExperimentConfig c;
    c.command = "oracle-check";
    c.z = {0.75, 0.0};
    c.n = {2};
    c.gamma_n = 8;
    c.x0 = {0.5, 0.0};
    RunOutput out(c);
    run_oracle_check(c, out);
    auto const body = [](std::string const& s) {
        return s.substr(s.find("\ncell,") + 1);
    };
    for (auto const& [name, text] : out.files())
    {
        if (name == "summary.json")
            continue;
        auto const golden = io::read_file(std::string(MARTIN_GOLDEN_DIR) + "/" + name);
        EXPECT_EQ(body(text), body(golden)) << name;
    }
}
