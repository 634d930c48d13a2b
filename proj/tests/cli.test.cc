// Copyright 2026 The mzmqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "mzmqec/cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

using namespace mzmqec;
using Json = nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string &name) {
    return testing::TempDir() + "/mzmqec_" + name;
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream f(path);
    f << text;
}

std::string read_file(const std::string &path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, derive_probs_pass_through) {
    CliResult r = run({"derive-probs", "--p2", "0.01", "--q", "0.2", "--r", "0.1"});
    ASSERT_EQ(r.code, 0) << r.err;
    Json j = Json::parse(r.out);
    ASSERT_EQ(j["probs"]["model"], "MC");
    ASSERT_NEAR(j["probs"]["p_pair"][2].get<double>(), 0.0072, 1e-15);
    ASSERT_NEAR(j["probs"]["p_qp"][2].get<double>(), 0.0008, 1e-15);
    ASSERT_NEAR(j["probs"]["p_cor_even"].get<double>(), 0.0036, 1e-15);
    ASSERT_NEAR(j["probs"]["p_cor_odd"].get<double>(), 0.0004, 1e-15);
    ASSERT_EQ(j["config"]["seed"], "1");
}

TEST(Cli, invalid_values_name_the_key) {
    CliResult r = run({"derive-probs", "--q", "abc"});
    ASSERT_EQ(r.code, kExitInvalidConfig);
    Json e = Json::parse(r.err);
    ASSERT_EQ(e["error"], "invalid_config");
    ASSERT_EQ(e["key"], "q");

    r = run({"derive-probs", "--p2", "0.9", "--q", "1"});
    ASSERT_EQ(r.code, kExitInvalidConfig);

    r = run({"dump-layout", "--d", "4"});
    ASSERT_EQ(r.code, kExitInvalidConfig);
    ASSERT_EQ(Json::parse(r.err)["key"], "d");

    r = run({"sweep", "--xs", "0.2,0.1"});
    ASSERT_EQ(Json::parse(r.err)["key"], "xs");

    r = run({"frobnicate"});
    ASSERT_EQ(r.code, kExitInvalidConfig);
}

TEST(Cli, config_file_with_flag_override) {
    std::string path = temp_path("cfg.conf");
    write_file(path, "# MC example\nmodel = MC\np2=0.02\nq=0.5\nr=0.1\n\n");
    CliResult r = run({"derive-probs", "--config", path, "--q", "0.25"});
    ASSERT_EQ(r.code, 0) << r.err;
    Json j = Json::parse(r.out);
    ASSERT_NEAR(j["probs"]["p_cor_even"].get<double>(), 2 * 0.02 * 0.25 * 0.9, 1e-15);
    ASSERT_EQ(j["config"]["q"], "0.25");

    write_file(path, "model=MC\nwidth=3\n");
    r = run({"derive-probs", "--config", path});
    ASSERT_EQ(r.code, kExitInvalidConfig);
    ASSERT_EQ(Json::parse(r.err)["key"], "width");

    r = run({"derive-probs", "--config", temp_path("missing")});
    ASSERT_EQ(r.code, kExitInvalidConfig);
}

TEST(Cli, parse_config_text_modes) {
    ConfigMap plain = parse_config_text("# comment\n  d = 7 \nmodel=PMC\n");
    ASSERT_EQ(plain.size(), 2u);
    ASSERT_EQ(plain["d"], "7");
    ASSERT_EQ(plain["model"], "PMC");
    // Output files: only the embedded lines count.
    ConfigMap embedded = parse_config_text("#config d=9\n#config seed=3\nmodel,d\nMC,9\n");
    ASSERT_EQ(embedded.size(), 2u);
    ASSERT_EQ(embedded["seed"], "3");
    ASSERT_THROW(parse_config_text("d 7\n"), ConfigError);
    ASSERT_THROW(parse_config_text("colour=red\n"), ConfigError);
}

TEST(Cli, resolve_config_checks_sweep_points) {
    ConfigMap m = {{"model", "MC"}, {"xs", "0.1,0.6"}, {"q", "1"}};
    try {
        resolve_config(m);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        ASSERT_EQ(e.key(), "xs");
    }
    ConfigMap log = {{"xs", "log:0.001:0.1:3"}};
    ExperimentConfig c = resolve_config(log);
    ASSERT_EQ(c.xs.size(), 3u);
    ASSERT_NEAR(c.xs[1], 0.01, 1e-15);
    ASSERT_THROW(resolve_config({{"p_mst", "0.1"}, {"p_mst1", "0.2"}}), ConfigError);
    ASSERT_EQ(resolve_config({{"p_mst", "0.1"}}).params.p_mst2, 0.1);
    ASSERT_EQ(resolve_config({{"trials", "1e5"}}).budget.max_trials, 100000u);
    ASSERT_THROW(resolve_config({{"trials", "-3"}}), ConfigError);
}

TEST(Cli, rates_defaults) {
    CliResult r = run({"rates", "--model", "MC"});
    ASSERT_EQ(r.code, 0) << r.err;
    Json j = Json::parse(r.out);
    ASSERT_GT(j["params"]["p2"].get<double>(), 0.0);
    ASSERT_LT(j["params"]["r"].get<double>(), 0.1);
    r = run({"rates", "--tau", "10"});
    ASSERT_EQ(r.code, kExitInvalidConfig);
}

TEST(Cli, dump_layout_json) {
    CliResult r = run({"dump-layout", "--d", "5", "--layout", "geometric"});
    ASSERT_EQ(r.code, 0) << r.err;
    Json j = Json::parse(r.out);
    ASSERT_EQ(j["code"]["n_gauges"], 40);
    ASSERT_EQ(j["code"]["gauge_matrix"].size(), 40u);
    ASSERT_EQ(j["code"]["gauge_matrix"][0].get<std::string>().size(), 100u);
    ASSERT_EQ(j["code"]["schedule"].size(), 4u);
    ASSERT_EQ(j["code"]["schedule"][0]["pairs"].size(), 10u);
    ASSERT_EQ(j["code"]["gauges"][0][0]["sites"], "23");
    ASSERT_EQ(j["code"]["gauges"][0][1]["sites"], "14");
}

TEST(Cli, ft_check_exit_codes) {
    CliResult r = run({"ft-check", "--model", "QpBf", "--d", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_TRUE(Json::parse(r.out)["passed"].get<bool>());
    r = run({"ft-check", "--model", "MCLongLived"});
    ASSERT_EQ(r.code, kExitInvalidConfig);
}

TEST(Cli, threshold_unbracketed_exit_code) {
    CliResult r = run({"threshold", "--model", "Qp", "--xs", "0.001,0.002", "--trials", "500"});
    ASSERT_EQ(r.code, kExitUnbracketed);
    ASSERT_EQ(Json::parse(r.err)["error"], "unbracketed");
    Json j = Json::parse(r.out);
    ASSERT_FALSE(j["thresholds"][0]["bracketed"].get<bool>());
}

TEST(Cli, threshold_bracketed) {
    CliResult r = run({"threshold", "--model", "Qp", "--xs", "0.03,0.06,0.12,0.2", "--trials", "3000"});
    ASSERT_EQ(r.code, 0) << r.err;
    Json j = Json::parse(r.out);
    double p_th = j["thresholds"][0]["p_th"].get<double>();
    ASSERT_GT(p_th, 0.06);
    ASSERT_LT(p_th, 0.12);
    ASSERT_EQ(j["points"].size(), 4u);
}

TEST(Cli, sweep_output_reproduces_itself) {
    std::string a = temp_path("a.csv"), b = temp_path("b.csv"), c = temp_path("c.csv");
    std::vector<std::string> args = {"sweep", "--model", "MC", "--xs", "0.002,0.004", "--q", "0.5", "--r", "0.1",
                                     "--p_mst", "1e-3", "--trials", "2000", "--seed", "5", "--importance",
                                     "--batch_size", "100"};
    auto with = [&](std::vector<std::string> extra) {
        std::vector<std::string> all = args;
        all.insert(all.end(), extra.begin(), extra.end());
        return all;
    };
    CliResult r1 = run(with({"--out", a, "--workers", "1"}));
    ASSERT_EQ(r1.code, 0) << r1.err;
    CliResult r2 = run(with({"--out", b, "--workers", "3"}));
    ASSERT_EQ(r2.code, 0) << r2.err;
    std::string text = read_file(a);
    ASSERT_EQ(text, read_file(b));
    ASSERT_NE(text.find("#config seed=5\n"), std::string::npos);
    ASSERT_NE(text.find("#config importance=true\n"), std::string::npos);
    ASSERT_EQ(text.find("workers"), std::string::npos);
    ASSERT_EQ(text.find("#config out="), std::string::npos);
    // Rerunning the embedded config reproduces the file.
    CliResult r3 = run({"sweep", "--config", a, "--out", c});
    ASSERT_EQ(r3.code, 0) << r3.err;
    ASSERT_EQ(read_file(c), text);
    ASSERT_NE(text.find("\nMC,5,standard,p0,0.002,"), std::string::npos);
    Json summary = Json::parse(r1.out);
    ASSERT_EQ(summary["thresholds"].size(), 1u);
}

TEST(Cli, help_exits_cleanly) {
    CliResult r = run({"--help"});
    ASSERT_EQ(r.code, 0);
    ASSERT_NE(r.out.find("sweep"), std::string::npos);
}

TEST(Cli, bundled_configs_resolve) {
    size_t n = 0;
    for (const auto &entry : std::filesystem::directory_iterator(std::string(MZMQEC_SOURCE_DIR) + "/configs")) {
        if (entry.path().extension() != ".conf") {
            continue;
        }
        ExperimentConfig cfg = resolve_config(load_config_file(entry.path().string()));
        ASSERT_FALSE(cfg.xs.empty()) << entry.path();
        n++;
    }
    ASSERT_GE(n, 4u);
}
