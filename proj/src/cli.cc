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

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

namespace mzmqec {

using Json = nlohmann::ordered_json;

namespace {

struct KeySpec {
    const char *name;
    const char *default_value;
    const char *help;
};

const std::vector<KeySpec> &key_specs() {
    static const std::vector<KeySpec> specs = {
        {"model", "Qp", "Noise model: Qp, QpBf, MC, PMC or MCLongLived"},
        {"d", "5", "Code distance (odd, 3..31)"},
        {"layout", "standard", "Tetron layout: standard or geometric"},
        {"m", "2", "Majorana pairs per island"},
        {"p0", "0", "Event probability of an idle island"},
        {"p1", "0", "Event probability of an island in a one-island measurement"},
        {"p2", "0", "Event probability of an island in a two-island measurement"},
        {"r", "0", "Relaxation time over time step"},
        {"q", "0", "Fraction of correlated events"},
        {"p_mst", "", "Sets p_mst1 and p_mst2 together"},
        {"p_mst1", "0", "Flip probability of a one-island measurement"},
        {"p_mst2", "0", "Flip probability of a two-island measurement"},
        {"p_pair_extra", "0", "Extra pair-wise dephasing per time step"},
        {"x_axis", "p0", "Sweep axis: p0 or avg = (p0 + 4 p2) / 5"},
        {"xs", "", "Sweep points: comma list or log:lo:hi:n"},
        {"swept", "", "Parameter varied across curves: r, q, p_mst or p2_ratio"},
        {"values", "", "Values of the swept parameter (comma list)"},
        {"p1_ratio", "1", "p1 / p0 during sweeps"},
        {"p2_ratio", "1", "p2 / p0 during sweeps"},
        {"trials", "100000", "Trials per point (real trials when importance sampling)"},
        {"fail_target", "0", "Stop a point early after this many failures (0 = never)"},
        {"seed", "1", "Master seed"},
        {"workers", "0", "Worker threads (0 = available parallelism)"},
        {"batch_size", "1000", "Trials per scheduling batch"},
        {"importance", "false", "Importance sampling"},
        {"final_relax", "false", "Relax islands left odd at the end of the protocol before decoding"},
        {"v_trunc", "0", "Largest sampled island count for Qp importance sampling (0 = all)"},
        {"confidence", "0.682689492137086", "Two-sided confidence level of reported intervals"},
        {"baseline", "identity", "Threshold baseline: identity (y = x) or per_step (1 - (1 - x)^steps)"},
        {"baseline_steps", "1", "Time steps of the per_step baseline"},
        {"out", "", "Output path (stdout when empty)"},
        {"Delta", "2", "Superconducting gap [K]"},
        {"T", "0.1", "Temperature [K]"},
        {"E_C", "1", "Island charging energy [K]"},
        {"tau0", "50", "Quasiparticle relaxation time scale [ns]"},
        {"gT0", "0", "Dot-island conductance, idle"},
        {"gT1", "1e-4", "Dot-island conductance, one-island measurement"},
        {"gT2", "1e-4", "Dot-island conductance, two-island measurement"},
        {"delta_dot", "0.5", "Dot level spacing [K]"},
        {"delta_is", "1e-3", "Island level spacing [K]"},
        {"g_isis", "1e-6", "Island-island conductance"},
        {"tau", "1000", "Time step [ns]"},
        {"tau_mst1", "100", "Unit signal-to-noise time, one-island measurement [ns]"},
        {"tau_mst2", "100", "Unit signal-to-noise time, two-island measurement [ns]"},
        {"S_EE_int", "0", "Integrated electric-field noise spectrum [1/ns^2]"},
        {"L_over_xi", "30", "Wire length over coherence length"},
    };
    return specs;
}

std::string trim(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
        return "";
    }
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string &key, const std::string &v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(x)) {
            throw std::invalid_argument(v);
        }
        return x;
    } catch (const std::exception &) {
        throw ConfigError(key, key + ": expected a number, got '" + v + "'");
    }
}

uint64_t to_uint(const std::string &key, const std::string &v) {
    try {
        if (v.empty() || v[0] == '-') {
            throw std::invalid_argument(v);
        }
        size_t pos = 0;
        unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) {
            // Allow integral values written in scientific notation.
            double dx = std::stod(v, &pos);
            if (pos != v.size() || dx < 0 || dx != std::floor(dx) || dx > 1.8e19) {
                throw std::invalid_argument(v);
            }
            return uint64_t(dx);
        }
        return x;
    } catch (const std::exception &) {
        throw ConfigError(key, key + ": expected a non-negative integer, got '" + v + "'");
    }
}

bool to_bool(const std::string &key, const std::string &v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    throw ConfigError(key, key + ": expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string &key, const std::string &v) {
    std::vector<double> out;
    if (v.empty()) {
        return out;
    }
    if (v.rfind("log:", 0) == 0) {
        std::vector<std::string> parts;
        std::stringstream ss(v.substr(4));
        std::string item;
        while (std::getline(ss, item, ':')) {
            parts.push_back(item);
        }
        if (parts.size() != 3) {
            throw ConfigError(key, key + ": expected log:lo:hi:n, got '" + v + "'");
        }
        double lo = to_double(key, parts[0]);
        double hi = to_double(key, parts[1]);
        uint64_t n = to_uint(key, parts[2]);
        if (!(lo > 0 && hi > lo) || n < 2) {
            throw ConfigError(key, key + ": log grid needs 0 < lo < hi and n >= 2");
        }
        for (uint64_t i = 0; i < n; i++) {
            out.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * double(i) / double(n - 1)));
        }
        return out;
    }
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(to_double(key, trim(item)));
    }
    return out;
}

template <class F>
auto as_config_error(const std::string &key, F f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw ConfigError(key, key + ": " + e.what());
    }
}

Json probs_json(const EventProbs &p) {
    auto arr = [](const std::array<double, 3> &a) {
        return Json::array({a[0], a[1], a[2]});
    };
    Json j;
    j["model"] = model_name(p.model);
    j["m"] = p.m;
    j["p"] = arr(p.p);
    j["p_qp"] = arr(p.p_qp);
    j["p_pair"] = arr(p.p_pair);
    j["p_odd"] = arr(p.p_odd);
    j["p_mst"] = arr(p.p_mst);
    j["p_cor_odd"] = p.p_cor_odd;
    j["p_cor_even"] = p.p_cor_even;
    j["p_hop"] = p.p_hop;
    j["p_relax_tree"] = p.p_relax_tree;
    j["p_stay_tree"] = p.p_stay_tree;
    j["p_relax_final"] = p.p_relax_final;
    return j;
}

Json params_json(const ModelParams &p) {
    Json j;
    j["model"] = model_name(p.model);
    j["m"] = p.m;
    j["p0"] = p.p0;
    j["p1"] = p.p1;
    j["p2"] = p.p2;
    j["r"] = p.r;
    j["q"] = p.q;
    j["p_mst1"] = p.p_mst1;
    j["p_mst2"] = p.p_mst2;
    j["p_pair_extra"] = p.p_pair_extra;
    return j;
}

Json config_json(const ExperimentConfig &cfg) {
    Json j = Json::object();
    for (const auto &kv : cfg.resolved) {
        j[kv.first] = kv.second;
    }
    return j;
}

std::string site_list(uint32_t mask) {
    std::string s;
    for (int a = 0; a < 4; a++) {
        if ((mask >> a) & 1) {
            s += char('1' + a);
        }
    }
    return s;
}

Json string_json(const MajoranaString &s) {
    Json j = Json::array();
    for (size_t i = 0; i < s.num_islands(); i++) {
        uint32_t m = s.island_mask(i);
        if (m) {
            j.push_back(Json{{"island", i}, {"sites", site_list(m)}});
        }
    }
    return j;
}

Json pair_json(const MeasuredPair &p) {
    return Json{
        {"gauge", p.gauge},
        {"island_a", p.island_a},
        {"island_b", p.island_b},
        {"sites_a", site_list(p.sites_a)},
        {"sites_b", site_list(p.sites_b)},
        {"connected",
         Json::array(
             {Json::array({p.connected[0].first + 1, p.connected[0].second + 1}),
              Json::array({p.connected[1].first + 1, p.connected[1].second + 1})})}};
}

Json layout_json(const CodeLayout &code) {
    Json j;
    j["d"] = code.d;
    j["layout"] = layout_name(code.layout);
    j["n_islands"] = code.n_islands;
    j["n_gauges"] = code.n_gauges;
    j["n_stabs"] = code.n_stabs;
    auto rows = [](const BitMatrix &m) {
        Json r = Json::array();
        for (size_t i = 0; i < m.num_rows(); i++) {
            r.push_back(m.row(i).str());
        }
        return r;
    };
    j["gauge_matrix"] = rows(code.gauge_matrix);
    j["stab_gauge_matrix"] = rows(code.stab_gauge_matrix);
    j["logical_matrix"] = rows(code.logical_matrix);
    j["x_correction_sites"] = site_list(code.x_rep);
    j["z_correction_sites"] = site_list(code.z_rep);
    Json gauges = Json::array();
    for (size_t g = 0; g < code.n_gauges; g++) {
        gauges.push_back(string_json(code.gauge_string(g)));
    }
    j["gauges"] = gauges;
    Json stabs = Json::array();
    for (size_t s = 0; s < code.n_stabs; s++) {
        Json members = Json::array();
        for (size_t g = 0; g < code.n_gauges; g++) {
            if (code.stab_gauge_matrix.row(s).get(g)) {
                members.push_back(g);
            }
        }
        stabs.push_back(members);
    }
    j["stabilizer_gauges"] = stabs;
    j["logical_x"] = string_json(code.logical_string(0));
    j["logical_z"] = string_json(code.logical_string(1));
    Json steps = Json::array();
    for (const auto &st : code.schedule) {
        Json pairs = Json::array();
        for (const auto &p : st.pairs) {
            pairs.push_back(pair_json(p));
        }
        Json stab_bits = Json::array();
        for (size_t s = 0; s < code.n_stabs; s++) {
            if ((st.stab_mask >> s) & 1) {
                stab_bits.push_back(s);
            }
        }
        steps.push_back(Json{{"pairs", pairs}, {"idle", st.idle}, {"completes_stabilizers", stab_bits}});
    }
    j["schedule"] = steps;
    return j;
}

Json threshold_json(const ThresholdResult &t) {
    Json j;
    j["bracketed"] = t.bracketed;
    if (t.bracketed) {
        j["p_th"] = t.p_th;
        j["uncertainty"] = t.uncertainty;
        j["low"] = t.low;
        j["high"] = t.high;
    } else {
        j["p_th"] = nullptr;
    }
    return j;
}

std::string output_path(const std::string &out) {
    if (out.empty() || out[0] == '/') {
        return out;
    }
    if (const char *dir = std::getenv("MZMQEC_OUT_DIR")) {
        if (*dir) {
            return std::string(dir) + "/" + out;
        }
    }
    return out;
}

void emit(const std::string &text, const std::string &out, std::ostream &stream) {
    std::string path = output_path(out);
    if (path.empty()) {
        stream << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open output file '" + path + "'");
    }
    f << text;
    if (!f) {
        throw std::runtime_error("failed writing output file '" + path + "'");
    }
}

void error_json(std::ostream &err, const std::string &category, const std::string &message, const std::string &key) {
    Json j;
    j["error"] = category;
    j["message"] = message;
    if (!key.empty()) {
        j["key"] = key;
    }
    err << j.dump() << "\n";
}

struct Thresholds {
    Json json = Json::array();
    bool all_bracketed = true;
};

Thresholds thresholds_of(const std::vector<ErrRateCurve> &curves, const ExperimentConfig &cfg) {
    Thresholds t;
    for (const auto &c : curves) {
        ThresholdResult th = pseudo_threshold(c, cfg.baseline, cfg.baseline_steps);
        t.all_bracketed = t.all_bracketed && th.bracketed;
        Json j = threshold_json(th);
        if (!c.swept.empty()) {
            j[c.swept] = c.swept_value;
        }
        t.json.push_back(j);
    }
    return t;
}

}  // namespace

const std::vector<std::string> &config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto &s : key_specs()) {
            k.push_back(s.name);
        }
        return k;
    }();
    return keys;
}

ConfigMap parse_config_text(const std::string &text) {
    std::vector<std::string> lines;
    {
        std::stringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) {
            lines.push_back(line);
        }
    }
    const std::string embedded = "#config ";
    bool only_embedded = false;
    for (const auto &l : lines) {
        if (l.rfind(embedded, 0) == 0) {
            only_embedded = true;
        }
    }
    ConfigMap out;
    for (size_t i = 0; i < lines.size(); i++) {
        std::string line = lines[i];
        if (only_embedded) {
            if (line.rfind(embedded, 0) != 0) {
                continue;
            }
            line = line.substr(embedded.size());
        }
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("", "line " + std::to_string(i + 1) + ": expected key=value, got '" + line + "'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        bool known = false;
        for (const auto &k : config_keys()) {
            known = known || k == key;
        }
        if (!known) {
            throw ConfigError(key, "unknown config key '" + key + "'");
        }
        out[key] = value;
    }
    return out;
}

ConfigMap load_config_file(const std::string &name) {
    for (const std::string &path : {name, name + ".conf", "configs/" + name + ".conf"}) {
        std::ifstream f(path);
        if (f) {
            std::stringstream ss;
            ss << f.rdbuf();
            return parse_config_text(ss.str());
        }
    }
    throw ConfigError("config", "cannot read config file '" + name + "'");
}

ExperimentConfig resolve_config(const ConfigMap &values) {
    ConfigMap v;
    for (const auto &s : key_specs()) {
        v[s.name] = s.default_value;
    }
    for (const auto &kv : values) {
        if (!v.count(kv.first)) {
            throw ConfigError(kv.first, "unknown config key '" + kv.first + "'");
        }
        v[kv.first] = kv.second;
    }
    if (!v["p_mst"].empty()) {
        if (values.count("p_mst1") || values.count("p_mst2")) {
            throw ConfigError("p_mst", "p_mst cannot be combined with p_mst1 or p_mst2");
        }
        v["p_mst1"] = v["p_mst"];
        v["p_mst2"] = v["p_mst"];
    }
    v.erase("p_mst");

    ExperimentConfig c;
    ModelParams &p = c.params;
    p.model = as_config_error("model", [&] { return parse_model(v["model"]); });
    c.d = to_uint("d", v["d"]);
    c.layout = as_config_error("layout", [&] { return parse_layout(v["layout"]); });
    p.m = to_uint("m", v["m"]);
    p.p0 = to_double("p0", v["p0"]);
    p.p1 = to_double("p1", v["p1"]);
    p.p2 = to_double("p2", v["p2"]);
    p.r = to_double("r", v["r"]);
    p.q = to_double("q", v["q"]);
    p.p_mst1 = to_double("p_mst1", v["p_mst1"]);
    p.p_mst2 = to_double("p_mst2", v["p_mst2"]);
    p.p_pair_extra = to_double("p_pair_extra", v["p_pair_extra"]);
    c.x_axis = as_config_error("x_axis", [&] { return parse_x_axis(v["x_axis"]); });
    c.xs = to_list("xs", v["xs"]);
    c.swept = v["swept"];
    c.values = to_list("values", v["values"]);
    c.p1_ratio = to_double("p1_ratio", v["p1_ratio"]);
    c.p2_ratio = to_double("p2_ratio", v["p2_ratio"]);
    c.budget.max_trials = to_uint("trials", v["trials"]);
    c.budget.fail_target = to_uint("fail_target", v["fail_target"]);
    c.seed = to_uint("seed", v["seed"]);
    c.opts.workers = to_uint("workers", v["workers"]);
    c.opts.batch_size = to_uint("batch_size", v["batch_size"]);
    c.importance = to_bool("importance", v["importance"]);
    c.opts.final_relax = to_bool("final_relax", v["final_relax"]);
    c.v_trunc = to_uint("v_trunc", v["v_trunc"]);
    c.confidence = to_double("confidence", v["confidence"]);
    if (v["baseline"] == "identity") {
        c.baseline = Baseline::Identity;
    } else if (v["baseline"] == "per_step") {
        c.baseline = Baseline::PerStep;
    } else {
        throw ConfigError("baseline", "baseline: expected identity or per_step, got '" + v["baseline"] + "'");
    }
    c.baseline_steps = to_uint("baseline_steps", v["baseline_steps"]);
    c.out = v["out"];

    DeviceParams &dp = c.device;
    dp.Delta = to_double("Delta", v["Delta"]);
    dp.T = to_double("T", v["T"]);
    dp.E_C = to_double("E_C", v["E_C"]);
    dp.tau0 = to_double("tau0", v["tau0"]);
    dp.gT = {to_double("gT0", v["gT0"]), to_double("gT1", v["gT1"]), to_double("gT2", v["gT2"])};
    dp.delta_dot = to_double("delta_dot", v["delta_dot"]);
    dp.delta_is = to_double("delta_is", v["delta_is"]);
    dp.g_isis = to_double("g_isis", v["g_isis"]);
    dp.tau = to_double("tau", v["tau"]);
    dp.tau_mst = {1.0, to_double("tau_mst1", v["tau_mst1"]), to_double("tau_mst2", v["tau_mst2"])};
    dp.S_EE_int = to_double("S_EE_int", v["S_EE_int"]);
    dp.L_over_xi = to_double("L_over_xi", v["L_over_xi"]);
    dp.m = p.m;

    if (c.d < 3 || c.d > 31 || c.d % 2 == 0) {
        throw ConfigError("d", "d: expected an odd distance between 3 and 31");
    }
    if (c.budget.max_trials == 0) {
        throw ConfigError("trials", "trials: must be positive");
    }
    if (c.opts.batch_size == 0) {
        throw ConfigError("batch_size", "batch_size: must be positive");
    }
    if (!(c.confidence > 0 && c.confidence < 1)) {
        throw ConfigError("confidence", "confidence: must be in (0, 1)");
    }
    if (c.baseline_steps == 0) {
        throw ConfigError("baseline_steps", "baseline_steps: must be positive");
    }
    if (!c.swept.empty() && c.swept != "r" && c.swept != "q" && c.swept != "p_mst" && c.swept != "p2_ratio") {
        throw ConfigError("swept", "swept: expected r, q, p_mst or p2_ratio, got '" + c.swept + "'");
    }
    for (size_t i = 1; i < c.xs.size(); i++) {
        if (!(c.xs[i] > c.xs[i - 1])) {
            throw ConfigError("xs", "xs: values must be strictly increasing");
        }
    }
    // Model invariants, checked at the base point and at every sweep point.
    as_config_error("model", [&] {
        derive_event_probs(p);
        return 0;
    });
    SweepPlan plan = sweep_plan(c);
    std::vector<double> vals = c.swept.empty() || c.values.empty() ? std::vector<double>{0.0} : c.values;
    for (double sv : vals) {
        for (double x : c.xs) {
            try {
                derive_event_probs(params_at(plan, x, sv));
            } catch (const std::invalid_argument &e) {
                throw ConfigError("xs", std::string("sweep point x=") + format_double(x) + ": " + e.what());
            }
        }
    }

    // Neither key changes the results, so they stay out of embedded configs.
    v.erase("workers");
    v.erase("out");
    c.resolved = v;
    return c;
}

SweepPlan sweep_plan(const ExperimentConfig &cfg) {
    SweepPlan plan;
    plan.base = cfg.params;
    plan.d = cfg.d;
    plan.layout = cfg.layout;
    plan.x_axis = cfg.x_axis;
    plan.xs = cfg.xs;
    plan.swept = cfg.swept;
    plan.values = cfg.values;
    plan.p1_ratio = cfg.p1_ratio;
    plan.p2_ratio = cfg.p2_ratio;
    plan.budget = cfg.budget;
    plan.importance = cfg.importance;
    plan.v_trunc = cfg.v_trunc;
    plan.seed = cfg.seed;
    plan.opts = cfg.opts;
    plan.confidence = cfg.confidence;
    return plan;
}

std::string embedded_config(const ExperimentConfig &cfg) {
    std::string s;
    for (const auto &kv : cfg.resolved) {
        s += "#config " + kv.first + "=" + kv.second + "\n";
    }
    return s;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Monte Carlo simulator for Majorana-based Bacon-Shor codes", "mzmqec"};
    app.require_subcommand(1);

    std::string config_path;
    std::map<std::string, std::vector<std::string>> flag_values;
    const std::vector<std::pair<const char *, const char *>> commands = {
        {"derive-probs", "Print the derived event probabilities as JSON"},
        {"rates", "Convert physical device parameters into noise parameters"},
        {"sweep", "Run a parameter sweep and write CSV"},
        {"threshold", "Run a sweep and report pseudo-thresholds as JSON"},
        {"ft-check", "Exhaustive single-fault fault-tolerance check"},
        {"dump-layout", "Print the code layout and schedule as JSON"},
    };
    std::map<std::string, CLI::App *> subs;
    for (const auto &cmd : commands) {
        CLI::App *sub = app.add_subcommand(cmd.first, cmd.second);
        sub->add_option("--config", config_path, "Flat key=value config file");
        for (const auto &spec : key_specs()) {
            auto *opt = sub->add_option(std::string("--") + spec.name, flag_values[spec.name], spec.help);
            if (std::string(spec.name) == "importance") {
                opt->expected(0, 1);
            } else {
                opt->expected(1);
            }
        }
        subs[cmd.first] = sub;
    }
    // The CLI11 entry point wants reversed arguments without the program name.
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        error_json(err, "invalid_config", e.what(), "");
        return kExitInvalidConfig;
    }

    try {
        ConfigMap values;
        if (!config_path.empty()) {
            values = load_config_file(config_path);
        }
        for (const auto &spec : key_specs()) {
            auto *sub = app.get_subcommands().front();
            if (sub->count(std::string("--") + spec.name)) {
                const auto &vals = flag_values[spec.name];
                values[spec.name] = vals.empty() || vals.back().empty() ? "true" : vals.back();
            }
        }
        std::string which = app.get_subcommands().front()->get_name();
        if (which == "derive-probs" && !values.count("model")) {
            values["model"] = "MC";
        }
        // Device rates describe the measurement-aware model unless told otherwise.
        if (which == "rates" && !values.count("model")) {
            values["model"] = "PMC";
        }
        ExperimentConfig cfg = resolve_config(values);

        if (which == "derive-probs") {
            Json j;
            j["config"] = config_json(cfg);
            j["probs"] = probs_json(derive_event_probs(cfg.params));
            emit(j.dump(2) + "\n", cfg.out, out);
            return kExitOk;
        }
        if (which == "rates") {
            DerivedModel dm = model_params_from_rates(cfg.device, cfg.params.model);
            Json j;
            j["config"] = config_json(cfg);
            j["params"] = params_json(dm.params);
            j["r_k"] = Json::array({dm.r_k[0], dm.r_k[1], dm.r_k[2]});
            j["hybridization_rate"] = dm.hybridization_rate;
            j["warnings"] = dm.warnings;
            emit(j.dump(2) + "\n", cfg.out, out);
            return kExitOk;
        }
        if (which == "dump-layout") {
            Json j;
            j["config"] = config_json(cfg);
            j["code"] = layout_json(build_code(cfg.d, cfg.layout));
            emit(j.dump(2) + "\n", cfg.out, out);
            return kExitOk;
        }
        if (which == "ft-check") {
            FtReport rep = ft_check(build_code(cfg.d, cfg.layout), cfg.params.model);
            Json j;
            j["config"] = config_json(cfg);
            j["passed"] = rep.passed();
            j["fault_realizations"] = rep.fault_realizations;
            j["initial_errors"] = rep.initial_errors;
            j["ec_b_weight"] = rep.ec_b_weight;
            j["violations"] = rep.violations;
            emit(j.dump(2) + "\n", cfg.out, out);
            return rep.passed() ? kExitOk : kExitFtViolation;
        }
        if (cfg.xs.empty()) {
            throw ConfigError("xs", "xs: a sweep needs at least one point");
        }
        SweepPlan plan = sweep_plan(cfg);
        std::vector<ErrRateCurve> curves = sweep(plan);
        Thresholds th = thresholds_of(curves, cfg);
        if (which == "sweep") {
            emit(embedded_config(cfg) + curves_to_csv(curves, plan), cfg.out, out);
            if (!cfg.out.empty()) {
                Json j;
                j["config"] = config_json(cfg);
                j["thresholds"] = th.json;
                out << j.dump(2) << "\n";
            }
            return kExitOk;
        }
        Json j;
        j["config"] = config_json(cfg);
        j["thresholds"] = th.json;
        Json pts = Json::array();
        for (const auto &c : curves) {
            for (const auto &p : c.points) {
                Json pj{{"x", p.x}, {"p_err", p.p_err}, {"ci_low", p.ci_low}, {"ci_high", p.ci_high},
                        {"n_trials", p.stats.n_trials}, {"n_fail", p.stats.n_fail}, {"seed", p.stats.seed}};
                if (!c.swept.empty()) {
                    pj[c.swept] = c.swept_value;
                }
                pts.push_back(pj);
            }
        }
        j["points"] = pts;
        emit(j.dump(2) + "\n", cfg.out, out);
        if (!th.all_bracketed) {
            error_json(err, "unbracketed", "no pseudo-threshold crossing inside the sweep range", "xs");
            return kExitUnbracketed;
        }
        return kExitOk;
    } catch (const ConfigError &e) {
        error_json(err, "invalid_config", e.what(), e.key());
        return kExitInvalidConfig;
    } catch (const std::invalid_argument &e) {
        error_json(err, "invalid_config", e.what(), "");
        return kExitInvalidConfig;
    } catch (const std::exception &e) {
        error_json(err, "runtime", e.what(), "");
        return kExitRuntime;
    }
}

int run_cli(int argc, const char *const *argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; i++) {
        args.push_back(argv[i]);
    }
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace mzmqec
