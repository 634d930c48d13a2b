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

// Acceptance checks. Prints one PASS/FAIL line per numbered criterion, plus
// lines marked "supplementary" that never affect the exit code.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mzmqec/analysis.h"
#include "mzmqec/bacon_shor.h"
#include "mzmqec/cli.h"
#include "mzmqec/engine.h"
#include "mzmqec/noise.h"

using namespace mzmqec;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

std::string g3(double v) {
    return fmt("%.3g", v);
}

std::vector<double> log_grid(double lo, double hi, size_t n) {
    std::vector<double> xs(n);
    for (size_t i = 0; i < n; i++) {
        xs[i] = lo * std::pow(hi / lo, double(i) / double(n - 1));
    }
    return xs;
}

SweepPlan plan_for(ModelKind model, LayoutKind layout, std::vector<double> xs, uint64_t trials, bool importance) {
    SweepPlan plan;
    plan.base.model = model;
    plan.layout = layout;
    plan.xs = std::move(xs);
    plan.budget.max_trials = trials;
    plan.importance = importance;
    plan.seed = 20260101;
    return plan;
}

/// Half width of the one-sigma interval of a point.
double sigma_of(const CurvePoint &p) {
    return (p.ci_high - p.ci_low) / 2;
}

double min_effective(const ErrRateCurve &c) {
    double m = INFINITY;
    for (const auto &p : c.points) {
        m = std::min(m, p.stats.effective_trials());
    }
    return m;
}

bool above_everywhere(const ErrRateCurve &c) {
    for (const auto &p : c.points) {
        if (p.p_err <= p.x) {
            return false;
        }
    }
    return true;
}

std::string describe(const ThresholdResult &t) {
    if (!t.bracketed) {
        return "unbracketed";
    }
    return g3(t.p_th) + "+-" + fmt("%.2g", t.uncertainty);
}

bool within_rel(double v, double target, double rel) {
    return std::abs(v - target) <= rel * target;
}

// 1. Qp pseudo-threshold.
Verdict criterion_1() {
    SweepPlan plan = plan_for(ModelKind::Qp, LayoutKind::Standard, log_grid(0.05, 0.15, 9), 100000, false);
    plan.base.r = 0.1;
    auto curves = sweep(plan);
    ThresholdResult t = pseudo_threshold(curves[0]);
    Verdict v;
    v.pass = t.bracketed && std::abs(t.p_th - 0.09) <= 0.015;
    v.detail = "Qp p_th = " + describe(t) + " (target 0.09 +- 0.015, 1e5 trials/point)";
    return v;
}

// 2. QpBf over r.
Verdict criterion_2() {
    SweepPlan plan = plan_for(ModelKind::QpBf, LayoutKind::Standard, log_grid(0.004, 0.02, 9), 150000, true);
    plan.base.p_mst1 = plan.base.p_mst2 = 1e-4;
    plan.swept = "r";
    plan.values = {0.0, 0.1, 1.0 / 3.0};
    auto curves = sweep(plan);
    Verdict v{true, "QpBf p_th(r=0,1/10,1/3) ="};
    std::vector<ThresholdResult> ts;
    for (const auto &c : curves) {
        ThresholdResult t = pseudo_threshold(c);
        ts.push_back(t);
        v.detail += " " + describe(t);
        v.pass = v.pass && t.bracketed && within_rel(t.p_th, 8e-3, 0.3);
    }
    double worst = 0;
    for (size_t i = 0; i < ts.size(); i++) {
        for (size_t j = i + 1; j < ts.size(); j++) {
            double s = std::hypot(ts[i].uncertainty, ts[j].uncertainty);
            double z = s > 0 ? std::abs(ts[i].p_th - ts[j].p_th) / s : 0;
            worst = std::max(worst, z);
        }
    }
    v.pass = v.pass && worst <= 3;
    v.detail += " (target 8e-3 +- 30%, pairwise spread <= 3 sigma; worst " + fmt("%.2f", worst) + " sigma)";
    return v;
}

// 3. QpBf over p_mst.
Verdict criterion_3() {
    SweepPlan plan = plan_for(ModelKind::QpBf, LayoutKind::Standard, log_grid(0.001, 0.03, 12), 150000, true);
    plan.base.r = 0.1;
    plan.swept = "p_mst";
    plan.values = {1e-4, 1e-3, 1e-2, 0.08};
    auto curves = sweep(plan);
    std::vector<ThresholdResult> ts;
    Verdict v{true, "QpBf p_th(p_mst=1e-4,1e-3,1e-2,0.08) ="};
    for (const auto &c : curves) {
        ts.push_back(pseudo_threshold(c));
        v.detail += " " + describe(ts.back());
        if (!ts.back().bracketed && above_everywhere(c)) {
            v.detail += "(<" + g3(c.points.front().x) + ")";
        }
    }
    bool flat = ts[0].bracketed;
    for (size_t i = 1; i < 3 && flat; i++) {
        flat = ts[i].bracketed && within_rel(ts[i].p_th, ts[0].p_th, 0.3);
    }
    // An unbracketed curve lying above the baseline everywhere has its
    // threshold below the lowest sampled x.
    double last = ts[3].bracketed ? ts[3].p_th : (above_everywhere(curves[3]) ? curves[3].points.front().x : INFINITY);
    bool drop = ts[0].bracketed && last <= 0.5 * ts[0].p_th;
    v.pass = flat && drop;
    v.detail += std::string(" (flat within 30% over [1e-4, 1e-2]: ") + (flat ? "yes" : "no") +
                "; drop to <= half at 0.08: " + (drop ? "yes" : "no") + ")";
    return v;
}

struct McRow {
    double q;
    double target;
    ThresholdResult t;
    double min_eff;
};

std::vector<double> mc_grid() {
    return log_grid(5e-5, 2e-3, 12);
}

ErrRateCurve mc_curve(ModelKind model, LayoutKind layout, double q, uint64_t trials, bool final_relax) {
    SweepPlan plan = plan_for(model, layout, mc_grid(), trials, true);
    plan.base.r = 0.1;
    plan.base.q = q;
    plan.base.p_mst1 = plan.base.p_mst2 = 1e-4;
    plan.opts.final_relax = final_relax;
    return sweep(plan)[0];
}

const std::vector<std::pair<double, double>> kMcTargets = {{0.0, 9.8e-4}, {0.1, 6.5e-4}, {0.5, 4.5e-4}, {1.0, 1.2e-4}};

std::vector<McRow> mc_rows;

// 4. MC over q, escalating the trial count once for any point out of range.
Verdict criterion_4() {
    Verdict v{true, "MC p_th(q) ="};
    for (const auto &[q, target] : kMcTargets) {
        ErrRateCurve c = mc_curve(ModelKind::MC, LayoutKind::Standard, q, 1000000, false);
        ThresholdResult t = pseudo_threshold(c);
        double eff = min_effective(c);
        if (!t.bracketed || !within_rel(t.p_th, target, 0.3)) {
            c = mc_curve(ModelKind::MC, LayoutKind::Standard, q, 4000000, false);
            t = pseudo_threshold(c);
            eff = min_effective(c);
        }
        mc_rows.push_back({q, target, t, eff});
        bool ok = t.bracketed && within_rel(t.p_th, target, 0.3) && eff >= 1e6;
        v.pass = v.pass && ok;
        v.detail += " q=" + g3(q) + ":" + describe(t) + "[" + g3(target) + (ok ? " ok" : " off") + ", eff>=" +
                    g3(eff) + "]";
    }
    v.detail += " (each +- 30%)";
    return v;
}

Verdict compare_with_mc(ModelKind model, LayoutKind layout, bool final_relax, const std::string &label) {
    Verdict v{true, label};
    double worst = 0;
    for (const McRow &row : mc_rows) {
        ErrRateCurve c = mc_curve(model, layout, row.q, 1000000, final_relax);
        ThresholdResult t = pseudo_threshold(c);
        v.detail += " q=" + g3(row.q) + ":" + describe(t);
        if (!t.bracketed || !row.t.bracketed) {
            v.pass = false;
            continue;
        }
        double s = std::hypot(t.uncertainty, row.t.uncertainty);
        double z = std::abs(t.p_th - row.t.p_th) / s;
        worst = std::max(worst, z);
        v.detail += "(" + fmt("%.1f", z) + " sigma)";
    }
    v.pass = v.pass && worst <= 3;
    v.detail += " (agreement with MC within 3 combined sigma)";
    return v;
}

// 5. PMC on its geometric layout against MC.
Verdict criterion_5() {
    return compare_with_mc(ModelKind::PMC, LayoutKind::Geometric, false, "PMC geometric p_th(q) =");
}

// 6. QpBf at p_mst = 0 against Qp at four times the noise.
Verdict criterion_6() {
    std::vector<double> xs = {0.0025, 0.005, 0.01};
    SweepPlan bf = plan_for(ModelKind::QpBf, LayoutKind::Standard, xs, 150000, false);
    bf.base.r = 0.1;
    bf.base.p_mst1 = bf.base.p_mst2 = 0;
    std::vector<double> xs4;
    for (double x : xs) {
        xs4.push_back(4 * x);
    }
    SweepPlan qp = plan_for(ModelKind::Qp, LayoutKind::Standard, xs4, 100000, false);
    qp.base.r = 0.1;
    auto a = sweep(bf)[0];
    auto b = sweep(qp)[0];
    Verdict v{true, "QpBf(p0) vs Qp(4 p0):"};
    for (size_t i = 0; i < xs.size(); i++) {
        double s = std::hypot(sigma_of(a.points[i]), sigma_of(b.points[i]));
        double z = std::abs(a.points[i].p_err - b.points[i].p_err) / s;
        v.pass = v.pass && z <= 3;
        v.detail += " p0=" + g3(xs[i]) + ": " + g3(a.points[i].p_err) + " vs " + g3(b.points[i].p_err) + " (" +
                    fmt("%.1f", z) + " sigma)";
    }
    v.detail += " (each within 3 sigma)";
    return v;
}

MajoranaString xs_on(const CodeLayout &code, const std::vector<std::pair<size_t, size_t>> &cells) {
    MajoranaString s = code.zero_string();
    for (const auto &[r, c] : cells) {
        s = xor_accumulate(s, pauli_string(code, code.island(r, c), 'X'));
    }
    return s;
}

bool fails_after_decode(const MajoranaString &e, const CodeLayout &code) {
    return is_logical_failure(xor_accumulate(e, decode_syndrome(syndrome_of(e, code), code)), code);
}

size_t weight_two_failures(const CodeLayout &code, size_t *checked) {
    const char ps[3] = {'X', 'Y', 'Z'};
    size_t bad = 0;
    for (size_t a = 0; a < code.n_islands; a++) {
        for (char pa : ps) {
            MajoranaString ea = pauli_string(code, a, pa);
            bad += fails_after_decode(ea, code);
            (*checked)++;
            for (size_t b = a + 1; b < code.n_islands; b++) {
                for (char pb : ps) {
                    bad += fails_after_decode(xor_accumulate(ea, pauli_string(code, b, pb)), code);
                    (*checked)++;
                }
            }
        }
    }
    return bad;
}

// 7. Decoder: weight <= 2 corrected, weight-3 same-row X errors fail.
Verdict criterion_7() {
    CodeLayout code = build_code(5, LayoutKind::Standard);
    size_t checked = 0;
    size_t bad = weight_two_failures(code, &checked);
    size_t same_row = 0, same_row_fail = 0;
    for (size_t r = 0; r < 5; r++) {
        for (size_t a = 0; a < 5; a++) {
            for (size_t b = a + 1; b < 5; b++) {
                for (size_t c = b + 1; c < 5; c++) {
                    same_row++;
                    same_row_fail += fails_after_decode(xs_on(code, {{r, a}, {r, b}, {r, c}}), code);
                }
            }
        }
    }
    Verdict v;
    v.pass = bad == 0 && same_row_fail == same_row;
    v.detail = "weight<=2 Paulis: " + std::to_string(checked - bad) + "/" + std::to_string(checked) +
               " corrected; weight-3 same-row X: " + std::to_string(same_row_fail) + "/" + std::to_string(same_row) +
               " fail (all required)";
    return v;
}

Verdict criterion_7_distinct_rows() {
    CodeLayout code = build_code(5, LayoutKind::Standard);
    size_t n = 0, fail = 0;
    for (size_t r0 = 0; r0 < 5; r0++) {
        for (size_t r1 = r0 + 1; r1 < 5; r1++) {
            for (size_t r2 = r1 + 1; r2 < 5; r2++) {
                for (size_t c = 0; c < 125; c++) {
                    n++;
                    fail += fails_after_decode(xs_on(code, {{r0, c % 5}, {r1, c / 5 % 5}, {r2, c / 25}}), code);
                }
            }
        }
    }
    return {fail == n, "weight-3 X errors on three distinct rows: " + std::to_string(fail) + "/" +
                           std::to_string(n) + " fail (all required)"};
}

// 8. Exhaustive single-fault check.
Verdict criterion_8() {
    Verdict v{true, "ft_check d=5:"};
    const std::vector<std::pair<ModelKind, LayoutKind>> cases = {
        {ModelKind::QpBf, LayoutKind::Standard},
        {ModelKind::MC, LayoutKind::Standard},
        {ModelKind::PMC, LayoutKind::Geometric},
        {ModelKind::PMC, LayoutKind::Standard},
    };
    for (const auto &[model, layout] : cases) {
        FtReport r = ft_check(build_code(5, layout), model);
        v.pass = v.pass && r.passed();
        v.detail += " " + model_name(model) + "/" + layout_name(layout) + " " +
                    std::to_string(r.fault_realizations) + " realizations, EC B weight<=" +
                    std::to_string(r.ec_b_weight) + " on " + std::to_string(r.initial_errors) + " inputs, " +
                    std::to_string(r.violations.size()) + " violations;";
    }
    return v;
}

// 9. Sampler class frequencies and the even-parity table.
Verdict criterion_9() {
    CodeLayout code = build_code(5, LayoutKind::Standard);
    struct Case {
        ModelKind model;
        bool odd;
        uint8_t k;
    };
    const std::vector<Case> cases = {
        {ModelKind::Qp, false, 0}, {ModelKind::Qp, true, 0}, {ModelKind::MC, false, 2}, {ModelKind::MC, true, 2}};
    const uint64_t draws = 1000000;
    double worst = 0;
    Rng rng(99);
    for (const Case &cs : cases) {
        ModelParams p;
        p.model = cs.model;
        p.p0 = p.p1 = p.p2 = 0.06;
        p.r = 0.3;
        EventProbs e = derive_event_probs(p);
        auto dist = single_island_distribution(e, cs.odd, cs.k);
        TimeStepContext ctx = cs.k == 0 ? idle_context(code) : schedule_context(code, 0);
        std::vector<size_t> islands;
        for (size_t j = 0; j < code.n_islands; j++) {
            if (ctx.k[j] == cs.k) {
                islands.push_back(j);
            }
        }
        std::array<uint64_t, 8> hits{};
        uint64_t n = 0;
        while (n < draws) {
            IslandParities par(code.n_islands);
            MajoranaString s = code.zero_string();
            if (cs.odd) {
                for (size_t j = 0; j < code.n_islands; j++) {
                    par.toggle(j);
                }
                s = step0_relax(par, ctx, e, rng);
            }
            s = xor_accumulate(s, step1_events(ctx, e, rng));
            for (size_t j : islands) {
                if (n < draws) {
                    hits[island_class(s.island_mask(j))]++;
                    n++;
                }
            }
        }
        for (size_t c = 0; c < 8; c++) {
            double sd = std::sqrt(double(n) * dist[c] * (1 - dist[c]));
            double dev = std::abs(double(hits[c]) - double(n) * dist[c]);
            worst = std::max(worst, sd > 0 ? dev / sd : (dev > 0 ? INFINITY : 0.0));
        }
    }
    double table_err = 0;
    for (double pp : {0.01, 0.05, 0.2}) {
        for (double r : {0.0, 0.1, 0.5, 1.0}) {
            ModelParams p;
            p.model = ModelKind::Qp;
            p.p0 = pp;
            p.r = r;
            EventProbs e = derive_event_probs(p);
            auto d = single_island_distribution(e, false, 0);
            std::array<double, 8> table = {1 - e.p_qp[0] - 0.75 * e.p_pair[0]};
            for (size_t c = 1; c <= 4; c++) {
                table[c] = e.p_qp[0] / 4;
            }
            for (size_t c = 5; c <= 7; c++) {
                table[c] = e.p_pair[0] / 4;
            }
            for (size_t c = 0; c < 8; c++) {
                table_err = std::max(table_err, std::abs(d[c] - table[c]));
            }
        }
    }
    Verdict v;
    v.pass = worst <= 4 && table_err <= 1e-15;
    v.detail = "largest class deviation " + fmt("%.2f", worst) + " sigma over 4 contexts x 1e6 draws (<= 4); " +
               "even column vs table max |diff| " + g3(table_err) + " (<= 1e-15, rounding only)";
    return v;
}

// 10. Exact reductions to qubit noise.
Verdict criterion_10() {
    double err = 0;
    bool structure = true;
    CodeLayout code = build_code(5, LayoutKind::Standard);
    for (double q : {0.0, 0.3, 1.0}) {
        ModelParams p;
        p.model = ModelKind::MC;
        p.p0 = p.p1 = p.p2 = 0.04;
        p.r = 0;
        p.q = q;
        EventProbs e = derive_event_probs(p);
        // With r = 0 no island ever becomes odd, so only the even column matters.
        for (uint8_t k : {uint8_t{0}, uint8_t{2}}) {
            auto d = single_island_distribution(e, false, k);
            err = std::max(err, std::abs(d[0] - (1 - 0.75 * e.p_pair[k])));
            for (size_t c = 1; c <= 4; c++) {
                err = std::max(err, d[c]);
            }
            for (size_t c = 5; c <= 7; c++) {
                err = std::max(err, std::abs(d[c] - e.p_pair[k] / 4));
            }
        }
        EventMenu m = correlated_menu(e, code.schedule[0].pairs[0]);
        std::map<std::pair<size_t, size_t>, double> classes;
        for (size_t i = 0; i < m.size(); i++) {
            size_t a = island_class(m.mask_a[i]), b = island_class(m.mask_b[i]);
            structure = structure && (a == 0 || a >= 5) && (b == 0 || b >= 5);
            classes[{a, b}] += m.weight(i);
        }
        structure = structure && (q == 0 ? classes.empty() : classes.size() == 15);
        for (const auto &kv : classes) {
            err = std::max(err, std::abs(kv.second - e.p_cor_even / 16));
        }
    }
    for (double pp : {0.01, 0.1}) {
        ModelParams p;
        p.model = ModelKind::Qp;
        p.p0 = pp;
        p.r = 0;
        EventProbs e = derive_event_probs(p);
        auto d = single_island_distribution(e, false, 0);
        err = std::max(err, std::abs(d[0] - (1 - 0.75 * pp)));
        for (size_t c = 1; c <= 4; c++) {
            err = std::max(err, d[c]);
        }
        for (size_t c = 5; c <= 7; c++) {
            err = std::max(err, std::abs(d[c] - pp / 4));
        }
    }
    Verdict v;
    v.pass = structure && err <= 1e-15;
    v.detail = std::string("MC(r=0) and Qp(p_qp=0) class distributions vs Pauli noise: max |diff| ") + g3(err) +
               " (<= 1e-15), correlated events uniform over the 15 two-qubit Paulis: " + (structure ? "yes" : "no");
    return v;
}

std::string slurp(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
}

// 11. CSV bytes do not depend on the worker count.
Verdict criterion_11() {
    auto dir = std::filesystem::temp_directory_path();
    std::vector<std::string> files;
    for (const char *w : {"1", "2", "5"}) {
        std::string path = (dir / (std::string("mzmqec_acceptance_w") + w + ".csv")).string();
        std::ostringstream out, err;
        int code = run_cli(
            {"sweep", "--model", "MC", "--xs", "0.001,0.002", "--swept", "q", "--values", "0,0.5", "--r", "0.1",
             "--p_mst", "1e-3", "--trials", "20000", "--importance", "--batch_size", "700", "--seed", "11",
             "--workers", w, "--out", path},
            out, err);
        if (code != 0) {
            return {false, "sweep failed: " + err.str()};
        }
        files.push_back(slurp(path));
        std::filesystem::remove(path);
    }
    bool same = !files[0].empty() && files[0] == files[1] && files[0] == files[2];
    return {same, "MC sweep CSV with 1, 2 and 5 workers: " + std::string(same ? "byte-identical" : "differs") +
                      " (" + std::to_string(files[0].size()) + " bytes)"};
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Acceptance checks"};
    std::vector<int> only;
    app.add_option("--only", only, "Run only these criteria")->delimiter(',');
    CLI11_PARSE(app, argc, argv);
    auto selected = [&](int id) {
        return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
    };

    struct Entry {
        int id;
        std::string name;
        std::function<Verdict()> run;
        bool supplementary;
    };
    const std::vector<Entry> entries = {
        {1, "1", criterion_1, false},
        {2, "2", criterion_2, false},
        {3, "3", criterion_3, false},
        {4, "4", criterion_4, false},
        {5, "5", criterion_5, false},
        {5, "5 (supplementary: leftover excitations relaxed)",
         [] {
             return compare_with_mc(
                 ModelKind::PMC, LayoutKind::Geometric, true, "PMC geometric, final relaxation, p_th(q) =");
         },
         true},
        {5, "5 (supplementary: standard layout)",
         [] {
             return compare_with_mc(ModelKind::PMC, LayoutKind::Standard, false, "PMC standard p_th(q) =");
         },
         true},
        {6, "6", criterion_6, false},
        {7, "7", criterion_7, false},
        {7, "7 (supplementary: distinct rows)", criterion_7_distinct_rows, true},
        {8, "8", criterion_8, false},
        {9, "9", criterion_9, false},
        {10, "10", criterion_10, false},
        {11, "11", criterion_11, false},
    };
    int failed = 0;
    for (const Entry &e : entries) {
        if (!selected(e.id)) {
            continue;
        }
        if (e.id == 5 && mc_rows.empty()) {
            criterion_4();
        }
        auto start = std::chrono::steady_clock::now();
        Verdict v = e.run();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf(
            "%s criterion %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", e.name.c_str(), v.detail.c_str(), secs);
        std::fflush(stdout);
        if (!v.pass && !e.supplementary) {
            failed++;
        }
    }
    std::printf("%d primary criteria failed\n", failed);
    return failed ? 1 : 0;
}
