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


#include "mzmqec/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "mzmqec/rng.h"

namespace mzmqec {

namespace {

double z_for(double confidence) {
    if (!(confidence > 0 && confidence < 1)) {
        throw std::invalid_argument("confidence must be in (0, 1)");
    }
    boost::math::normal_distribution<double> normal;
    return boost::math::quantile(normal, 0.5 + confidence / 2);
}

double clamp01(double v) {
    return std::min(1.0, std::max(0.0, v));
}

}  // namespace

Interval wilson_interval(uint64_t k, uint64_t n, double confidence) {
    if (n == 0) {
        throw std::invalid_argument("n_trials must be positive");
    }
    if (k > n) {
        throw std::invalid_argument("n_fail exceeds n_trials");
    }
    double z = z_for(confidence);
    double nn = double(n);
    double ph = double(k) / nn;
    double z2 = z * z;
    double denom = 1 + z2 / nn;
    double center = (ph + z2 / (2 * nn)) / denom;
    double half = z / denom * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn));
    Interval out;
    out.estimate = ph;
    out.low = k == 0 ? 0.0 : clamp01(center - half);
    out.high = k == n ? 1.0 : clamp01(center + half);
    out.low = std::min(out.low, ph);
    out.high = std::max(out.high, ph);
    return out;
}

Interval estimate_with_ci(const TrialStats &stats, double confidence) {
    if (!stats.per_v.empty()) {
        Interval out;
        double var_low = 0;
        double var_high = 0;
        for (const auto &v : stats.per_v) {
            if (v.n_samples == 0) {
                continue;
            }
            Interval w = wilson_interval(v.n_fail, v.n_samples, confidence);
            out.estimate += v.prob * w.estimate;
            var_low += std::pow(v.prob * (w.estimate - w.low), 2);
            var_high += std::pow(v.prob * (w.high - w.estimate), 2);
        }
        out.low = clamp01(out.estimate - std::sqrt(var_low));
        // Unsampled island counts can only add failures.
        out.high = clamp01(out.estimate + std::sqrt(var_high) + stats.tail_bound);
        return out;
    }
    Interval w = wilson_interval(stats.n_fail, stats.n_trials, confidence);
    return {stats.weight * w.estimate, stats.weight * w.low, stats.weight * w.high};
}

std::string x_axis_name(XAxis a) {
    return a == XAxis::P0 ? "p0" : "avg";
}

XAxis parse_x_axis(const std::string &name) {
    if (name == "p0") {
        return XAxis::P0;
    }
    if (name == "avg") {
        return XAxis::Avg;
    }
    throw std::invalid_argument("unknown x_axis '" + name + "' (expected p0 or avg)");
}

double baseline_value(double x, Baseline baseline, size_t time_steps) {
    if (baseline == Baseline::Identity) {
        return x;
    }
    return -std::expm1(double(time_steps) * std::log1p(-x));
}

std::optional<double> find_crossing(
    const std::vector<double> &xs, const std::vector<double> &ys, Baseline baseline, size_t time_steps) {
    if (xs.size() != ys.size()) {
        throw std::invalid_argument("curve x and y sizes differ");
    }
    std::optional<double> found;
    for (size_t i = 0; i + 1 < xs.size(); i++) {
        double x0 = xs[i], x1 = xs[i + 1];
        double b0 = baseline_value(x0, baseline, time_steps);
        double b1 = baseline_value(x1, baseline, time_steps);
        if (!(ys[i] <= b0 && ys[i + 1] > b1)) {
            continue;
        }
        double t;
        if (ys[i] > 0 && x0 > 0 && b0 > 0) {
            double g0 = std::log(ys[i]) - std::log(b0);
            double g1 = std::log(ys[i + 1]) - std::log(b1);
            t = g0 / (g0 - g1);
            found = std::exp(std::log(x0) + t * (std::log(x1) - std::log(x0)));
        } else {
            double g0 = ys[i] - b0;
            double g1 = ys[i + 1] - b1;
            t = g0 / (g0 - g1);
            found = x0 + t * (x1 - x0);
        }
    }
    return found;
}

ThresholdResult pseudo_threshold(const ErrRateCurve &curve, Baseline baseline, size_t time_steps) {
    std::vector<double> xs, ys, lo, hi;
    for (const auto &p : curve.points) {
        xs.push_back(p.x);
        ys.push_back(p.p_err);
        lo.push_back(p.ci_low);
        hi.push_back(p.ci_high);
    }
    ThresholdResult out;
    auto mid = find_crossing(xs, ys, baseline, time_steps);
    if (!mid) {
        return out;
    }
    out.bracketed = true;
    out.p_th = *mid;
    // The upper CI curve crosses first, the lower one last.
    auto from_high = find_crossing(xs, hi, baseline, time_steps);
    auto from_low = find_crossing(xs, lo, baseline, time_steps);
    out.low = from_high ? std::min(*from_high, out.p_th) : xs.front();
    out.high = from_low ? std::max(*from_low, out.p_th) : xs.back();
    out.uncertainty = (out.high - out.low) / 2;
    return out;
}

ModelParams params_at(const SweepPlan &plan, double x, double swept_value) {
    ModelParams p = plan.base;
    double p2_ratio = plan.p2_ratio;
    const std::string &s = plan.swept;
    if (s == "r") {
        p.r = swept_value;
    } else if (s == "q") {
        p.q = swept_value;
    } else if (s == "p_mst") {
        p.p_mst1 = swept_value;
        p.p_mst2 = swept_value;
    } else if (s == "p2_ratio") {
        p2_ratio = swept_value;
    } else if (!s.empty()) {
        throw std::invalid_argument("unknown swept parameter '" + s + "' (expected r, q, p_mst or p2_ratio)");
    }
    double p0 = plan.x_axis == XAxis::P0 ? x : 5 * x / (1 + 4 * p2_ratio);
    p.p0 = p0;
    p.p1 = plan.p1_ratio * p0;
    p.p2 = p2_ratio * p0;
    return p;
}

uint64_t point_seed(uint64_t master, size_t curve, size_t point) {
    uint64_t state = master ^ (uint64_t(curve) << 32) ^ uint64_t(point) * 0x9E3779B97F4A7C15ULL;
    splitmix64(state);
    return splitmix64(state);
}

std::vector<ErrRateCurve> sweep(const SweepPlan &plan) {
    std::vector<ErrRateCurve> out;
    if (plan.xs.empty()) {
        return out;
    }
    for (size_t i = 1; i < plan.xs.size(); i++) {
        if (!(plan.xs[i] > plan.xs[i - 1])) {
            throw std::invalid_argument("sweep x values must be strictly increasing");
        }
    }
    std::vector<double> values = plan.values;
    if (plan.swept.empty() || values.empty()) {
        values = {0.0};
    }
    CodeLayout code = build_code(plan.d, plan.layout);
    for (size_t c = 0; c < values.size(); c++) {
        ErrRateCurve curve;
        curve.x_axis = plan.x_axis;
        curve.swept = plan.swept;
        curve.swept_value = values[c];
        for (size_t i = 0; i < plan.xs.size(); i++) {
            CurvePoint pt;
            pt.x = plan.xs[i];
            pt.params = params_at(plan, plan.xs[i], values[c]);
            uint64_t seed = point_seed(plan.seed, c, i);
            if (plan.importance && pt.params.model == ModelKind::Qp) {
                size_t v_trunc = plan.v_trunc ? plan.v_trunc : code.n_islands;
                uint64_t target = plan.budget.fail_target ? plan.budget.fail_target : plan.budget.max_trials;
                pt.stats = run_perfect_importance(
                    code, pt.params, target, v_trunc, seed, plan.budget.max_trials, plan.opts);
            } else {
                pt.stats = run_model(code, pt.params, plan.budget, seed, plan.importance, plan.opts);
            }
            Interval ci = estimate_with_ci(pt.stats, plan.confidence);
            pt.p_err = ci.estimate;
            pt.ci_low = ci.low;
            pt.ci_high = ci.high;
            curve.points.push_back(pt);
        }
        out.push_back(std::move(curve));
    }
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_header() {
    return "model,d,layout,x_axis,x,p0,p1,p2,r,q,p_mst1,p_mst2,n_trials,n_fail,p_err,ci_low,ci_high,seed";
}

std::string curves_to_csv(const std::vector<ErrRateCurve> &curves, const SweepPlan &plan) {
    std::ostringstream os;
    os << csv_header() << "\n";
    for (const auto &c : curves) {
        for (const auto &p : c.points) {
            const ModelParams &m = p.params;
            os << model_name(m.model) << "," << plan.d << "," << layout_name(plan.layout) << ","
               << x_axis_name(c.x_axis) << "," << format_double(p.x) << "," << format_double(m.p0) << ","
               << format_double(m.p1) << "," << format_double(m.p2) << "," << format_double(m.r) << ","
               << format_double(m.q) << "," << format_double(m.p_mst1) << "," << format_double(m.p_mst2) << ","
               << p.stats.n_trials << "," << p.stats.n_fail << "," << format_double(p.p_err) << ","
               << format_double(p.ci_low) << "," << format_double(p.ci_high) << "," << p.stats.seed << "\n";
        }
    }
    return os.str();
}

}  // namespace mzmqec
