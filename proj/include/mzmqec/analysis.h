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

#ifndef MZMQEC_ANALYSIS_H
#define MZMQEC_ANALYSIS_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mzmqec/engine.h"

namespace mzmqec {

/// One standard deviation, two-sided.
constexpr double kOneSigma = 0.682689492137086;

struct Interval {
    double estimate = 0;
    double low = 0;
    double high = 0;
};

/// Wilson score interval for k successes out of n.
Interval wilson_interval(uint64_t k, uint64_t n, double confidence);

/// Point estimate with a confidence interval. Importance-sampled stats are
/// scaled by their weight; per-v intervals are combined in quadrature.
Interval estimate_with_ci(const TrialStats &stats, double confidence);

enum class XAxis { P0, Avg };
std::string x_axis_name(XAxis a);
XAxis parse_x_axis(const std::string &name);

enum class Baseline { Identity, PerStep };

struct CurvePoint {
    double x = 0;
    ModelParams params;
    TrialStats stats;
    double p_err = 0;
    double ci_low = 0;
    double ci_high = 0;
};

struct ErrRateCurve {
    XAxis x_axis = XAxis::P0;
    std::string swept;
    double swept_value = 0;
    std::vector<CurvePoint> points;
};

struct ThresholdResult {
    bool bracketed = false;
    double p_th = 0;
    double uncertainty = 0;
    double low = 0;
    double high = 0;
};

/// Value of the no-correction reference line at x.
double baseline_value(double x, Baseline baseline, size_t time_steps);

/// Last upward crossing of p_err(x) through the baseline, interpolated in
/// log-log space. Uncertainty is half the spread of the crossings of the
/// interval bounds.
ThresholdResult pseudo_threshold(
    const ErrRateCurve &curve, Baseline baseline = Baseline::Identity, size_t time_steps = 1);

/// Crossing of a sampled curve y(x) with the baseline, if any.
std::optional<double> find_crossing(
    const std::vector<double> &xs, const std::vector<double> &ys, Baseline baseline, size_t time_steps);

struct SweepPlan {
    ModelParams base;
    size_t d = 5;
    LayoutKind layout = LayoutKind::Standard;
    XAxis x_axis = XAxis::P0;
    std::vector<double> xs;
    /// Name of the swept parameter ("" for none): r, q, p_mst, p2_ratio.
    std::string swept;
    std::vector<double> values;
    /// p1 = p1_ratio * p0 and p2 = p2_ratio * p0.
    double p1_ratio = 1;
    double p2_ratio = 1;
    TrialBudget budget;
    bool importance = false;
    /// Largest island count sampled by the perfect-protocol importance
    /// sampler; 0 means every island.
    size_t v_trunc = 0;
    uint64_t seed = 1;
    RunOptions opts;
    double confidence = kOneSigma;
};

/// Noise parameters at one x on the chosen axis.
ModelParams params_at(const SweepPlan &plan, double x, double swept_value);

/// Seed of point i of curve c, derived from the master seed.
uint64_t point_seed(uint64_t master, size_t curve, size_t point);

std::vector<ErrRateCurve> sweep(const SweepPlan &plan);

std::string csv_header();
std::string curves_to_csv(const std::vector<ErrRateCurve> &curves, const SweepPlan &plan);

/// printf("%.17g") so values round-trip exactly.
std::string format_double(double v);

}  // namespace mzmqec

#endif
