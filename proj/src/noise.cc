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

#include "mzmqec/noise.h"

#include "long_lived_tree.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace mzmqec {

std::string model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Qp:
            return "Qp";
        case ModelKind::QpBf:
            return "QpBf";
        case ModelKind::MC:
            return "MC";
        case ModelKind::PMC:
            return "PMC";
        case ModelKind::MCLongLived:
            return "MCLongLived";
    }
    return "?";
}

ModelKind parse_model(const std::string &name) {
    for (auto k : {ModelKind::Qp, ModelKind::QpBf, ModelKind::MC, ModelKind::PMC, ModelKind::MCLongLived}) {
        if (model_name(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown model '" + name + "'");
}

namespace {

void check_prob(double v, const char *name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
    }
}

/// e^{-1/r}, with the r -> 0 limit.
double survival(double r) {
    return r > 0 ? std::exp(-1.0 / r) : 0.0;
}

}  // namespace

EventProbs derive_event_probs(const ModelParams &params) {
    if (params.m != 2) {
        throw std::invalid_argument("m: only tetrons (m = 2) are supported");
    }
    check_prob(params.p0, "p0");
    check_prob(params.p1, "p1");
    check_prob(params.p2, "p2");
    check_prob(params.r, "r");
    check_prob(params.q, "q");
    check_prob(params.p_mst1, "p_mst1");
    check_prob(params.p_mst2, "p_mst2");
    check_prob(params.p_pair_extra, "p_pair_extra");

    EventProbs e;
    e.model = params.model;
    e.m = params.m;
    bool qubit_like = params.model == ModelKind::Qp || params.model == ModelKind::QpBf;
    std::array<double, 3> qk{0, 0, 0};
    if (qubit_like) {
        e.p = {params.p0, params.p0, params.p0};
    } else {
        e.p = {params.p0, params.p1, params.p2};
        qk[2] = params.q;
    }
    double r = params.r;
    for (size_t k = 0; k < 3; k++) {
        e.p_pair[k] = e.p[k] * (1 - qk[k]) * (1 - r) + params.p_pair_extra;
        e.p_qp[k] = e.p[k] * (1 - qk[k]) * r;
        e.p_odd[k] = 1 - e.p_qp[k];
    }
    if (has_correlated_events(params.model)) {
        e.p_cor_even = 2 * e.p[2] * qk[2] * (1 - r);
        e.p_cor_odd = 2 * e.p[2] * qk[2] * r;
    }
    if (params.model == ModelKind::Qp) {
        e.p_mst = {0, 0, 0};
    } else {
        e.p_mst = {0, params.p_mst1, params.p_mst2};
    }
    if (params.model == ModelKind::MCLongLived) {
        double stay = survival(r);
        e.p_hop = qk[2];
        e.p_relax_tree = (1 - qk[2]) * (1 - stay);
        e.p_stay_tree = (1 - qk[2]) * stay;
        e.p_relax_final = 1 - stay;
    }

    const char *names[3] = {"k=0", "k=1", "k=2"};
    for (size_t k = 0; k < 3; k++) {
        std::string tag = names[k];
        check_prob(e.p_pair[k], ("p_pair " + tag).c_str());
        check_prob(e.p_qp[k], ("p_qp " + tag).c_str());
        if (e.p_pair[k] + e.p_qp[k] > 1.0 + 1e-12) {
            throw std::invalid_argument("single-island event probability exceeds 1 at " + tag);
        }
    }
    check_prob(e.p_cor_even, "p_cor_even");
    check_prob(e.p_cor_odd, "p_cor_odd");
    if (e.p_cor_even + e.p_cor_odd > 1.0 + 1e-12) {
        throw std::invalid_argument("correlated event probability exceeds 1 (2*p2*q > 1)");
    }
    return e;
}

size_t EventMenu::pick(double u) const {
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) {
        return cumulative.size() - 1;
    }
    return size_t(it - cumulative.begin());
}

void MenuBuilder::add(uint32_t mask_a, uint32_t mask_b, double weight) {
    if (weight <= 0) {
        return;
    }
    entries_.emplace_back((uint64_t(mask_a) << 32) | mask_b, weight);
}

EventMenu MenuBuilder::build() const {
    auto sorted = entries_;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto &x, const auto &y) {
        return x.first < y.first;
    });
    EventMenu menu;
    double acc = 0;
    for (size_t k = 0; k < sorted.size();) {
        uint64_t key = sorted[k].first;
        double w = 0;
        while (k < sorted.size() && sorted[k].first == key) {
            w += sorted[k].second;
            k++;
        }
        if (key == 0) {
            continue;
        }
        acc += w;
        menu.cumulative.push_back(acc);
        menu.mask_a.push_back(uint32_t(key >> 32));
        menu.mask_b.push_back(uint32_t(key));
    }
    menu.total = acc;
    return menu;
}

TimeStepContext idle_context(const CodeLayout &code) {
    TimeStepContext ctx;
    ctx.k.assign(code.n_islands, 0);
    ctx.measured_sites.assign(code.n_islands, 0);
    return ctx;
}

TimeStepContext simultaneous_context(const CodeLayout &code) {
    TimeStepContext ctx = idle_context(code);
    for (size_t g = 0; g < code.n_gauges; g++) {
        ctx.gauges.push_back(g);
    }
    ctx.stab_mask = code.stab_bits_mask();
    return ctx;
}

TimeStepContext schedule_context(const CodeLayout &code, size_t step) {
    if (step >= 4) {
        throw std::invalid_argument("schedule step must be in [0, 4)");
    }
    TimeStepContext ctx = idle_context(code);
    const ScheduleStep &st = code.schedule[step];
    for (const auto &p : st.pairs) {
        ctx.k[p.island_a] = 2;
        ctx.k[p.island_b] = 2;
        ctx.measured_sites[p.island_a] = p.sites_a;
        ctx.measured_sites[p.island_b] = p.sites_b;
        ctx.pairs.push_back(p);
        ctx.gauges.push_back(p.gauge);
    }
    ctx.stab_mask = st.stab_mask;
    return ctx;
}

namespace {

bool split_by_site(const EventProbs &probs, uint32_t measured_sites) {
    return probs.model == ModelKind::PMC && measured_sites != 0;
}

}  // namespace

EventMenu relax_menu(const EventProbs &probs, uint8_t k, uint32_t measured_sites) {
    size_t n = 2 * probs.m;
    bool split = split_by_site(probs, measured_sites);
    MenuBuilder b;
    for (size_t a = 0; a < n; a++) {
        bool measured = (measured_sites >> a) & 1;
        double p = split && !measured ? probs.p_odd[0] : probs.p_odd[k];
        b.add(uint32_t{1} << a, 0, p / double(n));
    }
    return b.build();
}

EventMenu single_island_menu(const EventProbs &probs, uint8_t k, uint32_t measured_sites) {
    size_t n = 2 * probs.m;
    bool split = split_by_site(probs, measured_sites);
    MenuBuilder b;
    for (size_t a = 0; a < n; a++) {
        bool measured = (measured_sites >> a) & 1;
        double p = split && !measured ? probs.p_qp[0] : probs.p_qp[k];
        b.add(uint32_t{1} << a, 0, p / double(n));
    }
    for (size_t a = 0; a < n; a++) {
        for (size_t c = 0; c < n; c++) {
            bool touches = ((measured_sites >> a) & 1) || ((measured_sites >> c) & 1);
            double p = split && !touches ? probs.p_pair[0] : probs.p_pair[k];
            b.add((uint32_t{1} << a) ^ (uint32_t{1} << c), 0, p / double(n * n));
        }
    }
    return b.build();
}

EventMenu correlated_menu(const EventProbs &probs, const MeasuredPair &pair) {
    MenuBuilder b;
    if (!has_correlated_events(probs.model)) {
        return b.build();
    }
    uint32_t n = uint32_t(2 * probs.m);
    if (probs.model == ModelKind::PMC) {
        // An excitation on one island, transfer through a connected pair, and
        // (even case) relaxation on the partner.
        double w_odd = probs.p_cor_odd / double(8 * probs.m);
        double w_even = probs.p_cor_even / double(16 * probs.m * probs.m);
        for (int side = 0; side < 2; side++) {
            for (uint32_t x = 0; x < n; x++) {
                for (const auto &c : pair.connected) {
                    uint32_t on_src = side == 0 ? c.first : c.second;
                    uint32_t on_dst = side == 0 ? c.second : c.first;
                    uint32_t src = (1u << x) ^ (1u << on_src);
                    uint32_t dst = 1u << on_dst;
                    if (side == 0) {
                        b.add(src, dst, w_odd);
                    } else {
                        b.add(dst, src, w_odd);
                    }
                    for (uint32_t y = 0; y < n; y++) {
                        uint32_t dst2 = dst ^ (1u << y);
                        if (side == 0) {
                            b.add(src, dst2, w_even);
                        } else {
                            b.add(dst2, src, w_even);
                        }
                    }
                }
            }
        }
        return b.build();
    }
    double w_odd = probs.p_cor_odd / double(2 * n * n * n);
    double w_even = probs.p_cor_even / double(n * n * n * n);
    for (uint32_t x = 0; x < n; x++) {
        for (uint32_t y = 0; y < n; y++) {
            uint32_t pair_mask = (1u << x) ^ (1u << y);
            for (uint32_t s = 0; s < n; s++) {
                b.add(1u << s, pair_mask, w_odd);
                b.add(pair_mask, 1u << s, w_odd);
            }
            for (uint32_t u = 0; u < n; u++) {
                for (uint32_t v = 0; v < n; v++) {
                    b.add(pair_mask, (1u << u) ^ (1u << v), w_even);
                }
            }
        }
    }
    return b.build();
}

namespace {

/// Draws from a menu with one uniform; returns outcome index or -1.
int draw(const EventMenu &menu, Rng &rng) {
    double u = rng.uniform();
    if (u >= menu.total) {
        return -1;
    }
    return int(menu.pick(u));
}

void apply_mask(MajoranaString &s, IslandParities *par, size_t island, uint32_t mask) {
    s.xor_island_mask(island, mask);
    if (par != nullptr && (std::popcount(mask) & 1)) {
        par->toggle(island);
    }
}

}  // namespace

MajoranaString step0_relax(IslandParities &parities, const TimeStepContext &ctx, const EventProbs &probs, Rng &rng) {
    MajoranaString out(ctx.k.size(), 2 * probs.m);
    for (size_t j = 0; j < ctx.k.size(); j++) {
        if (!parities.odd(j)) {
            continue;
        }
        EventMenu menu = relax_menu(probs, ctx.k[j], ctx.measured_sites[j]);
        int o = draw(menu, rng);
        if (o >= 0) {
            apply_mask(out, &parities, j, menu.mask_a[o]);
        }
    }
    return out;
}

MajoranaString step0_long_lived(
    IslandParities &parities, const TimeStepContext &ctx, const EventProbs &probs, Rng &rng) {
    double total = probs.p_hop + probs.p_relax_tree + probs.p_stay_tree;
    if (std::abs(total - 1.0) > 1e-9 || probs.p_hop < 0 || probs.p_relax_tree < 0 || probs.p_stay_tree < 0) {
        throw std::invalid_argument("long-lived relaxation probabilities must be non-negative and sum to 1");
    }
    MajoranaString out(ctx.k.size(), 2 * probs.m);
    std::vector<uint8_t> in_pair(ctx.k.size(), 0);
    for (const auto &p : ctx.pairs) {
        in_pair[p.island_a] = in_pair[p.island_b] = 1;
    }
    long_lived_step0(
        ctx.pairs, in_pair, ctx.k.size(), probs, rng,
        [&](size_t j) {
            return parities.odd(j);
        },
        [&](size_t j, uint32_t mask) {
            apply_mask(out, &parities, j, mask);
        });
    return out;
}

MajoranaString step1_events(const TimeStepContext &ctx, const EventProbs &probs, Rng &rng) {
    MajoranaString out(ctx.k.size(), 2 * probs.m);
    for (size_t j = 0; j < ctx.k.size(); j++) {
        EventMenu menu = single_island_menu(probs, ctx.k[j], ctx.measured_sites[j]);
        int o = draw(menu, rng);
        if (o >= 0) {
            apply_mask(out, nullptr, j, menu.mask_a[o]);
        }
    }
    for (const auto &p : ctx.pairs) {
        EventMenu menu = correlated_menu(probs, p);
        int o = draw(menu, rng);
        if (o >= 0) {
            apply_mask(out, nullptr, p.island_a, menu.mask_a[o]);
            apply_mask(out, nullptr, p.island_b, menu.mask_b[o]);
        }
    }
    return out;
}

BitVec step2_measure(
    const MajoranaString &frame, const TimeStepContext &ctx, const CodeLayout &code, const EventProbs &probs, Rng &rng) {
    BitVec out(ctx.gauges.size());
    for (size_t i = 0; i < ctx.gauges.size(); i++) {
        bool v = frame.bits().and_parity(code.gauge_matrix.row(ctx.gauges[i]));
        if (rng.uniform() < probs.p_mst[2]) {
            v = !v;
        }
        out.set(i, v);
    }
    return out;
}

size_t island_class(uint32_t mask) {
    mask &= 0xF;
    if (std::popcount(mask) > 2 || mask == 0xF) {
        mask ^= 0xF;
    }
    if (mask == 0) {
        return 0;
    }
    if (std::popcount(mask) == 1) {
        return 1 + std::countr_zero(mask);
    }
    // Pair classes by the partner of gamma_1.
    uint32_t with_first = (mask & 1) ? mask : (mask ^ 0xF);
    return 4 + std::countr_zero(with_first & ~1u);
}

std::array<double, 8> single_island_distribution(const EventProbs &probs, bool odd, uint8_t k) {
    if (probs.m != 2) {
        throw std::invalid_argument("single_island_distribution requires m = 2");
    }
    std::array<double, 8> dist{};
    EventMenu step1 = single_island_menu(probs, k, 0);
    std::vector<std::pair<uint32_t, double>> first{{0u, 1.0}};
    if (odd) {
        EventMenu relax = relax_menu(probs, k, 0);
        first = {{0u, 1.0 - relax.total}};
        for (size_t i = 0; i < relax.size(); i++) {
            first.emplace_back(relax.mask_a[i], relax.weight(i));
        }
    }
    for (const auto &[m0, w0] : first) {
        dist[island_class(m0)] += w0 * (1.0 - step1.total);
        for (size_t i = 0; i < step1.size(); i++) {
            dist[island_class(m0 ^ step1.mask_a[i])] += w0 * step1.weight(i);
        }
    }
    return dist;
}

}  // namespace mzmqec
