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

#include "mzmqec/engine.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "long_lived_tree.h"
#include "mzmqec/rng.h"

namespace mzmqec {

ProtocolSpec protocol_for(ModelKind model) {
    ProtocolSpec p;
    p.model = model;
    switch (model) {
        case ModelKind::Qp:
            p.rounds = 1;
            p.steps_per_round = 1;
            p.final_perfect_round = false;
            break;
        case ModelKind::QpBf:
            p.rounds = 4;
            p.steps_per_round = 1;
            p.final_perfect_round = true;
            break;
        default:
            p.rounds = 4;
            p.steps_per_round = 4;
            p.final_perfect_round = true;
            break;
    }
    return p;
}

double TrialStats::estimate() const {
    if (!per_v.empty()) {
        double e = 0;
        for (const auto &v : per_v) {
            if (v.n_samples) {
                e += v.prob * double(v.n_fail) / double(v.n_samples);
            }
        }
        return e;
    }
    return n_trials ? weight * double(n_fail) / double(n_trials) : 0.0;
}

double TrialStats::effective_trials() const {
    if (!per_v.empty()) {
        double eff = 0;
        bool first = true;
        for (const auto &v : per_v) {
            if (v.prob > 0 && v.n_samples) {
                double e = double(v.n_samples) / v.prob;
                eff = first ? e : std::min(eff, e);
                first = false;
            }
        }
        return eff;
    }
    return weight > 0 ? double(n_trials) / weight : 0.0;
}

const EventMenu *Simulator::intern(EventMenu menu) {
    menus_.push_back(std::make_unique<EventMenu>(std::move(menu)));
    return menus_.back().get();
}

Simulator::Simulator(const CodeLayout &code, const ModelParams &params)
    : code_(code), probs_(derive_event_probs(params)), protocol_(protocol_for(params.model)) {
    if (code.sites_per_island != 4) {
        throw std::invalid_argument("simulator supports tetrons only");
    }
    island_sig_.assign(code.n_islands * 16, 0);
    for (size_t j = 0; j < code.n_islands; j++) {
        for (uint32_t m = 0; m < 16; m++) {
            island_sig_[j * 16 + m] = code.island_signature(j, m);
        }
    }

    std::vector<TimeStepContext> raw;
    if (params.model == ModelKind::Qp) {
        raw.push_back(idle_context(code));
    } else if (params.model == ModelKind::QpBf) {
        raw.push_back(simultaneous_context(code));
    } else {
        for (size_t s = 0; s < 4; s++) {
            raw.push_back(schedule_context(code, s));
        }
    }

    std::map<std::pair<int, uint32_t>, const EventMenu *> relax_cache, single_cache;
    std::map<uint32_t, const EventMenu *> pair_cache;
    std::vector<std::vector<const EventMenu *>> pair_menus;
    for (auto &ctx : raw) {
        Context c;
        c.ctx = ctx;
        std::vector<const EventMenu *> pm;
        for (size_t j = 0; j < code.n_islands; j++) {
            auto key = std::make_pair(int(ctx.k[j]), ctx.measured_sites[j]);
            if (!relax_cache.count(key)) {
                relax_cache[key] = intern(relax_menu(probs_, ctx.k[j], ctx.measured_sites[j]));
                single_cache[key] = intern(single_island_menu(probs_, ctx.k[j], ctx.measured_sites[j]));
            }
            c.relax.push_back(relax_cache[key]);
            c.single.push_back(single_cache[key]);
        }
        for (const auto &p : ctx.pairs) {
            uint32_t key = 0;
            for (const auto &cp : p.connected) {
                key = (key << 8) | (uint32_t(cp.first) << 4) | cp.second;
            }
            if (!pair_cache.count(key)) {
                pair_cache[key] = intern(correlated_menu(probs_, p));
            }
            pm.push_back(pair_cache[key]);
        }
        pair_menus.push_back(pm);
        contexts_.push_back(std::move(c));
    }

    double flip_p = probs_.p_mst[2];
    for (size_t r = 0; r < protocol_.rounds; r++) {
        for (size_t s = 0; s < protocol_.steps_per_round; s++) {
            size_t ci = contexts_.size() == 1 ? 0 : s;
            const Context &c = contexts_[ci];
            Step st{};
            st.round = uint16_t(r);
            st.step = uint16_t(s);
            st.round_end = s + 1 == protocol_.steps_per_round;
            st.ctx = ci;
            st.stab_mask = c.ctx.stab_mask;
            st.loc_begin = locations_.size();
            for (size_t j = 0; j < code.n_islands; j++) {
                const EventMenu *m = c.single[j];
                if (m->total > 0) {
                    locations_.push_back({LocationKind::Single, uint16_t(r), uint16_t(s), uint32_t(j), uint32_t(j),
                                          uint32_t(j), 0, m->total, m});
                }
            }
            for (size_t pi = 0; pi < c.ctx.pairs.size(); pi++) {
                const EventMenu *m = pair_menus[ci][pi];
                const auto &p = c.ctx.pairs[pi];
                if (m->total > 0) {
                    locations_.push_back({LocationKind::Correlated, uint16_t(r), uint16_t(s), uint32_t(p.island_a),
                                          uint32_t(p.island_b), uint32_t(pi), 0, m->total, m});
                }
            }
            st.flip_begin = locations_.size();
            if (flip_p > 0) {
                for (size_t g : c.ctx.gauges) {
                    locations_.push_back({LocationKind::Flip, uint16_t(r), uint16_t(s), 0, 0, uint32_t(g),
                                          code.gauge_stab[g], flip_p, nullptr});
                }
            }
            st.loc_end = locations_.size();
            steps_.push_back(st);
        }
    }

    double log_none = 0;
    first_fault_cdf_.reserve(locations_.size());
    for (const auto &loc : locations_) {
        log_none += std::log1p(-std::min(loc.total, 1.0));
        first_fault_cdf_.push_back(-std::expm1(log_none));
    }
    prob_any_fault_ = locations_.empty() ? 0.0 : first_fault_cdf_.back();
}

std::string Simulator::describe(size_t i) const {
    const Location &l = locations_.at(i);
    std::string s = "round " + std::to_string(l.round + 1) + " step " + std::to_string(l.step + 1) + " ";
    switch (l.kind) {
        case LocationKind::Single:
            s += "single-island event on island " + std::to_string(l.island_a);
            break;
        case LocationKind::Correlated:
            s += "correlated event on islands " + std::to_string(l.island_a) + "," + std::to_string(l.island_b);
            break;
        case LocationKind::Flip:
            s += "bit-flip of gauge " + std::to_string(l.index);
            break;
    }
    return s;
}

std::vector<double> Simulator::island_event_probs() const {
    std::vector<double> p(code_.n_islands);
    for (size_t j = 0; j < code_.n_islands; j++) {
        p[j] = contexts_[0].single[j]->total;
    }
    return p;
}

namespace {

constexpr size_t kMaxIslands = 31 * 31;

struct RandomDriver {
    Rng rng;

    int fire(size_t, const Location &loc) {
        double u = rng.uniform();
        if (u >= loc.total) {
            return -1;
        }
        return loc.menu ? int(loc.menu->pick(u)) : 0;
    }
    int relax(size_t, const EventMenu &menu) {
        double u = rng.uniform();
        return u < menu.total ? int(menu.pick(u)) : -1;
    }
    /// Relaxation conditioned on happening.
    int settle(size_t, const EventMenu &menu) {
        double u = rng.uniform();
        return menu.size() ? int(menu.pick(u * menu.total)) : -1;
    }
    double uniform() {
        return rng.uniform();
    }
    uint64_t below(uint64_t n) {
        return rng.below(n);
    }
};

/// Nothing fires before `inject`; the chosen outcome fires there; after it
/// the trial continues as ordinary Monte Carlo.
struct FirstFaultDriver : RandomDriver {
    size_t inject;
    int outcome;

    int fire(size_t i, const Location &loc) {
        if (i < inject) {
            return -1;
        }
        if (i == inject) {
            return outcome;
        }
        return RandomDriver::fire(i, loc);
    }
};

/// Fires only the listed faults; every odd island relaxes, with the site
/// taken from `choices` (extended with 0). Records the branching factors.
struct ScriptedDriver {
    const std::vector<std::pair<size_t, size_t>> *faults;
    std::vector<size_t> choices;
    std::vector<size_t> ranges;
    size_t decision = 0;

    int fire(size_t i, const Location &) {
        for (const auto &f : *faults) {
            if (f.first == i) {
                return int(f.second);
            }
        }
        return -1;
    }
    int relax(size_t, const EventMenu &menu) {
        if (menu.size() == 0) {
            return -1;
        }
        if (decision >= choices.size()) {
            choices.push_back(0);
        }
        if (decision >= ranges.size()) {
            ranges.resize(decision + 1);
        }
        ranges[decision] = menu.size();
        size_t c = std::min(choices[decision], menu.size() - 1);
        decision++;
        return int(c);
    }
    int settle(size_t j, const EventMenu &menu) {
        return relax(j, menu);
    }
    double uniform() {
        throw std::logic_error("scripted trials do not support the long-lived model");
    }
    uint64_t below(uint64_t) {
        throw std::logic_error("scripted trials do not support the long-lived model");
    }
};

struct TrialState {
    uint64_t sig;
    size_t n_odd;
    std::array<uint8_t, kMaxIslands> odd;
};

/// With `settle_odd`, islands still odd after the schedule get one more
/// relaxation step before decoding, as if the next time step had begun.
template <class Driver, bool kTrace>
bool run_trial(
    const Simulator &sim, Driver &d, uint64_t initial_sig, MajoranaString *frame, bool settle_odd = false) {
    const CodeLayout &code = sim.code();
    const auto &locs = sim.locations();
    const size_t n = code.n_islands;
    TrialState st;
    st.sig = initial_sig;
    st.n_odd = 0;
    std::fill_n(st.odd.begin(), n, uint8_t{0});

    auto apply = [&](size_t j, uint32_t mask) {
        st.sig ^= sim.island_signature(j, mask);
        if (std::popcount(mask) & 1) {
            st.odd[j] ^= 1;
            if (st.odd[j]) {
                st.n_odd++;
            } else {
                st.n_odd--;
            }
        }
        if constexpr (kTrace) {
            frame->xor_island_mask(j, mask);
        }
    };
    auto check = [&]() {
        if constexpr (kTrace) {
            for (size_t j = 0; j < n; j++) {
                if (frame->island_parity(j) != bool(st.odd[j])) {
                    throw std::logic_error("cached island parity drifted from the frame");
                }
            }
            if (signature_of(*frame, code) != st.sig) {
                throw std::logic_error("cached signature drifted from the frame");
            }
        }
    };

    const bool long_lived = sim.probs().model == ModelKind::MCLongLived;
    std::vector<uint8_t> in_pair;
    const bool perfect = !sim.protocol().final_perfect_round;
    uint64_t round_syn[4] = {0, 0, 0, 0};
    uint64_t acc = 0;
    for (const auto &step : sim.steps()) {
        const auto &ctx = sim.contexts()[step.ctx];
        if (st.n_odd) {
            if (long_lived) {
                in_pair.assign(n, 0);
                for (const auto &p : ctx.ctx.pairs) {
                    in_pair[p.island_a] = in_pair[p.island_b] = 1;
                }
                long_lived_step0(
                    ctx.ctx.pairs, in_pair, n, sim.probs(), d,
                    [&](size_t j) {
                        return st.odd[j] != 0;
                    },
                    apply);
            } else {
                for (size_t j = 0; j < n && st.n_odd; j++) {
                    if (st.odd[j]) {
                        const EventMenu &m = *ctx.relax[j];
                        int o = d.relax(j, m);
                        if (o >= 0) {
                            apply(j, m.mask_a[o]);
                        }
                    }
                }
            }
        }
        for (size_t i = step.loc_begin; i < step.flip_begin; i++) {
            const Location &loc = locs[i];
            int o = d.fire(i, loc);
            if (o >= 0) {
                apply(loc.island_a, loc.menu->mask_a[o]);
                if (loc.kind == LocationKind::Correlated) {
                    apply(loc.island_b, loc.menu->mask_b[o]);
                }
            }
        }
        check();
        uint64_t meas = st.sig & step.stab_mask;
        for (size_t i = step.flip_begin; i < step.loc_end; i++) {
            if (d.fire(i, locs[i]) >= 0) {
                meas ^= uint64_t{1} << locs[i].stab_bit;
            }
        }
        acc |= meas;
        if (step.round_end) {
            round_syn[step.round] = acc;
            acc = 0;
        }
    }

    if (settle_odd && st.n_odd) {
        const auto &ctx = sim.contexts()[sim.steps().front().ctx];
        for (size_t j = 0; j < n && st.n_odd; j++) {
            if (st.odd[j]) {
                const EventMenu &m = *ctx.relax[j];
                int o = d.settle(j, m);
                if (o >= 0) {
                    apply(j, m.mask_a[o]);
                }
            }
        }
    }

    uint64_t stab = code.stab_bits_mask();
    uint64_t selected = perfect ? (st.sig & stab) : select_syndrome_bits(round_syn);
    st.sig ^= correction_signature(selected, code);
    if constexpr (kTrace) {
        frame->bits() ^= decode_syndrome(Syndrome{selected, code.n_stabs}, code).bits();
    }
    if (!perfect) {
        uint64_t residual = st.sig & stab;
        st.sig ^= correction_signature(residual, code);
        if constexpr (kTrace) {
            frame->bits() ^= decode_syndrome(Syndrome{residual, code.n_stabs}, code).bits();
        }
    }
    check();
    bool fail = (st.sig & code.logical_bits_mask()) != 0;
    if constexpr (kTrace) {
        if (fail != is_logical_failure(*frame, code)) {
            throw std::logic_error("signature failure flag disagrees with the frame");
        }
    }
    return fail;
}

template <class Driver>
bool run_fast(const Simulator &sim, Driver &d, uint64_t initial_sig = 0, bool settle_odd = false) {
    return run_trial<Driver, false>(sim, d, initial_sig, nullptr, settle_odd);
}

/// Poisson-binomial tail table: t[j][c] = P(exactly c events among islands j..).
std::vector<std::vector<double>> poisson_binomial_tails(const std::vector<double> &p) {
    size_t n = p.size();
    std::vector<std::vector<double>> t(n + 1, std::vector<double>(n + 1, 0.0));
    t[n][0] = 1.0;
    for (size_t j = n; j-- > 0;) {
        for (size_t c = 0; c <= n - j; c++) {
            double v = (1 - p[j]) * t[j + 1][c];
            if (c > 0) {
                v += p[j] * t[j + 1][c - 1];
            }
            t[j][c] = v;
        }
    }
    return t;
}

}  // namespace

size_t resolve_workers(size_t requested) {
    if (requested > 0) {
        return requested;
    }
    size_t hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

BatchTotals run_batches(
    const TrialBudget &budget, const RunOptions &opts, const std::function<bool(uint64_t)> &trial) {
    uint64_t bs = std::max<uint64_t>(1, opts.batch_size);
    uint64_t n_batches = (budget.max_trials + bs - 1) / bs;
    std::vector<uint64_t> fails(n_batches, 0);
    std::vector<uint8_t> done(n_batches, 0);
    std::mutex mu;
    uint64_t next = 0;
    uint64_t prefix = 0;
    uint64_t prefix_fail = 0;
    bool stop = false;

    auto worker = [&]() {
        while (true) {
            uint64_t idx;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (stop || next >= n_batches) {
                    return;
                }
                idx = next++;
            }
            uint64_t begin = idx * bs;
            uint64_t end = std::min(budget.max_trials, begin + bs);
            uint64_t f = 0;
            for (uint64_t i = begin; i < end; i++) {
                f += trial(i) ? 1 : 0;
            }
            std::lock_guard<std::mutex> lock(mu);
            fails[idx] = f;
            done[idx] = 1;
            while (!stop && prefix < n_batches && done[prefix]) {
                prefix_fail += fails[prefix];
                prefix++;
                if (budget.fail_target && prefix_fail >= budget.fail_target) {
                    stop = true;
                }
            }
        }
    };

    size_t workers = std::min<uint64_t>(resolve_workers(opts.workers), std::max<uint64_t>(n_batches, 1));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < workers; w++) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    BatchTotals out;
    out.n_fail = prefix_fail;
    out.n_trials = std::min(budget.max_trials, prefix * bs);
    return out;
}

TrialStats run_perfect_mc(
    const CodeLayout &code, const ModelParams &params, const TrialBudget &budget, uint64_t seed,
    const RunOptions &opts) {
    if (budget.max_trials == 0) {
        throw std::invalid_argument("n_trials must be positive");
    }
    if (params.model != ModelKind::Qp) {
        throw std::invalid_argument("perfect-measurement Monte Carlo requires the Qp model");
    }
    Simulator sim(code, params);
    BatchTotals t = run_batches(budget, opts, [&](uint64_t i) {
        RandomDriver d{Rng(seed, i)};
        return run_fast(sim, d, 0, opts.final_relax);
    });
    TrialStats s;
    s.n_trials = t.n_trials;
    s.n_fail = t.n_fail;
    s.weighted_fail = double(t.n_fail);
    s.seed = seed;
    return s;
}

double prob_exactly_v(const ModelParams &params, const CodeLayout &code, size_t v) {
    ModelParams p = params;
    p.model = ModelKind::Qp;
    Simulator sim(code, p);
    auto tails = poisson_binomial_tails(sim.island_event_probs());
    if (v > code.n_islands) {
        return 0.0;
    }
    return tails[0][v];
}

TrialStats run_perfect_importance(
    const CodeLayout &code, const ModelParams &params, uint64_t fail_target, size_t v_trunc, uint64_t seed,
    uint64_t max_samples_per_v, const RunOptions &opts) {
    if (v_trunc < 2) {
        throw std::invalid_argument("v_trunc must be at least 2");
    }
    if (params.model != ModelKind::Qp) {
        throw std::invalid_argument("island-count importance sampling requires the Qp model");
    }
    Simulator sim(code, params);
    std::vector<double> p = sim.island_event_probs();
    auto tails = poisson_binomial_tails(p);
    const size_t n = code.n_islands;
    v_trunc = std::min(v_trunc, n);
    const auto &single = sim.contexts()[0].single;

    TrialStats s;
    s.seed = seed;
    s.weight = 0;
    for (size_t v = 2; v <= v_trunc; v++) {
        VStats vs;
        vs.v = v;
        vs.prob = tails[0][v];
        if (vs.prob > 0) {
            TrialBudget b{max_samples_per_v, fail_target};
            BatchTotals t = run_batches(b, opts, [&](uint64_t i) {
                Rng rng(seed, (uint64_t(v) << 40) | i);
                uint64_t sig = 0;
                size_t c = v;
                for (size_t j = 0; j < n && c > 0; j++) {
                    double include = p[j] * tails[j + 1][c - 1] / tails[j][c];
                    if (rng.uniform() < include) {
                        const EventMenu &m = *single[j];
                        size_t o = m.pick(rng.uniform() * m.total);
                        sig ^= sim.island_signature(j, m.mask_a[o]);
                        const EventMenu &rm = *sim.contexts()[0].relax[j];
                        if (opts.final_relax && (std::popcount(m.mask_a[o]) & 1) && rm.size()) {
                            sig ^= sim.island_signature(j, rm.mask_a[rm.pick(rng.uniform() * rm.total)]);
                        }
                        c--;
                    }
                }
                sig ^= correction_signature(sig & code.stab_bits_mask(), code);
                return (sig & code.logical_bits_mask()) != 0;
            });
            vs.n_samples = t.n_trials;
            vs.n_fail = t.n_fail;
        }
        s.n_trials += vs.n_samples;
        s.n_fail += vs.n_fail;
        s.weight += vs.prob;
        s.per_v.push_back(vs);
    }
    for (size_t v = v_trunc + 1; v <= n; v++) {
        s.tail_bound += tails[0][v];
    }
    s.weighted_fail = s.estimate();
    return s;
}

TrialStats run_imperfect_mc(
    const CodeLayout &code, const ModelParams &params, const TrialBudget &budget, uint64_t seed,
    const RunOptions &opts) {
    if (budget.max_trials == 0) {
        throw std::invalid_argument("n_trials must be positive");
    }
    if (params.model == ModelKind::Qp) {
        throw std::invalid_argument("imperfect-measurement Monte Carlo does not apply to the Qp model");
    }
    Simulator sim(code, params);
    BatchTotals t = run_batches(budget, opts, [&](uint64_t i) {
        RandomDriver d{Rng(seed, i)};
        return run_fast(sim, d, 0, opts.final_relax);
    });
    TrialStats s;
    s.n_trials = t.n_trials;
    s.n_fail = t.n_fail;
    s.weighted_fail = double(t.n_fail);
    s.seed = seed;
    return s;
}

TrialStats run_imperfect_importance(
    const CodeLayout &code, const ModelParams &params, const TrialBudget &budget, uint64_t seed,
    const RunOptions &opts) {
    if (budget.max_trials == 0) {
        throw std::invalid_argument("n_trials must be positive");
    }
    Simulator sim(code, params);
    const auto &cdf = sim.first_fault_cdf();
    const auto &locs = sim.locations();
    double p_any = sim.prob_any_fault();
    TrialStats s;
    s.seed = seed;
    s.weight = p_any;
    if (p_any <= 0) {
        s.n_trials = budget.max_trials;
        return s;
    }
    BatchTotals t = run_batches(budget, opts, [&](uint64_t i) {
        Rng rng(seed, i);
        double u = rng.uniform() * p_any;
        size_t at = size_t(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        at = std::min(at, locs.size() - 1);
        const Location &loc = locs[at];
        int outcome = loc.menu ? int(loc.menu->pick(rng.uniform() * loc.total)) : 0;
        FirstFaultDriver d{{rng}, at, outcome};
        return run_fast(sim, d, 0, opts.final_relax);
    });
    s.n_trials = t.n_trials;
    s.n_fail = t.n_fail;
    s.weighted_fail = p_any * double(t.n_fail);
    return s;
}

TrialStats run_model(
    const CodeLayout &code, const ModelParams &params, const TrialBudget &budget, uint64_t seed, bool importance,
    const RunOptions &opts) {
    if (params.model == ModelKind::Qp) {
        if (importance) {
            return run_perfect_importance(
                code, params, budget.fail_target ? budget.fail_target : 1000, code.n_islands, seed,
                budget.max_trials, opts);
        }
        return run_perfect_mc(code, params, budget, seed, opts);
    }
    if (importance) {
        return run_imperfect_importance(code, params, budget, seed, opts);
    }
    return run_imperfect_mc(code, params, budget, seed, opts);
}

bool run_scripted(
    const Simulator &sim, const std::vector<std::pair<size_t, size_t>> &faults, uint64_t initial_signature,
    const std::vector<size_t> &relax_choices) {
    for (const auto &f : faults) {
        const Location &loc = sim.locations().at(f.first);
        size_t n_out = loc.menu ? loc.menu->size() : 1;
        if (f.second >= n_out) {
            throw std::invalid_argument("scripted outcome index out of range");
        }
    }
    ScriptedDriver d;
    d.faults = &faults;
    d.choices = relax_choices;
    return run_fast(sim, d, initial_signature);
}

bool run_traced_trial(const Simulator &sim, uint64_t seed, uint64_t trial_index) {
    MajoranaString frame = sim.code().zero_string();
    RandomDriver d{Rng(seed, trial_index)};
    return run_trial<RandomDriver, true>(sim, d, 0, &frame);
}

FtReport ft_check(const CodeLayout &code, ModelKind model, size_t max_reported) {
    if (model == ModelKind::MCLongLived) {
        throw std::invalid_argument("ft-check does not cover the long-lived model");
    }
    // Every event type must be present so each realization gets enumerated.
    ModelParams sp;
    sp.model = model;
    sp.p0 = sp.p1 = sp.p2 = 0.01;
    sp.r = 0.5;
    sp.q = has_correlated_events(model) ? 0.5 : 0.0;
    sp.p_mst1 = sp.p_mst2 = model == ModelKind::Qp ? 0.0 : 0.01;
    Simulator sim(code, sp);
    FtReport rep;
    auto record = [&](const std::string &what) {
        if (rep.violations.size() < max_reported) {
            rep.violations.push_back(what);
        } else if (rep.violations.size() == max_reported) {
            rep.violations.push_back("... further violations omitted");
        }
    };

    const auto &locs = sim.locations();
    for (size_t i = 0; i < locs.size(); i++) {
        size_t n_out = locs[i].menu ? locs[i].menu->size() : 1;
        for (size_t o = 0; o < n_out; o++) {
            std::vector<std::pair<size_t, size_t>> faults{{i, o}};
            std::vector<size_t> choices;
            while (true) {
                ScriptedDriver d;
                d.faults = &faults;
                d.choices = choices;
                // A single odd fault is relaxed in the following time step,
                // including when it lands in the last one.
                bool fail = run_trial<ScriptedDriver, false>(sim, d, 0, nullptr, true);
                rep.fault_realizations++;
                if (fail) {
                    std::string what = "EC A': " + sim.describe(i) + " outcome " + std::to_string(o);
                    if (locs[i].menu) {
                        what += " masks " + std::to_string(locs[i].menu->mask_a[o]) + "/" +
                                std::to_string(locs[i].menu->mask_b[o]);
                    }
                    record(what);
                }
                choices.assign(d.choices.begin(), d.choices.begin() + d.decision);
                std::vector<size_t> ranges(d.ranges.begin(), d.ranges.begin() + d.decision);
                while (!choices.empty() && choices.back() + 1 >= ranges.back()) {
                    choices.pop_back();
                    ranges.pop_back();
                }
                if (choices.empty()) {
                    break;
                }
                choices.back()++;
            }
        }
    }

    // EC B: fault-free protocol on low-weight Pauli inputs.
    size_t t = has_correlated_events(model) ? 1 : (code.d - 1) / 2;
    rep.ec_b_weight = t;
    const uint32_t paulis[3] = {code.x_rep, code.x_rep ^ code.z_rep, code.z_rep};
    const std::vector<std::pair<size_t, size_t>> none;
    std::vector<size_t> islands;
    std::vector<size_t> kinds;
    std::function<void(size_t, uint64_t)> rec = [&](size_t start, uint64_t sig) {
        if (!islands.empty()) {
            rep.initial_errors++;
            if (run_scripted(sim, none, sig)) {
                std::string what = "EC B: initial error on islands";
                for (size_t k = 0; k < islands.size(); k++) {
                    what += " " + std::to_string(islands[k]) + ":" + "XYZ"[kinds[k]];
                }
                record(what);
            }
        }
        if (islands.size() == t) {
            return;
        }
        for (size_t j = start; j < code.n_islands; j++) {
            for (size_t k = 0; k < 3; k++) {
                islands.push_back(j);
                kinds.push_back(k);
                rec(j + 1, sig ^ sim.island_signature(j, paulis[k]));
                islands.pop_back();
                kinds.pop_back();
            }
        }
    };
    rec(0, 0);
    return rep;
}

}  // namespace mzmqec
