#include "rwa/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

namespace rwa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

SurvivalTable::SurvivalTable(const FssSpec& spec) {
    configs_.reserve(spec.jump_hazard.size());
    for (const Hazard& h : spec.jump_hazard) {
        PerConfig pc;
        pc.cap = h.tau_cap();
        pc.prefix.resize(pc.cap + 2, 0.0);
        pc.hazard_log.resize(pc.cap + 1, -kInf);
        pc.first_certain = pc.cap + 1;
        for (std::int64_t t = 0; t <= pc.cap; ++t) {
            const double p = h.at(t);
            pc.hazard_log[t] = p > 0.0 ? std::log(p) : -kInf;
            if (p >= 1.0 && pc.first_certain > pc.cap) pc.first_certain = t;
            pc.prefix[t + 1] = pc.prefix[t] + (p < 1.0 ? std::log1p(-p) : -kInf);
        }
        const double clamp = h.at(pc.cap + 1);
        pc.clamp_log_stay = clamp < 1.0 ? std::log1p(-clamp) : -kInf;
        pc.clamp_log_jump = clamp > 0.0 ? std::log(clamp) : -kInf;
        configs_.push_back(std::move(pc));
    }
}

double SurvivalTable::log_survival(int config, std::int64_t from, std::int64_t to) const {
    if (to < from) return 0.0;
    const PerConfig& pc = configs_[static_cast<std::size_t>(config - 1)];
    double sum = 0.0;
    if (from <= pc.cap) {
        const std::int64_t hi = std::min(to, pc.cap);
        if (pc.first_certain >= from && pc.first_certain <= hi) return -kInf;
        sum += pc.prefix[hi + 1] - pc.prefix[from];
    }
    if (to > pc.cap) {
        const std::int64_t n_beyond = to - std::max(from - 1, pc.cap);
        if (pc.clamp_log_stay == -kInf) return -kInf;
        sum += static_cast<double>(n_beyond) * pc.clamp_log_stay;
    }
    return sum;
}

double SurvivalTable::log_hazard(int config, std::int64_t dwell) const {
    const PerConfig& pc = configs_[static_cast<std::size_t>(config - 1)];
    return dwell <= pc.cap ? pc.hazard_log[dwell] : pc.clamp_log_jump;
}

std::int64_t SurvivalTable::dwell_cap(int config) const {
    return configs_[static_cast<std::size_t>(config - 1)].cap;
}

std::int64_t optimistic_tau0(const SurvivalTable& table, int config, const ChangepointEvent& first,
                             bool jumper, std::int64_t tau_max) {
    // Dwells beyond the cap are equivalent, so the scan stops there.
    const std::int64_t hi = std::min(tau_max, table.dwell_cap(config));
    std::int64_t best = 0;
    double best_term = -kInf;
    for (std::int64_t t0 = 0; t0 <= hi; ++t0) {
        const double term = jumper ? table.log_survival(config, t0, t0 + first.gap - 1) +
                                         table.log_hazard(config, t0 + first.gap)
                                   : table.log_survival(config, t0, t0 + first.gap);
        if (term > best_term) {
            best_term = term;
            best = t0;
        }
    }
    return best;
}

double stage_cost(std::span<const int> configs, std::span<const std::int64_t> dwells,
                  const ChangepointEvent& event, int input, const std::vector<SurvivalTable>& tables,
                  const std::vector<FssSpec>& specs, const AssignOptions& opts) {
    const int n_sys = static_cast<int>(specs.size());
    if (input < 0 || input > n_sys) throw ValidationError("stage_cost: input outside [0, system count]");
    if (event.gap < 1) throw ValidationError("stage_cost: event gap must be >= 1");

    if (input == 0) {
        if (!opts.allow_reject) return -kInf;
        double cost = -event.reject_cost / (2.0 * opts.noise_sigma * opts.noise_sigma);
        for (int s = 0; s < n_sys; ++s) {
            cost += tables[s].log_survival(configs[s], dwells[s], dwells[s] + event.gap);
            if (cost == -kInf) return -kInf;
        }
        return cost;
    }

    const int s = input - 1;
    const int q = configs[s];
    const int q_next = q + event.sign;
    if (q_next < 1 || q_next > specs[s].config_count) return -kInf;
    const double trans = specs[s].transition_prob(q, q_next);
    if (!(trans > 0.0)) return -kInf;

    double cost = std::log(trans);
    cost += tables[s].log_survival(q, dwells[s], dwells[s] + event.gap - 1);
    cost += tables[s].log_hazard(q, dwells[s] + event.gap);
    if (cost == -kInf) return -kInf;
    for (int other = 0; other < n_sys; ++other) {
        if (other == s) continue;
        cost += tables[other].log_survival(configs[other], dwells[other], dwells[other] + event.gap);
        if (cost == -kInf) return -kInf;
    }
    return cost;
}

namespace {

struct SearchNode {
    int stage = 0;  // events consumed
    std::vector<int> q;
    std::vector<std::int64_t> tau;  // canonical dwells; empty at stage 0
    double score = 0.0;
    std::int64_t parent = -1;
    int input = -1;  // edge that produced this node
};

// u sequence of the path ending at `idx`, oldest first.
std::vector<int> path_inputs(const std::vector<SearchNode>& arena, std::int64_t idx) {
    std::vector<int> u;
    for (std::int64_t i = idx; i >= 0 && arena[i].input >= 0; i = arena[i].parent)
        u.push_back(arena[i].input);
    std::reverse(u.begin(), u.end());
    return u;
}

bool lex_less(const std::vector<SearchNode>& arena, std::int64_t a, std::int64_t b) {
    return path_inputs(arena, a) < path_inputs(arena, b);
}

}  // namespace

AssignmentResult assign_events(const std::vector<ChangepointEvent>& events,
                               const std::vector<FssSpec>& specs, const AssignOptions& opts) {
    if (specs.empty()) throw ValidationError("assign_events: no switching systems");
    for (const auto& spec : specs) {
        const auto bad = validate_fss_spec(spec);
        if (!bad.empty()) throw ValidationError("assign_events: invalid system spec: " + bad.front());
    }
    for (const auto& ev : events) {
        if (ev.gap < 1) throw ValidationError("assign_events: event gap must be >= 1");
        if (ev.sign != 1 && ev.sign != -1) throw ValidationError("assign_events: event sign must be +1 or -1");
        if (ev.reject_cost < 0.0) throw ValidationError("assign_events: negative reject cost");
    }

    const int n_sys = static_cast<int>(specs.size());
    const int n_events = static_cast<int>(events.size());

    AssignOptions options = opts;
    if (options.tau_max <= 0) {
        std::int64_t span = 0;
        for (const auto& ev : events) span += ev.gap;
        options.tau_max = std::max<std::int64_t>(2 * span, 16);
    }

    std::vector<SurvivalTable> tables;
    tables.reserve(specs.size());
    for (const auto& spec : specs) tables.emplace_back(spec);

    // Initial configuration combinations, lexicographic.
    std::vector<std::vector<int>> combos;
    {
        std::vector<int> q(n_sys, 1);
        while (true) {
            combos.push_back(q);
            int s = n_sys - 1;
            while (s >= 0 && q[s] == specs[s].config_count) q[s--] = 1;
            if (s < 0) break;
            ++q[s];
        }
    }

    AssignmentResult result;
    if (n_events == 0) {
        result.interval_configs.assign(n_sys, std::vector<int>(1, 1));
        for (int s = 0; s < n_sys; ++s) result.interval_configs[s][0] = combos.front()[s];
        return result;
    }

    std::vector<SearchNode> arena;
    std::map<std::vector<std::int64_t>, std::int64_t> best;  // state key -> node
    using PqEntry = std::tuple<double, std::int64_t, std::int64_t>;  // (-score, seq, node)
    std::priority_queue<PqEntry, std::vector<PqEntry>, std::greater<PqEntry>> pq;
    std::int64_t seq = 0;

    const auto state_key = [&](const SearchNode& n) {
        std::vector<std::int64_t> key;
        key.reserve(1 + 2 * n_sys);
        key.push_back(n.stage);
        for (int v : n.q) key.push_back(v);
        for (std::int64_t v : n.tau) key.push_back(v);
        return key;
    };

    const auto push_node = [&](SearchNode node) {
        const auto key = state_key(node);
        const auto it = best.find(key);
        if (it != best.end()) {
            const SearchNode& cur = arena[it->second];
            if (node.score < cur.score) return;
            if (node.score == cur.score) {
                arena.push_back(node);
                if (!lex_less(arena, static_cast<std::int64_t>(arena.size()) - 1, it->second)) {
                    arena.pop_back();
                    return;
                }
                it->second = static_cast<std::int64_t>(arena.size()) - 1;
                pq.emplace(-node.score, seq++, it->second);
                return;
            }
        }
        arena.push_back(std::move(node));
        best[key] = static_cast<std::int64_t>(arena.size()) - 1;
        pq.emplace(-arena.back().score, seq++, static_cast<std::int64_t>(arena.size()) - 1);
    };

    for (const auto& q0 : combos) {
        SearchNode n;
        n.stage = 0;
        n.q = q0;
        push_node(std::move(n));
    }

    double goal_score = -kInf;
    std::vector<std::int64_t> goals;

    while (!pq.empty()) {
        const auto [neg_score, order, idx] = pq.top();
        pq.pop();
        (void)order;
        const SearchNode node = arena[idx];
        if (best.at(state_key(node)) != idx) continue;  // superseded
        if (!goals.empty() && -neg_score < goal_score) break;
        ++result.iterations;
        if (node.stage == n_events) {
            goal_score = node.score;
            goals.push_back(idx);
            continue;
        }

        const ChangepointEvent& ev = events[node.stage];
        for (int input = 0; input <= n_sys; ++input) {
            std::vector<std::int64_t> dwell = node.tau;
            if (node.stage == 0) {
                dwell.resize(n_sys);
                for (int s = 0; s < n_sys; ++s)
                    dwell[s] = optimistic_tau0(tables[s], node.q[s], ev, input == s + 1, options.tau_max);
            }
            const double delta = stage_cost(node.q, dwell, ev, input, tables, specs, options);
            if (delta == -kInf) continue;

            SearchNode child;
            child.stage = node.stage + 1;
            child.q = node.q;
            child.tau.resize(n_sys);
            for (int s = 0; s < n_sys; ++s) {
                if (input == s + 1) {
                    child.q[s] += ev.sign;
                    child.tau[s] = 0;
                } else {
                    child.tau[s] = std::min(dwell[s] + ev.gap, tables[s].dwell_cap(child.q[s]));
                }
            }
            child.score = node.score + delta;
            child.parent = idx;
            child.input = input;
            push_node(std::move(child));
        }
    }

    if (goals.empty()) throw DataError("no feasible assignment");
    std::int64_t winner = goals.front();
    for (std::size_t i = 1; i < goals.size(); ++i)
        if (lex_less(arena, goals[i], winner)) winner = goals[i];

    result.inputs = path_inputs(arena, winner);
    result.score = arena[winner].score;
    result.rejections = static_cast<int>(std::count(result.inputs.begin(), result.inputs.end(), 0));

    // Configuration of every system over the intervals, from the winning path.
    result.interval_configs.assign(n_sys, std::vector<int>(n_events + 1, 0));
    {
        std::vector<std::int64_t> chain;
        for (std::int64_t i = winner; i >= 0; i = arena[i].parent) chain.push_back(i);
        std::reverse(chain.begin(), chain.end());
        for (std::size_t step = 0; step < chain.size(); ++step)
            for (int s = 0; s < n_sys; ++s)
                result.interval_configs[s][step] = arena[chain[step]].q[s];
    }
    return result;
}

void decompose_frictions(const std::vector<double>& interval_dry, AssignmentResult& result) {
    const int n_events = static_cast<int>(result.inputs.size());
    const int n_sys = static_cast<int>(result.interval_configs.size());
    if (static_cast<int>(interval_dry.size()) != n_events + 1)
        throw ValidationError("decompose_frictions: need one dry coefficient per interval");

    result.base_dry = interval_dry.front();
    result.config_seq.assign(n_sys, {});
    result.value_seq.assign(n_sys, {});
    result.recon_residual.assign(interval_dry.size(), 0.0);
    for (int s = 0; s < n_sys; ++s) {
        result.config_seq[s].push_back(result.interval_configs[s][0]);
        result.value_seq[s].push_back(0.0);
    }

    double lost = 0.0;
    std::vector<double> current(n_sys, 0.0);
    for (int i = 1; i <= n_events; ++i) {
        const double delta = interval_dry[i] - interval_dry[i - 1];
        const int input = result.inputs[i - 1];
        if (input == 0) {
            lost += delta;
        } else {
            const int s = input - 1;
            current[s] += delta;
            result.value_seq[s].push_back(current[s]);
            result.config_seq[s].push_back(result.interval_configs[s][i]);
        }
        result.recon_residual[i] = lost;
    }

    for (int s = 0; s < n_sys; ++s) {
        const double low = *std::min_element(result.value_seq[s].begin(), result.value_seq[s].end());
        for (double& v : result.value_seq[s]) v -= low;
        result.base_dry += low;
    }
}

}  // namespace rwa
