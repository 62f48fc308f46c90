#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "config.hpp"
#include "dataset.hpp"
#include "description.hpp"
#include "error.hpp"
#include "exploration_rate.hpp"
#include "measures.hpp"
#include "pattern_pool.hpp"
#include "random.hpp"
#include "refinement.hpp"
#include "result_set.hpp"

namespace sdmcts {

/// Statistics a UCB needs about one parent/child edge.
struct UcbInputs {
    double q = 0;          // child value
    double n_parent = 0;   // parent visits
    double n_child = 0;    // child visits
    double variance = 0;   // variance of the child's rewards
    double rho_parent = 1;
    double rho_child = 1;
};

inline double ucb_score(UcbKind kind, const UcbInputs& in, const SearchConfig& cfg) {
    if (in.n_child <= 0) return std::numeric_limits<double>::infinity();
    const double log_n = std::log(in.n_parent);
    switch (kind) {
        case UcbKind::ucb1: return in.q + 2 * 0.5 * std::sqrt(2 * log_n / in.n_child);
        case UcbKind::uct: return in.q + 2 * cfg.cp * std::sqrt(2 * log_n / in.n_child);
        case UcbKind::sp_mcts:
            return in.q + cfg.c * std::sqrt(2 * log_n / in.n_child) + std::sqrt(in.variance + cfg.d / in.n_child);
        case UcbKind::ucb1_tuned: {
            double v = std::min(0.25, in.variance + std::sqrt(2 * log_n / in.n_child));
            return in.q + std::sqrt(log_n / in.n_child * v);
        }
        case UcbKind::dfs_uct:
            return in.q + 2 * cfg.cp *
                              std::sqrt(2 * std::log(in.n_parent * in.rho_parent) / (in.n_child * in.rho_child));
    }
    return in.q;
}

struct TreeNode {
    Subgroup sg;
    double phi = 0;  // raw quality
    std::optional<Provenance> via;
    double rho = 1;

    std::size_t n = 0;
    double q = 0;
    double sum = 0;    // sum of back-propagated rewards
    double sumsq = 0;
    double max = 0;
    std::vector<double> top;  // largest rewards, descending

    std::vector<std::uint32_t> parents;
    std::vector<std::uint32_t> children;
    std::vector<Refinement> pending;
    bool materialized = false;
    bool closed = false;
    std::uint64_t stamp = 0;

    bool fully_expanded() const noexcept { return materialized && pending.empty(); }
    bool terminal() const noexcept { return fully_expanded() && children.empty(); }

    /// Population variance of the rewards seen, 0 below two samples.
    double variance() const noexcept {
        if (n < 2) return 0;
        double m = sum / static_cast<double>(n);
        double v = sumsq / static_cast<double>(n) - m * m;
        return v > 0 ? v : 0;
    }
};

/// Folds reward `delta` into `node` according to the update policy.
inline void apply_update(TreeNode& node, double delta, UpdateKind policy, std::size_t k) {
    const double n = static_cast<double>(node.n);
    if (node.n == 0 || delta > node.max) node.max = delta;
    auto pos = std::upper_bound(node.top.begin(), node.top.end(), delta, std::greater<>());
    if (static_cast<std::size_t>(pos - node.top.begin()) < k) {
        node.top.insert(pos, delta);
        if (node.top.size() > k) node.top.pop_back();
    }
    switch (policy) {
        case UpdateKind::mean: node.q = (n * node.q + delta) / (n + 1); break;
        case UpdateKind::max: node.q = node.max; break;
        case UpdateKind::top_k_mean: {
            double s = 0;
            for (double v : node.top) s += v;
            node.q = s / static_cast<double>(node.top.size());
            break;
        }
    }
    node.n += 1;
    node.sum += delta;
    node.sumsq += delta * delta;
}

/// Mean of the k largest values (all of them when fewer than k).
inline double top_k_mean(std::vector<double> values, std::size_t k) {
    if (values.empty()) return 0;
    k = std::min(k, values.size());
    std::partial_sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end(), std::greater<>());
    double s = 0;
    for (std::size_t i = 0; i < k; ++i) s += values[i];
    return s / static_cast<double>(k);
}

/// Aggregates the normalized rewards of the evaluated path nodes. For
/// terminal and random aggregation only one node is evaluated, so `values`
/// holds a single element.
inline double aggregate_rewards(RewardAgg agg, std::size_t k, const std::vector<double>& values) {
    if (values.empty()) return 0;
    switch (agg) {
        case RewardAgg::terminal:
        case RewardAgg::random: return values.back();
        case RewardAgg::max: return *std::max_element(values.begin(), values.end());
        case RewardAgg::mean: {
            double s = 0;
            for (double v : values) s += v;
            return s / static_cast<double>(values.size());
        }
        case RewardAgg::top_k_mean: return top_k_mean(values, k);
    }
    return 0;
}

struct EvaluatedPattern {
    Subgroup sg;
    double phi = 0;  // raw
};

/// Which evaluated patterns of one simulation enter the pool.
inline std::vector<std::size_t> memory_selection(MemoryKind policy, std::size_t k,
                                                 const std::vector<EvaluatedPattern>& evaluated) {
    std::vector<std::size_t> idx;
    if (policy == MemoryKind::none) return idx;
    for (std::size_t i = 0; i < evaluated.size(); ++i) idx.push_back(i);
    if (policy == MemoryKind::top_k && idx.size() > k) {
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return evaluated[a].phi > evaluated[b].phi; });
        idx.resize(k);
    }
    return idx;
}

struct RolloutResult {
    double delta = 0;
    std::vector<EvaluatedPattern> evaluated;
};

struct Checkpoint {
    std::size_t iterations = 0;
    double elapsed_ms = 0;
    double diversity = 0;
    double best_phi = 0;
    std::size_t pool_size = 0;
};

using CheckpointFn = std::function<void(const Checkpoint&)>;

class MctsEngine {
  public:
    MctsEngine(const Dataset& data, SearchConfig cfg)
        : data_(data), cfg_(std::move(cfg)), rng_(derive_seed(cfg_.seed, seed_stream::search)) {
        cfg_.validate();
        if (cfg_.measure.target >= data_.label_count()) throw ConfigError("target label out of range");
        if (cfg_.min_support > data_.object_count())
            throw ConfigError("minimum support exceeds the number of objects");
        positives_ = &data_.label_set(cfg_.measure.target);
        TreeNode root;
        root.sg = {Description{}, data_.all_objects()};
        root.phi = evaluate(cfg_.measure, root.sg, data_);
        nodes_.push_back(std::move(root));
    }

    const Dataset& data() const noexcept { return data_; }
    const SearchConfig& config() const noexcept { return cfg_; }
    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    const TreeNode& node(std::uint32_t i) const { return nodes_.at(i); }
    const PatternPool& pool() const noexcept { return pool_; }
    PatternPool take_pool() { return std::move(pool_); }
    std::size_t iterations() const noexcept { return iterations_; }
    /// Tree nodes excluding the root.
    std::size_t created_nodes() const noexcept { return nodes_.size() - 1; }
    bool exhausted() const noexcept { return nodes_[0].closed; }

    /// Descends by best UCB through fully expanded nodes and returns the
    /// first node with unexpanded candidates. Exhausted subtrees are closed
    /// on the way and skipped; std::nullopt once the whole tree is closed.
    std::optional<std::uint32_t> select() {
        while (!nodes_[0].closed) {
            std::uint32_t cur = 0;
            while (true) {
                materialize(cur);
                if (!nodes_[cur].pending.empty()) return cur;
                auto best = best_child(cur);
                if (!best) {
                    close(cur);
                    break;
                }
                cur = *best;
            }
        }
        return std::nullopt;
    }

    /// Turns one random pending candidate of `sel` into a child node.
    std::uint32_t expand(std::uint32_t sel) {
        materialize(sel);
        auto& pending = nodes_[sel].pending;
        if (pending.empty()) throw std::logic_error("expand called on a fully expanded node");
        std::size_t pick = uniform_index(rng_, pending.size());
        Refinement r = pending[pick];
        pending[pick] = pending.back();
        pending.pop_back();

        Subgroup child = apply(nodes_[sel].sg, r, data_);
        if (cfg_.dedup == DedupKind::pu) {
            auto key = canonical_key(child.description);
            if (auto it = registry_.find(key); it != registry_.end()) {
                std::uint32_t j = it->second;
                auto& kids = nodes_[sel].children;
                if (std::find(kids.begin(), kids.end(), j) == kids.end()) {
                    kids.push_back(j);
                    nodes_[j].parents.push_back(sel);
                }
                maybe_close(sel);
                return j;
            }
            registry_.emplace(std::move(key), static_cast<std::uint32_t>(nodes_.size()));
        }
        TreeNode nd;
        nd.phi = evaluate(cfg_.measure, child, data_);
        nd.via = r.via;
        if (cfg_.ucb == UcbKind::dfs_uct) nd.rho = rho_norm_value(child.description, nd.via, data_);
        nd.parents.push_back(sel);
        pool_.add(child, nd.phi, from_tree);
        nd.sg = std::move(child);
        auto j = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back(std::move(nd));
        nodes_[sel].children.push_back(j);
        return j;
    }

    /// Random refinement path from `start` and its aggregated normalized reward.
    RolloutResult rollout(std::uint32_t start) {
        std::vector<Subgroup> path{nodes_[start].sg};
        Subgroup cur = nodes_[start].sg;
        switch (cfg_.rollout) {
            case RolloutKind::naive:
                for (std::size_t i = 0; i < cfg_.path_length && random_direct_step(cur); ++i) path.push_back(cur);
                break;
            case RolloutKind::direct_freq:
                while (random_direct_step(cur)) path.push_back(cur);
                break;
            case RolloutKind::large_freq:
                while (true) {
                    std::size_t jumps = 1 + uniform_index(rng_, cfg_.jump_length), done = 0;
                    while (done < jumps && random_direct_step(cur)) ++done;
                    if (done == 0) break;
                    path.push_back(cur);
                    if (done < jumps) break;
                }
                break;
        }

        RolloutResult out;
        std::vector<std::size_t> chosen;
        if (cfg_.reward == RewardAgg::terminal) chosen.push_back(path.size() - 1);
        else if (cfg_.reward == RewardAgg::random) chosen.push_back(uniform_index(rng_, path.size()));
        else
            for (std::size_t i = 0; i < path.size(); ++i) chosen.push_back(i);
        std::vector<double> rewards;
        for (auto i : chosen) {
            double phi = evaluate(cfg_.measure, path[i], data_);
            rewards.push_back(normalize(cfg_.measure, phi));
            out.evaluated.push_back({std::move(path[i]), phi});
        }
        out.delta = aggregate_rewards(cfg_.reward, cfg_.reward_k, rewards);
        return out;
    }

    void memorize(const std::vector<EvaluatedPattern>& evaluated) {
        for (auto i : memory_selection(cfg_.memory, cfg_.memory_k, evaluated))
            pool_.add(evaluated[i].sg, evaluated[i].phi, from_memory);
    }

    /// Back-propagates `delta` from `from` through every parent link; each
    /// ancestor is updated once even when reachable along several paths.
    void update(std::uint32_t from, double delta) {
        ++stamp_;
        std::vector<std::uint32_t> queue{from};
        nodes_[from].stamp = stamp_;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            auto& nd = nodes_[queue[head]];
            apply_update(nd, delta, cfg_.update, cfg_.update_k);
            for (auto p : nd.parents)
                if (nodes_[p].stamp != stamp_) {
                    nodes_[p].stamp = stamp_;
                    queue.push_back(p);
                }
        }
    }

    /// One select/expand/rollout/memorize/update iteration; false once the
    /// tree is exhausted.
    bool step() {
        auto sel = select();
        if (!sel) return false;
        auto child = expand(*sel);
        auto rr = rollout(child);
        memorize(rr.evaluated);
        update(child, rr.delta);
        ++iterations_;
        return true;
    }

    /// Runs until the budget is spent or the tree is exhausted. Checkpoints
    /// fire every `checkpoint_every` iterations and once more at the end
    /// when the final count is not a multiple of it.
    void run(const CheckpointFn& on_checkpoint = {}) {
        auto t0 = std::chrono::steady_clock::now();
        auto elapsed = [&] {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        };
        auto fire = [&] {
            if (!on_checkpoint) return;
            Checkpoint cp{iterations_, elapsed(), 0, pool_.best_phi(), pool_.size()};
            for (const auto& e : filter(pool_, cfg_.theta, cfg_.max_output).entries) cp.diversity += e.phi;
            on_checkpoint(cp);
        };
        while (iterations_ < cfg_.budget && step())
            if (iterations_ % cfg_.checkpoint_every == 0) fire();
        if (iterations_ == cfg_.budget) select();  // detects exhaustion reached on the last iteration
        if (iterations_ % cfg_.checkpoint_every != 0) fire();
        elapsed_ms_ = elapsed();
    }

    double elapsed_ms() const noexcept { return elapsed_ms_; }

  private:
    void materialize(std::uint32_t i) {
        auto& nd = nodes_[i];
        if (nd.materialized) return;
        RefineOptions opt{cfg_.expand, {cfg_.min_support, cfg_.max_length}, positives_, cfg_.dedup == DedupKind::lo,
                          nd.via};
        nd.pending = refinements(nd.sg, data_, opt);
        nd.materialized = true;
    }

    std::optional<std::uint32_t> best_child(std::uint32_t i) {
        const auto& nd = nodes_[i];
        std::optional<std::uint32_t> best;
        double best_score = -std::numeric_limits<double>::infinity();
        std::size_t ties = 0;
        for (auto c : nd.children) {
            const auto& ch = nodes_[c];
            if (ch.closed) continue;
            UcbInputs in{ch.q, static_cast<double>(nd.n), static_cast<double>(ch.n), ch.variance(), nd.rho, ch.rho};
            double s = ucb_score(cfg_.ucb, in, cfg_);
            if (!best || s > best_score) {
                best = c, best_score = s, ties = 1;
            } else if (s == best_score && uniform_index(rng_, ++ties) == 0) {
                best = c;
            }
        }
        return best;
    }

    void maybe_close(std::uint32_t i) {
        const auto& nd = nodes_[i];
        if (nd.closed || !nd.fully_expanded()) return;
        for (auto c : nd.children)
            if (!nodes_[c].closed) return;
        close(i);
    }

    void close(std::uint32_t i) {
        std::vector<std::uint32_t> stack{i};
        nodes_[i].closed = true;
        while (!stack.empty()) {
            auto cur = stack.back();
            stack.pop_back();
            for (auto p : nodes_[cur].parents) {
                auto& pn = nodes_[p];
                if (pn.closed || !pn.fully_expanded()) continue;
                bool all = std::all_of(pn.children.begin(), pn.children.end(),
                                       [&](std::uint32_t c) { return nodes_[c].closed; });
                if (all) {
                    pn.closed = true;
                    stack.push_back(p);
                }
            }
        }
    }

    // Applies a uniformly random frequent direct refinement to `cur`
    // (within max_length); false when there is none.
    bool random_direct_step(Subgroup& cur) {
        actions_.clear();
        const std::size_t supp = cur.extent.count();
        const std::size_t len = cur.description.effective_length(data_);
        const auto members = cur.extent.indices();
        for (std::uint32_t a = 0; a < data_.attribute_count(); ++a) {
            const auto& meta = data_.attribute(a);
            auto col = data_.column(a);
            if (!meta.is_numerical()) {
                if (cur.description.find(a)) continue;
                if (len + (meta.domain_size() > 1 ? 1 : 0) > cfg_.max_length) continue;
                hist_.assign(meta.domain_size(), 0);
                for (auto o : members) ++hist_[col[o]];
                for (ValueCode v = 0; v < meta.domain_size(); ++v)
                    if (hist_[v] >= cfg_.min_support) actions_.push_back({a, ChangeKind::nominal, v});
                continue;
            }
            auto [lo, hi] = cur.description.interval(a, data_);
            if (lo == hi) continue;
            if (!cur.description.find(a) && len + 1 > cfg_.max_length) continue;
            std::size_t at_lo = 0, at_hi = 0;
            for (auto o : members) {
                at_lo += col[o] == lo;
                at_hi += col[o] == hi;
            }
            if (supp - at_lo >= cfg_.min_support) actions_.push_back({a, ChangeKind::left, 0});
            if (supp - at_hi >= cfg_.min_support) actions_.push_back({a, ChangeKind::right, 0});
        }
        if (actions_.empty()) return false;
        const auto act = actions_[uniform_index(rng_, actions_.size())];
        if (act.kind == ChangeKind::nominal) {
            cur.description = cur.description.with({act.attribute, act.value, act.value}, data_);
            cur.extent &= data_.value_set(act.attribute, act.value);
        } else {
            auto [lo, hi] = cur.description.interval(act.attribute, data_);
            bool left = act.kind == ChangeKind::left;
            cur.extent.subtract(data_.value_set(act.attribute, left ? lo : hi));
            Restriction r{act.attribute, left ? lo + 1 : lo, left ? hi : hi - 1};
            cur.description = cur.description.with(r, data_);
        }
        return true;
    }

    struct RolloutAction {
        std::uint32_t attribute;
        ChangeKind kind;
        ValueCode value;
    };

    const Dataset& data_;
    SearchConfig cfg_;
    Rng rng_;
    const ObjectSet* positives_ = nullptr;
    std::vector<TreeNode> nodes_;
    std::unordered_map<DescriptionKey, std::uint32_t> registry_;
    PatternPool pool_;
    std::size_t iterations_ = 0;
    std::uint64_t stamp_ = 0;
    double elapsed_ms_ = 0;
    std::vector<std::size_t> hist_;
    std::vector<RolloutAction> actions_;
};

struct SearchResult {
    PatternPool pool;
    std::size_t iterations = 0;
    std::size_t created_nodes = 0;
    bool exhausted = false;
    double elapsed_ms = 0;
};

inline SearchResult mcts_search(const Dataset& data, const SearchConfig& cfg, const CheckpointFn& on_checkpoint = {}) {
    MctsEngine engine(data, cfg);
    engine.run(on_checkpoint);
    SearchResult r;
    r.iterations = engine.iterations();
    r.created_nodes = engine.created_nodes();
    r.exhausted = engine.exhausted();
    r.elapsed_ms = engine.elapsed_ms();
    r.pool = engine.take_pool();
    return r;
}

}  // namespace sdmcts
