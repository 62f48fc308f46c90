#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

#include "error.hpp"
#include "measures.hpp"
#include "refinement.hpp"

namespace sdmcts {

enum class UcbKind { ucb1, uct, sp_mcts, ucb1_tuned, dfs_uct };
enum class DedupKind { none, lo, pu };
enum class RolloutKind { naive, direct_freq, large_freq };
enum class RewardAgg { terminal, random, max, mean, top_k_mean };
enum class MemoryKind { none, all, top_k };
enum class UpdateKind { max, mean, top_k_mean };

struct SearchConfig {
    UcbKind ucb = UcbKind::sp_mcts;
    double cp = 1.0 / std::sqrt(2.0);
    double c = 0.5;  // SP-MCTS exploration weight
    double d = 1.0;  // SP-MCTS variance bonus
    ExpandKind expand = ExpandKind::label;
    DedupKind dedup = DedupKind::pu;
    RolloutKind rollout = RolloutKind::direct_freq;
    std::size_t path_length = 20;
    std::size_t jump_length = 30;
    RewardAgg reward = RewardAgg::max;
    std::size_t reward_k = 2;
    MemoryKind memory = MemoryKind::top_k;
    std::size_t memory_k = 1;
    UpdateKind update = UpdateKind::max;
    std::size_t update_k = 2;

    std::size_t budget = 1000;
    std::size_t min_support = 10;
    std::size_t max_length = 5;
    MeasureSpec measure;
    std::uint64_t seed = 0;

    // Result filtering, also used for checkpoint snapshots.
    double theta = 0.5;
    std::size_t max_output = 50;
    std::size_t checkpoint_every = 1000;

    void validate() const {
        if (budget < 1) throw ConfigError("iteration budget must be >= 1");
        if (min_support < 1) throw ConfigError("minimum support must be >= 1");
        if (max_length < 1) throw ConfigError("maximum description length must be >= 1");
        if (path_length < 1 || jump_length < 1) throw ConfigError("path and jump lengths must be >= 1");
        if (reward_k < 1 || memory_k < 1 || update_k < 1) throw ConfigError("top-k parameters must be >= 1");
        if (!(cp > 0) || !(c >= 0) || !(d >= 0)) throw ConfigError("UCB constants must be positive");
        if (!(theta > 0 && theta <= 1)) throw ConfigError("theta must lie in (0, 1]");
        if (max_output < 1) throw ConfigError("maximum output size must be >= 1");
        if (checkpoint_every < 1) throw ConfigError("checkpoint interval must be >= 1");
        if (ucb == UcbKind::dfs_uct && dedup != DedupKind::lo) throw ConfigError("dfs-uct requires lectic-order dedup");
    }
};

namespace detail {
inline std::string norm_token(std::string s) {
    for (auto& ch : s) ch = ch == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}
// "top-<n><suffix>" -> n; "top-k<suffix>" -> fallback; else 0.
inline std::size_t top_count(const std::string& s, const std::string& suffix, std::size_t fallback) {
    if (s.rfind("top-", 0) != 0 || s.size() < 4 + suffix.size() || s.compare(s.size() - suffix.size(), suffix.size(), suffix))
        return 0;
    std::string mid = s.substr(4, s.size() - 4 - suffix.size());
    if (mid == "k") return fallback;
    std::size_t n = 0;
    auto res = std::from_chars(mid.data(), mid.data() + mid.size(), n);
    if (mid.empty() || res.ec != std::errc{} || res.ptr != mid.data() + mid.size() || n == 0) return 0;
    return n;
}
}  // namespace detail

inline UcbKind parse_ucb(const std::string& v) {
    auto s = detail::norm_token(v);
    if (s == "ucb1") return UcbKind::ucb1;
    if (s == "uct") return UcbKind::uct;
    if (s == "sp-mcts" || s == "spmcts") return UcbKind::sp_mcts;
    if (s == "ucb1-tuned") return UcbKind::ucb1_tuned;
    if (s == "dfs-uct") return UcbKind::dfs_uct;
    throw ConfigError("unknown ucb '" + v + "'");
}

inline ExpandKind parse_expand(const std::string& v) {
    auto s = detail::norm_token(v);
    if (s == "direct") return ExpandKind::direct;
    if (s == "gen") return ExpandKind::gen;
    if (s == "label") return ExpandKind::label;
    throw ConfigError("unknown expand policy '" + v + "'");
}

inline DedupKind parse_dedup(const std::string& v) {
    auto s = detail::norm_token(v);
    if (s == "none") return DedupKind::none;
    if (s == "lo") return DedupKind::lo;
    if (s == "pu") return DedupKind::pu;
    throw ConfigError("unknown dedup policy '" + v + "'");
}

inline RolloutKind parse_rollout(const std::string& v) {
    auto s = detail::norm_token(v);
    if (s == "naive") return RolloutKind::naive;
    if (s == "direct-freq") return RolloutKind::direct_freq;
    if (s == "large-freq") return RolloutKind::large_freq;
    throw ConfigError("unknown rollout policy '" + v + "'");
}

/// Accepts terminal|random|max|mean|top-k-mean|top-<n>-mean; `k` is used for top-k-mean.
inline RewardAgg parse_reward(const std::string& v, std::size_t k, std::size_t& k_out) {
    auto s = detail::norm_token(v);
    if (s == "terminal") return RewardAgg::terminal;
    if (s == "random") return RewardAgg::random;
    if (s == "max") return RewardAgg::max;
    if (s == "mean") return RewardAgg::mean;
    if (auto n = detail::top_count(s, "-mean", k)) {
        k_out = n;
        return RewardAgg::top_k_mean;
    }
    throw ConfigError("unknown reward aggregation '" + v + "'");
}

/// Accepts none|all|top-k|top-<n>.
inline MemoryKind parse_memory(const std::string& v, std::size_t k, std::size_t& k_out) {
    auto s = detail::norm_token(v);
    if (s == "none") return MemoryKind::none;
    if (s == "all") return MemoryKind::all;
    if (auto n = detail::top_count(s, "", k)) {
        k_out = n;
        return MemoryKind::top_k;
    }
    throw ConfigError("unknown memory policy '" + v + "'");
}

/// Accepts max|mean|top-k-mean|top-<n>-mean.
inline UpdateKind parse_update(const std::string& v, std::size_t k, std::size_t& k_out) {
    auto s = detail::norm_token(v);
    if (s == "max") return UpdateKind::max;
    if (s == "mean") return UpdateKind::mean;
    if (auto n = detail::top_count(s, "-mean", k)) {
        k_out = n;
        return UpdateKind::top_k_mean;
    }
    throw ConfigError("unknown update policy '" + v + "'");
}

inline const char* to_string(UcbKind k) {
    switch (k) {
        case UcbKind::ucb1: return "ucb1";
        case UcbKind::uct: return "uct";
        case UcbKind::sp_mcts: return "sp-mcts";
        case UcbKind::ucb1_tuned: return "ucb1-tuned";
        case UcbKind::dfs_uct: return "dfs-uct";
    }
    return "?";
}
inline const char* to_string(ExpandKind k) {
    switch (k) {
        case ExpandKind::direct: return "direct";
        case ExpandKind::gen: return "gen";
        case ExpandKind::label: return "label";
    }
    return "?";
}
inline const char* to_string(DedupKind k) {
    switch (k) {
        case DedupKind::none: return "none";
        case DedupKind::lo: return "LO";
        case DedupKind::pu: return "PU";
    }
    return "?";
}
inline const char* to_string(RolloutKind k) {
    switch (k) {
        case RolloutKind::naive: return "naive";
        case RolloutKind::direct_freq: return "direct-freq";
        case RolloutKind::large_freq: return "large-freq";
    }
    return "?";
}
inline std::string to_string(RewardAgg r, std::size_t k) {
    switch (r) {
        case RewardAgg::terminal: return "terminal";
        case RewardAgg::random: return "random";
        case RewardAgg::max: return "max";
        case RewardAgg::mean: return "mean";
        case RewardAgg::top_k_mean: return "top-" + std::to_string(k) + "-mean";
    }
    return "?";
}
inline std::string to_string(MemoryKind m, std::size_t k) {
    switch (m) {
        case MemoryKind::none: return "none";
        case MemoryKind::all: return "all";
        case MemoryKind::top_k: return "top-" + std::to_string(k);
    }
    return "?";
}
inline std::string to_string(UpdateKind u, std::size_t k) {
    switch (u) {
        case UpdateKind::max: return "max";
        case UpdateKind::mean: return "mean";
        case UpdateKind::top_k_mean: return "top-" + std::to_string(k) + "-mean";
    }
    return "?";
}

}  // namespace sdmcts
