// Unordered rooted trees with density gamma(t), used as an independent
// source of order conditions via Butcher's theory.
#pragma once

#include "rk/rational.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace rk {

class RootedTree {
public:
    RootedTree() = default;  // single node

    explicit RootedTree(std::vector<RootedTree> children) : children_(std::move(children)) {
        std::sort(children_.begin(), children_.end(),
                  [](const RootedTree& a, const RootedTree& b) { return a.encode() < b.encode(); });
    }

    const std::vector<RootedTree>& children() const { return children_; }

    unsigned order() const {
        unsigned n = 1;
        for (const auto& ch : children_) n += ch.order();
        return n;
    }

    // gamma(single node) = 1; gamma(t) = order(t) * prod gamma(subtrees).
    mpz_class density() const {
        if (children_.empty()) return 1;
        mpz_class g = order();
        for (const auto& ch : children_) g *= ch.density();
        return g;
    }

    // Canonical encoding: "." for a leaf, "[" + sorted child encodings + "]".
    std::string encode() const {
        if (children_.empty()) return ".";
        std::string s = "[";
        for (const auto& ch : children_) s += ch.encode();
        s += "]";
        return s;
    }

    bool operator==(const RootedTree& other) const { return encode() == other.encode(); }

private:
    std::vector<RootedTree> children_;
};

namespace detail {

// All canonical multisets (as non-decreasing index sequences into `pool`)
// whose orders sum to `target`.
inline void multisets_with_order(const std::vector<RootedTree>& pool, unsigned target,
                                 std::size_t min_index, std::vector<RootedTree>& current,
                                 std::vector<std::vector<RootedTree>>& out) {
    if (target == 0) {
        out.push_back(current);
        return;
    }
    for (std::size_t i = min_index; i < pool.size(); ++i) {
        unsigned o = pool[i].order();
        if (o > target) continue;
        current.push_back(pool[i]);
        multisets_with_order(pool, target - o, i, current, out);
        current.pop_back();
    }
}

}  // namespace detail

// All non-isomorphic rooted trees of each exact order 1..max_order.
// Counts per order: 1, 1, 2, 4, 9, ...
inline std::vector<std::vector<RootedTree>> trees_by_order(unsigned max_order) {
    std::vector<std::vector<RootedTree>> by_order;  // by_order[n-1] = trees of order n
    std::vector<RootedTree> pool;
    for (unsigned n = 1; n <= max_order; ++n) {
        std::vector<RootedTree> level;
        if (n == 1) {
            level.emplace_back();
        } else {
            std::vector<std::vector<RootedTree>> multisets;
            std::vector<RootedTree> current;
            detail::multisets_with_order(pool, n - 1, 0, current, multisets);
            for (auto& ms : multisets) level.emplace_back(std::move(ms));
            std::sort(level.begin(), level.end(), [](const RootedTree& a, const RootedTree& b) {
                return a.encode() < b.encode();
            });
            level.erase(std::unique(level.begin(), level.end()), level.end());
        }
        for (const auto& t : level) pool.push_back(t);
        by_order.push_back(std::move(level));
    }
    return by_order;
}

// Flat list of all trees of order <= max_order, sorted by (order, encoding).
inline std::vector<RootedTree> enumerate_trees(unsigned max_order) {
    std::vector<RootedTree> out;
    for (auto& level : trees_by_order(max_order))
        for (auto& t : level) out.push_back(std::move(t));
    return out;
}

}  // namespace rk
