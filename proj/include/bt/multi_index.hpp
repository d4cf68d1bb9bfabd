#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace bt {

using MultiIndex = std::vector<int>;

inline int order(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

// Enumerate all indices of the given length with |a| == total, lexicographic
// from the first slot down. The order is fixed; reports and matrix layouts
// depend on it staying stable.
inline void for_each_index_of_order(int len, int total,
                                    const std::function<void(const MultiIndex&)>& fn) {
    MultiIndex a(len, 0);
    std::function<void(int, int)> rec = [&](int slot, int rest) {
        if (slot == len - 1) {
            a[slot] = rest;
            fn(a);
            return;
        }
        for (int v = rest; v >= 0; --v) {
            a[slot] = v;
            rec(slot + 1, rest - v);
        }
    };
    if (len == 0) return;
    rec(0, total);
}

inline std::vector<MultiIndex> indices_of_order(int len, int total) {
    std::vector<MultiIndex> out;
    for_each_index_of_order(len, total, [&](const MultiIndex& a) { out.push_back(a); });
    return out;
}

// All indices with |a| <= cap, grouped by increasing order.
inline std::vector<MultiIndex> indices_up_to_order(int len, int cap) {
    std::vector<MultiIndex> out;
    for (int k = 0; k <= cap; ++k) {
        auto level = indices_of_order(len, k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

// All indices with every entry <= cap (box enumeration).
inline std::vector<MultiIndex> indices_with_entries_up_to(int len, int cap) {
    std::vector<MultiIndex> out;
    MultiIndex a(len, 0);
    std::function<void(int)> rec = [&](int slot) {
        if (slot == len) {
            out.push_back(a);
            return;
        }
        for (int v = 0; v <= cap; ++v) {
            a[slot] = v;
            rec(slot + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace bt
