#pragma once

#include <string>

namespace cpd {

/// Nonempty subsets A of the component set {1, ..., d} are identified with
/// bitmasks (bit j-1 set <=> component j in A). Subset-indexed vectors use
/// the canonical order mask = 1, 2, ..., 2^d - 1, i.e. slot mask - 1.
using SubsetMask = unsigned;

inline int subset_count(int d) { return (1 << d) - 1; }

inline SubsetMask full_set(int d) { return (1u << d) - 1u; }

inline std::string subset_name(SubsetMask mask, int d) {
    std::string out = "{";
    bool first = true;
    for (int j = 0; j < d; ++j) {
        if (mask & (1u << j)) {
            if (!first) out += ',';
            out += std::to_string(j + 1);
            first = false;
        }
    }
    out += '}';
    return out;
}

}  // namespace cpd
