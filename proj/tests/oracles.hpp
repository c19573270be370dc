#pragma once

// Brute-force reference implementations used only by the tests. None of these call into the
// code paths they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "skyrank/dataset.hpp"
#include "skyrank/roughset.hpp"

namespace oracle {

using Rows = std::vector<std::vector<std::uint32_t>>;

/// Equivalence classes by pairwise comparison: O(n^2), classes ordered by smallest member.
inline std::vector<std::vector<std::uint32_t>> partition(const Rows& rows, const std::vector<std::size_t>& attrs) {
    const std::size_t n = rows.size();
    std::vector<int> assigned(n, -1);
    std::vector<std::vector<std::uint32_t>> classes;
    for (std::size_t i = 0; i < n; ++i) {
        if (assigned[i] >= 0) {
            continue;
        }
        assigned[i] = static_cast<int>(classes.size());
        classes.push_back({static_cast<std::uint32_t>(i)});
        for (std::size_t k = i + 1; k < n; ++k) {
            bool same = true;
            for (const auto a : attrs) {
                same = same && rows[i][a] == rows[k][a];
            }
            if (same) {
                assigned[k] = assigned[i];
                classes.back().push_back(static_cast<std::uint32_t>(k));
            }
        }
    }
    return classes;
}

/// { x : [x] subset of target } evaluated per element.
inline std::vector<std::uint32_t> lower(const std::vector<std::vector<std::uint32_t>>& classes,
                                        const std::set<std::uint32_t>& target) {
    std::set<std::uint32_t> out;
    for (const auto& c : classes) {
        if (std::all_of(c.begin(), c.end(), [&](std::uint32_t i) { return target.count(i) > 0; })) {
            out.insert(c.begin(), c.end());
        }
    }
    return {out.begin(), out.end()};
}

/// { x : [x] intersects target }.
inline std::vector<std::uint32_t> upper(const std::vector<std::vector<std::uint32_t>>& classes,
                                        const std::set<std::uint32_t>& target) {
    std::set<std::uint32_t> out;
    for (const auto& c : classes) {
        if (std::any_of(c.begin(), c.end(), [&](std::uint32_t i) { return target.count(i) > 0; })) {
            out.insert(c.begin(), c.end());
        }
    }
    return {out.begin(), out.end()};
}

/// Dependency degree straight from the definition: a row is in POS iff every row that agrees
/// with it on attrs carries the same decision.
inline double gamma(const Rows& rows, const std::vector<std::uint8_t>& decision, const std::vector<std::size_t>& attrs) {
    const std::size_t n = rows.size();
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
        bool consistent = true;
        for (std::size_t k = 0; k < n && consistent; ++k) {
            bool same = true;
            for (const auto a : attrs) {
                same = same && rows[i][a] == rows[k][a];
            }
            consistent = !same || decision[i] == decision[k];
        }
        pos += consistent ? 1 : 0;
    }
    return n > 0 ? static_cast<double>(pos) / static_cast<double>(n) : 0.0;
}

/// AUC by enumerating every (cloud, sky) pair.
inline double auc_pairs(const std::vector<double>& values, const std::vector<std::uint8_t>& labels) {
    double wins = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (labels[i] != skyrank::kCloud) {
            continue;
        }
        for (std::size_t k = 0; k < values.size(); ++k) {
            if (labels[k] != skyrank::kSky) {
                continue;
            }
            pairs += 1.0;
            wins += values[i] > values[k] ? 1.0 : (values[i] == values[k] ? 0.5 : 0.0);
        }
    }
    return wins / pairs;
}

/// Hexcone HSV (H in [0,1)) back to RGB.
inline skyrank::Rgb hsv_to_rgb(double h, double s, double v) {
    const double c = v * s;
    const double hp = h * 6.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1) {
        r = c, g = x;
    } else if (hp < 2) {
        r = x, g = c;
    } else if (hp < 3) {
        g = c, b = x;
    } else if (hp < 4) {
        g = x, b = c;
    } else if (hp < 5) {
        r = x, b = c;
    } else {
        r = c, b = x;
    }
    const double m = v - c;
    return {r + m, g + m, b + m};
}

/// Leading eigenvector of a symmetric matrix by power iteration, normalized and made
/// non-negative in its largest-magnitude component.
template <std::size_t N>
std::array<double, N> power_iteration(const std::array<std::array<double, N>, N>& m, int steps = 5000) {
    std::array<double, N> v{};
    for (std::size_t i = 0; i < N; ++i) {
        v[i] = 1.0 + 0.01 * static_cast<double>(i);
    }
    for (int s = 0; s < steps; ++s) {
        std::array<double, N> next{};
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t k = 0; k < N; ++k) {
                next[i] += m[i][k] * v[k];
            }
        }
        double norm = 0.0;
        for (const double x : next) {
            norm += x * x;
        }
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < N; ++i) {
            v[i] = next[i] / norm;
        }
    }
    return v;
}

}  // namespace oracle
