#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "svx/errors.hpp"

namespace svx {

enum class WilcoxonMethod { exact, normal_approximation };

struct WilcoxonResult {
    int n_effective = 0;      // pairs left after dropping zero differences
    double v_statistic = 0.0; // sum of positive signed ranks
    double p_two_sided = 1.0;
    WilcoxonMethod method = WilcoxonMethod::exact;
};

namespace detail {

// Signed-rank null distribution: counts[s] = #subsets of {1..n} summing to s.
inline std::vector<std::uint64_t> signed_rank_counts(int n) {
    const int max_sum = n * (n + 1) / 2;
    std::vector<std::uint64_t> cnt(static_cast<std::size_t>(max_sum) + 1, 0);
    cnt[0] = 1;
    for (int r = 1; r <= n; ++r)
        for (int s = max_sum; s >= r; --s)
            cnt[static_cast<std::size_t>(s)] += cnt[static_cast<std::size_t>(s - r)];
    return cnt;
}

// Two-sided exact p, matching R's wilcox.test doubling rule.
inline double exact_two_sided_p(double v, int n) {
    const auto cnt = signed_rank_counts(n);
    const double mean = n * (n + 1) / 4.0;
    const auto vi = static_cast<std::size_t>(std::llround(v));
    std::uint64_t tail = 0;
    if (v > mean) {
        for (std::size_t s = vi; s < cnt.size(); ++s) tail += cnt[s];
    } else {
        for (std::size_t s = 0; s <= vi; ++s) tail += cnt[s];
    }
    const double total = std::ldexp(1.0, n);  // 2^n
    return std::min(1.0, 2.0 * static_cast<double>(tail) / total);
}

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace detail

// Paired signed-rank test: zeros dropped, average ranks for ties, exact
// enumeration when n <= 25 without ties, else normal approximation with tie
// and continuity corrections.
inline WilcoxonResult wilcoxon_signed_rank(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size() || a.size() < 1) throw ArgumentError("wilcoxon: length mismatch");
    std::vector<double> d;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double di = a(i) - b(i);
        if (di != 0.0) d.push_back(di);
    }
    if (d.empty()) throw DegenerateDataError("wilcoxon: all differences zero");
    const int n = static_cast<int>(d.size());

    std::vector<int> order(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return std::abs(d[static_cast<std::size_t>(x)]) <
                                         std::abs(d[static_cast<std::size_t>(y)]); });

    std::vector<double> rank(d.size());
    bool has_ties = false;
    double tie_term = 0.0;  // sum of t^3 - t over tie groups
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        const double v = std::abs(d[static_cast<std::size_t>(order[i])]);
        while (j + 1 < order.size() && std::abs(d[static_cast<std::size_t>(order[j + 1])]) == v) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) rank[static_cast<std::size_t>(order[t])] = avg;
        const auto g = static_cast<double>(j - i + 1);
        if (g > 1) {
            has_ties = true;
            tie_term += g * g * g - g;
        }
        i = j + 1;
    }

    double v_stat = 0.0;
    for (std::size_t t = 0; t < d.size(); ++t)
        if (d[t] > 0.0) v_stat += rank[t];

    WilcoxonResult res;
    res.n_effective = n;
    res.v_statistic = v_stat;
    if (!has_ties && n <= 25) {
        res.method = WilcoxonMethod::exact;
        res.p_two_sided = detail::exact_two_sided_p(v_stat, n);
    } else {
        res.method = WilcoxonMethod::normal_approximation;
        const double mu = n * (n + 1) / 4.0;
        const double sigma2 = n * (n + 1) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
        double z = v_stat - mu;
        const double corr = z > 0 ? 0.5 : (z < 0 ? -0.5 : 0.0);
        z = (z - corr) / std::sqrt(sigma2);
        const double lower = detail::std_normal_cdf(z);
        res.p_two_sided = std::min(1.0, 2.0 * std::min(lower, 1.0 - lower));
        res.p_two_sided = std::max(res.p_two_sided, std::numeric_limits<double>::min());
    }
    return res;
}

inline bool significance(const WilcoxonResult& r, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("significance: alpha out of range");
    return r.p_two_sided < alpha;
}

inline std::string summarize(const WilcoxonResult& r, double alpha = 0.05) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "V=%g, p=%.6g, method=%s, significant at %g: %s",
                  r.v_statistic, r.p_two_sided,
                  r.method == WilcoxonMethod::exact ? "exact" : "normal-approximation", alpha,
                  significance(r, alpha) ? "yes" : "no");
    return buf;
}

}  // namespace svx
