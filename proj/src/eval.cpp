#include "macl/eval.hpp"

#include "macl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace macl {

namespace {

void check_outcomes(const std::vector<RankingOutcome>& outcomes, const char* who) {
    if (outcomes.empty()) throw ContractViolation(std::string(who) + ": no outcomes");
    for (const RankingOutcome& o : outcomes) {
        if (o.ranked_ids.empty()) throw ContractViolation(std::string(who) + ": empty ranking");
        if (o.relevant.empty()) throw ContractViolation(std::string(who) + ": empty relevant set");
    }
}

} // namespace

int first_relevant_rank(const std::vector<int>& ranked_ids, const std::set<int>& relevant) {
    for (std::size_t pos = 0; pos < ranked_ids.size(); ++pos)
        if (relevant.count(ranked_ids[pos])) return static_cast<int>(pos) + 1;
    return 0;
}

double accuracy_at_n(const std::vector<RankingOutcome>& outcomes, int n) {
    if (n < 1) throw ContractViolation("accuracy_at_n: n must be positive");
    check_outcomes(outcomes, "accuracy_at_n");
    int hits = 0;
    for (const RankingOutcome& o : outcomes) {
        const int first = first_relevant_rank(o.ranked_ids, o.relevant);
        if (first >= 1 && first <= n) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

double average_precision(const std::vector<int>& ranked_ids, const std::set<int>& relevant) {
    if (ranked_ids.empty()) throw ContractViolation("average_precision: empty ranking");
    if (relevant.empty()) throw ContractViolation("average_precision: empty relevant set");
    double sum = 0.0;
    int found = 0;
    for (std::size_t pos = 0; pos < ranked_ids.size(); ++pos) {
        if (relevant.count(ranked_ids[pos])) {
            ++found;
            sum += static_cast<double>(found) / static_cast<double>(pos + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

double mean_average_precision(const std::vector<RankingOutcome>& outcomes) {
    check_outcomes(outcomes, "mean_average_precision");
    double sum = 0.0;
    for (const RankingOutcome& o : outcomes) sum += average_precision(o.ranked_ids, o.relevant);
    return sum / static_cast<double>(outcomes.size());
}

double reciprocal_rank(const std::vector<int>& ranked_ids, const std::set<int>& relevant) {
    const int first = first_relevant_rank(ranked_ids, relevant);
    return first > 0 ? 1.0 / first : 0.0;
}

double mean_reciprocal_rank(const std::vector<RankingOutcome>& outcomes) {
    check_outcomes(outcomes, "mean_reciprocal_rank");
    double sum = 0.0;
    for (const RankingOutcome& o : outcomes) sum += reciprocal_rank(o.ranked_ids, o.relevant);
    return sum / static_cast<double>(outcomes.size());
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b,
                                    int exact_max) {
    if (a.size() != b.size()) throw ContractViolation("wilcoxon_signed_rank: samples must be paired");
    if (a.empty()) throw ContractViolation("wilcoxon_signed_rank: empty samples");

    std::vector<double> diffs;
    diffs.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }
    if (diffs.empty())
        throw ContractViolation("wilcoxon_signed_rank: degenerate comparison, all differences are zero");
    const int n = static_cast<int>(diffs.size());
    if (n < 5)
        throw ContractViolation("wilcoxon_signed_rank: need at least 5 nonzero differences, got " +
                                std::to_string(n));

    // Midranks of |d|.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return std::fabs(diffs[x]) < std::fabs(diffs[y]); });
    std::vector<double> rank(n, 0.0);
    std::vector<int> tie_sizes;
    int i = 0;
    while (i < n) {
        int j = i;
        while (j < n && std::fabs(diffs[order[j]]) == std::fabs(diffs[order[i]])) ++j;
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (int k = i; k < j; ++k) rank[order[k]] = mid;
        tie_sizes.push_back(j - i);
        i = j;
    }

    WilcoxonResult res;
    res.n_used = n;
    for (int k = 0; k < n; ++k) {
        if (diffs[k] > 0.0)
            res.w_plus += rank[k];
        else
            res.w_minus += rank[k];
    }
    res.statistic = std::min(res.w_plus, res.w_minus);

    if (n <= exact_max && n <= 20) { // enumeration is 2^n; cap it regardless of the knob
        res.exact = true;
        const std::uint64_t total = std::uint64_t{1} << n;
        std::uint64_t count = 0;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            double w = 0.0;
            for (int k = 0; k < n; ++k)
                if (mask & (std::uint64_t{1} << k)) w += rank[k];
            if (w <= res.statistic + 1e-12) ++count;
        }
        res.p_value = std::min(1.0, 2.0 * static_cast<double>(count) / static_cast<double>(total));
    } else {
        const double nd = static_cast<double>(n);
        const double mu = nd * (nd + 1.0) / 4.0;
        double sigma2 = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0;
        for (int t : tie_sizes) {
            const double td = static_cast<double>(t);
            sigma2 -= (td * td * td - td) / 48.0;
        }
        if (sigma2 <= 0.0)
            throw ContractViolation("wilcoxon_signed_rank: degenerate comparison, zero variance");
        double z = 0.0;
        if (res.w_plus > mu)
            z = (res.w_plus - 0.5 - mu) / std::sqrt(sigma2);
        else if (res.w_plus < mu)
            z = (res.w_plus + 0.5 - mu) / std::sqrt(sigma2);
        res.p_value = std::erfc(std::fabs(z) / std::sqrt(2.0));
    }
    return res;
}

std::string cliffs_band(double delta) {
    const double mag = std::fabs(delta);
    if (mag < 0.147) return "negligible";
    if (mag < 0.33) return "small";
    if (mag < 0.474) return "medium";
    return "large";
}

CliffsResult cliffs_delta(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw ContractViolation("cliffs_delta: empty samples");
    std::int64_t more = 0, less = 0;
    for (double x : a) {
        for (double y : b) {
            if (x > y)
                ++more;
            else if (x < y)
                ++less;
        }
    }
    CliffsResult res;
    res.delta = static_cast<double>(more - less) /
                (static_cast<double>(a.size()) * static_cast<double>(b.size()));
    res.band = cliffs_band(res.delta);
    return res;
}

} // namespace macl
