#pragma once

#include <set>
#include <string>
#include <vector>

namespace macl {

// One evaluated report: the full catalog ranking (best first) and the set of
// node ids that are actually correct.
struct RankingOutcome {
    std::vector<int> ranked_ids;
    std::set<int> relevant;
};

// 1-based position of the first relevant id, or 0 if none appears.
int first_relevant_rank(const std::vector<int>& ranked_ids, const std::set<int>& relevant);

// Fraction of outcomes whose top n contains at least one relevant id.
double accuracy_at_n(const std::vector<RankingOutcome>& outcomes, int n);

// Mean of precision-at-k over the positions k where a relevant id appears,
// divided by the number of relevant ids.
double average_precision(const std::vector<int>& ranked_ids, const std::set<int>& relevant);

double mean_average_precision(const std::vector<RankingOutcome>& outcomes);

double reciprocal_rank(const std::vector<int>& ranked_ids, const std::set<int>& relevant);

double mean_reciprocal_rank(const std::vector<RankingOutcome>& outcomes);

// Two-sided paired Wilcoxon signed-rank test. Zero differences are dropped;
// fewer than 5 remaining pairs (or none at all) is an error. Samples of up
// to exact_max pairs (hard cap 20) use exact enumeration of all sign
// assignments with midranks; larger samples use the normal approximation
// with tie correction and continuity correction.
struct WilcoxonResult {
    double w_plus = 0.0;
    double w_minus = 0.0;
    double statistic = 0.0; // min(w_plus, w_minus)
    int n_used = 0;         // pairs remaining after dropping zero differences
    bool exact = false;
    double p_value = 1.0;
};

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b,
                                    int exact_max = 12);

// Cliff's delta effect size between two (unpaired) samples, with the
// conventional magnitude band.
struct CliffsResult {
    double delta = 0.0;
    std::string band;
};

std::string cliffs_band(double delta);

CliffsResult cliffs_delta(const std::vector<double>& a, const std::vector<double>& b);

} // namespace macl
