#ifndef SEMCHANGE_TISS_HPP
#define SEMCHANGE_TISS_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "semchange/second_order.hpp"

namespace semchange {

/// Time-indexed self-similarity graph of one word: node s is epoch s,
/// edge weight (s, t) the cosine between the word's second-order rows at
/// the two epochs. Symmetric with unit diagonal.
struct TissGraph {
    std::string word;
    Eigen::MatrixXd weights; // |T| x |T|
};

struct DecayPoint {
    int t0 = 0;        // index distance >= 1
    double value = 0;  // mean similarity at that distance
    long count = 0;    // unordered (s, t) pairs entering the mean
};

struct DecayCurve {
    std::vector<DecayPoint> points; // t0 ascending
};

/// Linear decay fit of a curve: value = slope * t0 + intercept.
struct DecayFit {
    double slope = 0.0; // per index step
    double intercept = 0.0;
    double adjusted_r2 = 0.0;
    double std_error_slope = 0.0;
};

struct Edge {
    int s = 0, t = 0; // s < t
};

/// Words sorted by maxlink/minlink ratio, most changed first. Words whose
/// minimum link is <= 0 have no finite ratio and rank above everything,
/// ordered by (maxlink - minlink) descending.
struct ChangeRanking {
    struct Entry {
        std::string word;
        double ratio = 0.0; // +inf when minlink <= 0
        double maxlink = 0.0;
        double minlink = 0.0;
        Edge max_edge;
        Edge min_edge; // the weak link
    };
    std::vector<Entry> entries;
};

struct Histogram {
    double lo = 0.0;
    double bin_width = 0.0;
    std::vector<long> counts;
};

/// Population view of per-word decay fits (slopes reported in percent).
struct DecayDistribution {
    Histogram slope_pct;
    Histogram adjusted_r2;
    double mean_slope = 0.0;
    double median_slope = 0.0;
    double skewness_slope = 0.0;
    double share_negative = 0.0;
    double share_r2_at_least_075 = 0.0;
};

TissGraph tiss_graph(const std::string& word, const std::vector<SecondOrderMatrix>& sos,
                     const Vocabulary& vocab);

std::vector<TissGraph> all_tiss_graphs(const std::vector<SecondOrderMatrix>& sos,
                                       const Vocabulary& vocab, unsigned threads = 1);

DecayCurve aggregate_decay_curve(const std::vector<TissGraph>& graphs);

DecayCurve word_decay_curve(const TissGraph& graph);

/// Per-t0 standard deviation of the per-word means across words
/// (the error-bar data accompanying the aggregate curve).
std::vector<double> decay_std_across_words(const std::vector<TissGraph>& graphs);

/// OLS of value on t0 with intercept; needs >= 3 distinct t0 points.
/// When weighted, each point is weighted by its pair count.
DecayFit fit_decay(const DecayCurve& curve, bool weighted = false);

DecayDistribution decay_distribution(const std::vector<DecayFit>& fits, int bins = 20);

ChangeRanking rank_changes(const std::vector<TissGraph>& graphs);

/// Off-diagonal argmin edge; ties resolved toward the smaller (s, t).
Edge weakest_link(const TissGraph& graph);

} // namespace semchange

#endif
