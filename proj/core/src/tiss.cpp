#include "semchange/tiss.hpp"
#include "semchange/errors.hpp"
#include "semchange/parallel.hpp"
#include "semchange/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace semchange {

namespace {

TissGraph build_graph(int word_idx, const std::string& word,
                      const std::vector<SecondOrderMatrix>& sos) {
    const int epochs = static_cast<int>(sos.size());
    TissGraph graph;
    graph.word = word;
    graph.weights.resize(epochs, epochs);

    std::vector<Eigen::VectorXd> rows(epochs);
    std::vector<double> norms(epochs);
    for (int t = 0; t < epochs; ++t) {
        rows[t] = sos[t].sims.row(word_idx);
        norms[t] = rows[t].norm();
        if (norms[t] == 0.0)
            throw ZeroVector("zero second-order row for word '" + word + "'");
    }
    for (int s = 0; s < epochs; ++s) {
        graph.weights(s, s) = 1.0;
        for (int t = s + 1; t < epochs; ++t) {
            const double w = rows[s].dot(rows[t]) / (norms[s] * norms[t]);
            graph.weights(s, t) = w;
            graph.weights(t, s) = w;
        }
    }
    return graph;
}

} // namespace

TissGraph tiss_graph(const std::string& word, const std::vector<SecondOrderMatrix>& sos,
                     const Vocabulary& vocab) {
    auto idx = vocab.find(word);
    if (!idx)
        throw UnknownWord("word not in vocabulary: " + word);
    if (sos.size() < 2)
        throw InsufficientData("tiss_graph needs at least two epochs");
    return build_graph(*idx, word, sos);
}

std::vector<TissGraph> all_tiss_graphs(const std::vector<SecondOrderMatrix>& sos,
                                       const Vocabulary& vocab, unsigned threads) {
    if (sos.size() < 2)
        throw InsufficientData("need at least two epochs");
    std::vector<TissGraph> graphs(vocab.size());
    parallel_for(static_cast<std::size_t>(vocab.size()), threads, [&](std::size_t i) {
        graphs[i] = build_graph(static_cast<int>(i), vocab.words[i], sos);
    });
    return graphs;
}

DecayCurve word_decay_curve(const TissGraph& graph) {
    const int epochs = static_cast<int>(graph.weights.rows());
    if (epochs < 2)
        throw InsufficientData("decay curve needs at least two epochs");
    DecayCurve curve;
    for (int t0 = 1; t0 < epochs; ++t0) {
        DecayPoint point;
        point.t0 = t0;
        point.count = epochs - t0; // unordered pairs at distance t0
        double sum = 0.0;
        for (int s = 0; s + t0 < epochs; ++s) sum += graph.weights(s, s + t0);
        point.value = sum / static_cast<double>(point.count);
        curve.points.push_back(point);
    }
    return curve;
}

DecayCurve aggregate_decay_curve(const std::vector<TissGraph>& graphs) {
    if (graphs.empty())
        throw InsufficientData("no TISS graphs");
    const int epochs = static_cast<int>(graphs.front().weights.rows());
    if (epochs < 2)
        throw InsufficientData("decay curve needs at least two epochs");
    DecayCurve curve;
    for (int t0 = 1; t0 < epochs; ++t0) {
        DecayPoint point;
        point.t0 = t0;
        const long pairs = epochs - t0;
        point.count = pairs * static_cast<long>(graphs.size());
        double sum = 0.0;
        for (const auto& graph : graphs)
            for (int s = 0; s + t0 < epochs; ++s) sum += graph.weights(s, s + t0);
        point.value = sum / static_cast<double>(point.count);
        curve.points.push_back(point);
    }
    return curve;
}

std::vector<double> decay_std_across_words(const std::vector<TissGraph>& graphs) {
    if (graphs.empty())
        throw InsufficientData("no TISS graphs");
    const int epochs = static_cast<int>(graphs.front().weights.rows());
    std::vector<double> stds;
    for (int t0 = 1; t0 < epochs; ++t0) {
        double sum = 0.0, sumsq = 0.0;
        for (const auto& graph : graphs) {
            double acc = 0.0;
            for (int s = 0; s + t0 < epochs; ++s) acc += graph.weights(s, s + t0);
            const double mean_w = acc / static_cast<double>(epochs - t0);
            sum += mean_w;
            sumsq += mean_w * mean_w;
        }
        const double n = static_cast<double>(graphs.size());
        const double var = std::max(0.0, sumsq / n - (sum / n) * (sum / n));
        stds.push_back(std::sqrt(var));
    }
    return stds;
}

DecayFit fit_decay(const DecayCurve& curve, bool weighted) {
    const int m = static_cast<int>(curve.points.size());
    if (m < 3)
        throw InsufficientData("fit_decay needs at least 3 distinct t0 points");
    Eigen::MatrixXd x(m, 1);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
        double scale = 1.0;
        if (weighted) scale = std::sqrt(static_cast<double>(curve.points[i].count));
        x(i, 0) = curve.points[i].t0;
        y[i] = curve.points[i].value;
        if (weighted) {
            x(i, 0) *= scale;
            y[i] *= scale;
        }
    }
    OlsFit fit;
    if (weighted) {
        // weighted intercept column is the sqrt-count vector
        Eigen::MatrixXd design(m, 2);
        for (int i = 0; i < m; ++i)
            design(i, 0) = std::sqrt(static_cast<double>(curve.points[i].count));
        design.col(1) = x.col(0);
        fit = ols(design, y, false);
        // uncentered diagnostics from the transformed system; report the
        // centered adjusted R^2 convention of the unweighted path
        fit.adjusted_r2 = 1.0 - (1.0 - fit.r2) * double(m) / double(m - 2);
    } else {
        fit = ols(x, y, true);
    }
    DecayFit out;
    out.intercept = fit.coefficients[0];
    out.slope = fit.coefficients[1];
    out.adjusted_r2 = fit.adjusted_r2;
    out.std_error_slope = fit.std_errors[1];
    return out;
}

namespace {

Histogram make_histogram(std::vector<double> values, int bins) {
    Histogram hist;
    if (values.empty() || bins < 1) return hist;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    hist.lo = *lo_it;
    const double span = *hi_it - *lo_it;
    hist.bin_width = span > 0.0 ? span / bins : 1.0;
    hist.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
        int b = static_cast<int>((v - hist.lo) / hist.bin_width);
        if (b >= bins) b = bins - 1;
        if (b < 0) b = 0;
        ++hist.counts[static_cast<std::size_t>(b)];
    }
    return hist;
}

} // namespace

DecayDistribution decay_distribution(const std::vector<DecayFit>& fits, int bins) {
    if (fits.empty())
        throw InsufficientData("decay_distribution needs at least one fit");
    std::vector<double> slopes_pct, r2s;
    slopes_pct.reserve(fits.size());
    for (const auto& fit : fits) {
        slopes_pct.push_back(fit.slope * 100.0);
        r2s.push_back(fit.adjusted_r2);
    }

    DecayDistribution dist;
    dist.slope_pct = make_histogram(slopes_pct, bins);
    dist.adjusted_r2 = make_histogram(r2s, bins);

    const double n = static_cast<double>(fits.size());
    double sum = 0.0;
    long negative = 0, good = 0;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        sum += fits[i].slope;
        if (fits[i].slope < 0.0) ++negative;
        if (fits[i].adjusted_r2 >= 0.75) ++good;
    }
    dist.mean_slope = sum / n;
    double m2 = 0.0, m3 = 0.0;
    for (const auto& fit : fits) {
        const double d = fit.slope - dist.mean_slope;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    dist.skewness_slope = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;

    std::vector<double> sorted_slopes;
    sorted_slopes.reserve(fits.size());
    for (const auto& fit : fits) sorted_slopes.push_back(fit.slope);
    std::sort(sorted_slopes.begin(), sorted_slopes.end());
    const std::size_t half = sorted_slopes.size() / 2;
    dist.median_slope = (sorted_slopes.size() % 2 == 1)
                            ? sorted_slopes[half]
                            : 0.5 * (sorted_slopes[half - 1] + sorted_slopes[half]);
    dist.share_negative = static_cast<double>(negative) / n;
    dist.share_r2_at_least_075 = static_cast<double>(good) / n;
    return dist;
}

Edge weakest_link(const TissGraph& graph) {
    const int epochs = static_cast<int>(graph.weights.rows());
    if (epochs < 2)
        throw InsufficientData("weakest_link needs at least two epochs");
    Edge best;
    double min_w = std::numeric_limits<double>::infinity();
    for (int s = 0; s < epochs; ++s)
        for (int t = s + 1; t < epochs; ++t)
            if (graph.weights(s, t) < min_w) { // strict: keeps smallest (s, t) on ties
                min_w = graph.weights(s, t);
                best = {s, t};
            }
    return best;
}

ChangeRanking rank_changes(const std::vector<TissGraph>& graphs) {
    ChangeRanking ranking;
    for (const auto& graph : graphs) {
        const int epochs = static_cast<int>(graph.weights.rows());
        if (epochs < 2)
            throw InsufficientData("rank_changes needs at least two epochs");
        ChangeRanking::Entry entry;
        entry.word = graph.word;
        entry.maxlink = -std::numeric_limits<double>::infinity();
        entry.minlink = std::numeric_limits<double>::infinity();
        for (int s = 0; s < epochs; ++s)
            for (int t = s + 1; t < epochs; ++t) {
                const double w = graph.weights(s, t);
                if (w > entry.maxlink) {
                    entry.maxlink = w;
                    entry.max_edge = {s, t};
                }
                if (w < entry.minlink) {
                    entry.minlink = w;
                    entry.min_edge = {s, t};
                }
            }
        entry.ratio = entry.minlink > 0.0 ? entry.maxlink / entry.minlink
                                          : std::numeric_limits<double>::infinity();
        ranking.entries.push_back(std::move(entry));
    }
    std::sort(ranking.entries.begin(), ranking.entries.end(),
              [](const ChangeRanking::Entry& a, const ChangeRanking::Entry& b) {
                  const bool fa = std::isfinite(a.ratio);
                  const bool fb = std::isfinite(b.ratio);
                  if (fa != fb) return !fa; // non-finite ratios first
                  if (!fa) {
                      const double sa = a.maxlink - a.minlink;
                      const double sb = b.maxlink - b.minlink;
                      if (sa != sb) return sa > sb;
                      return a.word < b.word;
                  }
                  if (a.ratio != b.ratio) return a.ratio > b.ratio;
                  return a.word < b.word;
              });
    return ranking;
}

} // namespace semchange
