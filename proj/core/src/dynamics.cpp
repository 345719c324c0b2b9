#include "semchange/dynamics.hpp"
#include "semchange/errors.hpp"
#include "semchange/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>

namespace semchange {

namespace {

void check_target(const MeaningSeries& series, int target_index) {
    if (target_index < 0 || target_index >= static_cast<int>(series.words.size()))
        throw UnknownWord("target index out of range");
}

Eigen::VectorXd restrict_to(const Eigen::MatrixXd& rows, int word,
                            const std::vector<int>& support) {
    Eigen::VectorXd out(static_cast<int>(support.size()));
    for (std::size_t c = 0; c < support.size(); ++c)
        out[static_cast<int>(c)] = rows(word, support[c]);
    return out;
}

} // namespace

void build_design(const MeaningSeries& series, int target_index, int p, int train_epochs,
                  Eigen::MatrixXd& X, Eigen::VectorXd& Y, std::vector<int>& support) {
    check_target(series, target_index);
    if (p < 1)
        throw InvalidSpec("model order p must be >= 1");
    const int total = static_cast<int>(series.rows.size());
    if (train_epochs > total)
        throw InsufficientData("train_epochs exceeds available epochs");
    if (train_epochs < p + 1)
        throw InsufficientData("need at least p+1 training epochs");

    const NeighborSet& nset = series.neighbors[static_cast<std::size_t>(target_index)];
    support = nset.member_indices;
    if (support.empty())
        throw EmptySupport("empty neighbor support for '" +
                           series.words[static_cast<std::size_t>(target_index)] + "'");

    const int num_neighbors = static_cast<int>(support.size());
    const int m = (train_epochs - p) * num_neighbors;
    const int k = num_neighbors * p;
    X.resize(m, k);
    Y.resize(m);
    int row = 0;
    for (int t = p; t < train_epochs; ++t) {
        for (int ci = 0; ci < num_neighbors; ++ci, ++row) {
            const int c = support[static_cast<std::size_t>(ci)];
            Y[row] = series.rows[static_cast<std::size_t>(t)](target_index, c);
            for (int j = 0; j < num_neighbors; ++j) {
                const int neighbor = nset.member_indices[static_cast<std::size_t>(j)];
                for (int n = 1; n <= p; ++n)
                    X(row, j * p + (n - 1)) =
                        series.rows[static_cast<std::size_t>(t - n)](neighbor, c);
            }
        }
    }
}

DynamicsFit fit_dynamics(const MeaningSeries& series, int target_index, int p,
                         int train_epochs) {
    Eigen::MatrixXd X;
    Eigen::VectorXd Y;
    std::vector<int> support;
    build_design(series, target_index, p, train_epochs, X, Y, support);

    DynamicsFit dyn;
    dyn.target = series.words[static_cast<std::size_t>(target_index)];
    dyn.target_index = target_index;
    dyn.order = p;
    dyn.neighbors = series.neighbors[static_cast<std::size_t>(target_index)];
    dyn.support = std::move(support);
    dyn.fit = ols(X, Y, /*intercept=*/false);

    const int num_neighbors = static_cast<int>(dyn.neighbors.member_indices.size());
    dyn.coefficients.resize(num_neighbors, p);
    for (int j = 0; j < num_neighbors; ++j)
        for (int n = 1; n <= p; ++n)
            dyn.coefficients(j, n - 1) = dyn.fit.coefficients[j * p + (n - 1)];
    return dyn;
}

Eigen::VectorXd predict_epoch(const DynamicsFit& fit,
                              const std::vector<Eigen::MatrixXd>& history) {
    if (static_cast<int>(history.size()) != fit.order)
        throw DimensionMismatch("history length must equal the model order");
    Eigen::VectorXd pred = Eigen::VectorXd::Zero(static_cast<int>(fit.support.size()));
    const int num_neighbors = static_cast<int>(fit.neighbors.member_indices.size());
    for (int n = 1; n <= fit.order; ++n) {
        const Eigen::MatrixXd& rows = history[static_cast<std::size_t>(n - 1)];
        for (int j = 0; j < num_neighbors; ++j) {
            const double coef = fit.coefficients(j, n - 1);
            if (coef == 0.0) continue;
            const int neighbor = fit.neighbors.member_indices[static_cast<std::size_t>(j)];
            for (std::size_t c = 0; c < fit.support.size(); ++c)
                pred[static_cast<int>(c)] += coef * rows(neighbor, fit.support[c]);
        }
    }
    return pred;
}

double prediction_error(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth) {
    if (predicted.size() != truth.size())
        throw DimensionMismatch("prediction_error: length mismatch");
    return (predicted - truth).norm();
}

double persistence_baseline(const MeaningSeries& series, int target_index) {
    check_target(series, target_index);
    const int total = static_cast<int>(series.rows.size());
    if (total < 2)
        throw InsufficientData("persistence baseline needs at least two epochs");
    const auto& support = series.neighbors[static_cast<std::size_t>(target_index)].member_indices;
    const Eigen::VectorXd last = restrict_to(series.rows.back(), target_index, support);
    const Eigen::VectorXd prev =
        restrict_to(series.rows[static_cast<std::size_t>(total - 2)], target_index, support);
    return prediction_error(prev, last);
}

EvaluationSummary evaluate_all(const MeaningSeries& series, int p, unsigned threads,
                               std::vector<DynamicsFit>* fits_out) {
    const int total = static_cast<int>(series.rows.size());
    if (total < 3)
        throw InsufficientData("evaluation needs at least three epochs");
    const int words = static_cast<int>(series.words.size());
    const int train_epochs = total - 1; // final epoch held out

    struct WordResult {
        double adj_r2 = 0.0, err = 0.0, baseline = 0.0;
    };
    std::vector<std::optional<WordResult>> results(static_cast<std::size_t>(words));
    std::vector<std::optional<DynamicsFit>> fits(fits_out ? static_cast<std::size_t>(words) : 0);

    parallel_for(static_cast<std::size_t>(words), threads, [&](std::size_t i) {
        try {
            DynamicsFit fit = fit_dynamics(series, static_cast<int>(i), p, train_epochs);
            std::vector<Eigen::MatrixXd> history;
            for (int n = 1; n <= p; ++n)
                history.push_back(series.rows[static_cast<std::size_t>(total - 1 - n)]);
            const Eigen::VectorXd pred = predict_epoch(fit, history);
            const Eigen::VectorXd truth =
                restrict_to(series.rows.back(), static_cast<int>(i), fit.support);
            WordResult r;
            r.adj_r2 = fit.fit.adjusted_r2;
            r.err = prediction_error(pred, truth);
            r.baseline = persistence_baseline(series, static_cast<int>(i));
            results[i] = r;
            if (fits_out) fits[i] = std::move(fit);
        } catch (const EmptySupport&) {
        } catch (const InsufficientData&) {
        } catch (const RankDeficient&) {
        }
    });

    EvaluationSummary summary;
    summary.p = p;
    summary.n = series.neighbors.empty() ? 0 : series.neighbors.front().n;
    double s_r2 = 0, s2_r2 = 0, s_err = 0, s2_err = 0, s_base = 0, s2_base = 0;
    for (const auto& r : results) {
        if (!r) {
            ++summary.skipped;
            continue;
        }
        ++summary.fitted;
        s_r2 += r->adj_r2;
        s2_r2 += r->adj_r2 * r->adj_r2;
        s_err += r->err;
        s2_err += r->err * r->err;
        s_base += r->baseline;
        s2_base += r->baseline * r->baseline;
    }
    if (summary.fitted == 0)
        throw NoFittableWords("no word admits a full-rank dynamics fit");
    const double n = summary.fitted;
    const auto stat = [n](double s, double s2, double& mean, double& sd) {
        mean = s / n;
        sd = std::sqrt(std::max(0.0, s2 / n - mean * mean));
    };
    stat(s_r2, s2_r2, summary.mean_adj_r2, summary.std_adj_r2);
    stat(s_err, s2_err, summary.mean_pred_err, summary.std_pred_err);
    stat(s_base, s2_base, summary.mean_baseline, summary.std_baseline);

    if (fits_out) {
        fits_out->clear();
        for (auto& f : fits)
            if (f) fits_out->push_back(std::move(*f));
    }
    return summary;
}

std::vector<DifferentiationPair> negative_pairs(const std::vector<DynamicsFit>& fits,
                                                double t_threshold) {
    std::vector<DifferentiationPair> pairs;
    for (const auto& fit : fits) {
        const int num_neighbors = static_cast<int>(fit.neighbors.members.size());
        for (int j = 0; j < num_neighbors; ++j)
            for (int n = 1; n <= fit.order; ++n) {
                const double coef = fit.coefficients(j, n - 1);
                const double t = fit.fit.t_stats[j * fit.order + (n - 1)];
                if (coef < 0.0 && std::abs(t) >= t_threshold)
                    pairs.push_back({fit.target, fit.neighbors.members[static_cast<std::size_t>(j)],
                                     coef, t, n});
            }
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        if (a.t_stat != b.t_stat) return a.t_stat < b.t_stat;
        if (a.target != b.target) return a.target < b.target;
        if (a.neighbor != b.neighbor) return a.neighbor < b.neighbor;
        return a.lag < b.lag;
    });
    return pairs;
}

std::vector<Eigen::VectorXd> forecast(const MeaningSeries& series, int target_index,
                                      int p, int horizon) {
    check_target(series, target_index);
    if (horizon < 1)
        throw InvalidSpec("forecast horizon must be >= 1");
    const int total = static_cast<int>(series.rows.size());

    // Transitive closure of neighbor sets starting at the target.
    std::vector<char> in_closure(series.words.size(), 0);
    std::deque<int> queue{target_index};
    in_closure[static_cast<std::size_t>(target_index)] = 1;
    std::vector<int> closure;
    while (!queue.empty()) {
        const int w = queue.front();
        queue.pop_front();
        closure.push_back(w);
        for (int j : series.neighbors[static_cast<std::size_t>(w)].member_indices)
            if (!in_closure[static_cast<std::size_t>(j)]) {
                in_closure[static_cast<std::size_t>(j)] = 1;
                queue.push_back(j);
            }
    }

    std::vector<DynamicsFit> system;
    system.reserve(closure.size());
    for (int w : closure) {
        try {
            system.push_back(fit_dynamics(series, w, p, total));
        } catch (const Error& e) {
            throw IncompleteSystem("cannot fit closure word '" +
                                   series.words[static_cast<std::size_t>(w)] +
                                   "': " + e.what());
        }
    }

    // The lag coefficients are coordinate-free, so closure rows can be
    // advanced densely; step 1 reads observed history, later steps the
    // predicted rows.
    std::deque<Eigen::MatrixXd> window;
    for (int n = p; n >= 1; --n)
        window.push_back(series.rows[static_cast<std::size_t>(total - n)]);

    const auto& target_support =
        series.neighbors[static_cast<std::size_t>(target_index)].member_indices;
    std::vector<Eigen::VectorXd> out;
    for (int step = 0; step < horizon; ++step) {
        Eigen::MatrixXd next = window.back(); // non-closure rows persist
        for (const auto& fit : system) {
            Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(next.cols());
            const int num_neighbors = static_cast<int>(fit.neighbors.member_indices.size());
            for (int n = 1; n <= p; ++n) {
                const Eigen::MatrixXd& lagged = window[static_cast<std::size_t>(p - n)];
                for (int j = 0; j < num_neighbors; ++j) {
                    const double coef = fit.coefficients(j, n - 1);
                    if (coef == 0.0) continue;
                    row += coef * lagged.row(fit.neighbors.member_indices[static_cast<std::size_t>(j)]);
                }
            }
            next.row(fit.target_index) = row;
        }
        window.push_back(std::move(next));
        window.pop_front();
        out.push_back(restrict_to(window.back(), target_index, target_support));
    }
    return out;
}

MeaningSeries make_series(const std::vector<SecondOrderMatrix>& sos, const Vocabulary& vocab,
                          const TimeAxis& axis, int n, unsigned threads) {
    if (sos.size() != axis.size())
        throw DimensionMismatch("one second-order matrix per epoch required");
    MeaningSeries series;
    series.words = vocab.words;
    series.axis = axis;
    series.rows.reserve(sos.size());
    for (const auto& m : sos) series.rows.push_back(m.sims);
    series.neighbors = all_neighbor_sets(sos, vocab, n, threads);
    return series;
}

std::vector<NeighborSet> all_neighbor_sets(const std::vector<SecondOrderMatrix>& sos,
                                           const Vocabulary& vocab, int n,
                                           unsigned threads) {
    std::vector<NeighborSet> sets(vocab.words.size());
    parallel_for(vocab.words.size(), threads, [&](std::size_t i) {
        sets[i] = neighbor_set(sos, vocab, vocab.words[i], n);
    });
    return sets;
}

} // namespace semchange
