#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "semchange/dynamics.hpp"
#include "semchange/errors.hpp"
#include "semchange/rng.hpp"

using namespace semchange;

namespace {

NeighborSet make_nset(const std::vector<std::string>& words, int target,
                      std::vector<int> members, int n) {
    NeighborSet nset;
    nset.target = words[static_cast<std::size_t>(target)];
    nset.member_indices = std::move(members);
    for (int idx : nset.member_indices) nset.members.push_back(words[static_cast<std::size_t>(idx)]);
    nset.n = n;
    return nset;
}

// Order-1 lag process over 3 words: each word's next row is
// 0.6 * (closest cyclic neighbor) + 0.3 * (second cyclic neighbor),
// applied to every coordinate, no noise.
MeaningSeries cyclic_series(int epochs, std::uint64_t seed) {
    const double a1 = 0.6, a2 = 0.3;
    MeaningSeries series;
    series.words = {"u", "v", "w"};
    for (int t = 0; t < epochs; ++t) series.axis.push_back(EpochId{t});
    GaussianStream g(seed);
    Eigen::MatrixXd init(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) init(i, j) = g.next();
    series.rows.push_back(init);
    for (int t = 1; t < epochs; ++t) {
        const Eigen::MatrixXd& prev = series.rows.back();
        Eigen::MatrixXd next(3, 3);
        for (int i = 0; i < 3; ++i)
            next.row(i) = a1 * prev.row((i + 1) % 3) + a2 * prev.row((i + 2) % 3);
        series.rows.push_back(next);
    }
    for (int i = 0; i < 3; ++i)
        series.neighbors.push_back(make_nset(series.words, i, {(i + 1) % 3 < (i + 2) % 3
                                                                   ? (i + 1) % 3
                                                                   : (i + 2) % 3,
                                                               (i + 1) % 3 < (i + 2) % 3
                                                                   ? (i + 2) % 3
                                                                   : (i + 1) % 3},
                                             2));
    return series;
}

// Ground truth for cyclic_series: coefficient of sorted member `member`
// in `target`'s equation.
double cyclic_truth(int target, int member) {
    const int offset = ((member - target) % 3 + 3) % 3;
    return offset == 1 ? 0.6 : 0.3;
}

} // namespace

TEST_CASE("build_design shape and entries match a direct loop") {
    const MeaningSeries series = cyclic_series(5, 11);
    Eigen::MatrixXd X;
    Eigen::VectorXd Y;
    std::vector<int> support;
    build_design(series, 0, 1, 5, X, Y, support);
    // support = neighbor indices of word 0 = {1, 2}
    CHECK(support == std::vector<int>{1, 2});
    CHECK(X.rows() == (5 - 1) * 2); // (train - p) * |support|
    CHECK(X.cols() == 2 * 1);       // |N| * p
    int row = 0;
    for (int t = 1; t < 5; ++t)
        for (int c : support) {
            CHECK(Y[row] == series.rows[static_cast<std::size_t>(t)](0, c));
            CHECK(X(row, 0) == series.rows[static_cast<std::size_t>(t - 1)](1, c));
            CHECK(X(row, 1) == series.rows[static_cast<std::size_t>(t - 1)](2, c));
            ++row;
        }
}

TEST_CASE("noiseless lag process is identified exactly") {
    const MeaningSeries series = cyclic_series(6, 21);
    for (int target = 0; target < 3; ++target) {
        const DynamicsFit fit = fit_dynamics(series, target, 1, 6);
        REQUIRE(fit.coefficients.rows() == 2);
        for (int j = 0; j < 2; ++j) {
            const int member = fit.neighbors.member_indices[static_cast<std::size_t>(j)];
            CHECK(fit.coefficients(j, 0) ==
                  doctest::Approx(cyclic_truth(target, member)).epsilon(1e-6));
        }
        CHECK(fit.fit.r2 == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(fit.fit.m == (6 - 1) * 2);
        CHECK(fit.fit.k == 2);
        CHECK_FALSE(fit.fit.intercept);
    }
}

TEST_CASE("predict_epoch matches the coefficient sum by hand") {
    const MeaningSeries series = cyclic_series(6, 33);
    const DynamicsFit fit = fit_dynamics(series, 1, 1, 5);
    const Eigen::MatrixXd& last = series.rows[4];
    const Eigen::VectorXd pred = predict_epoch(fit, {last});
    for (std::size_t c = 0; c < fit.support.size(); ++c) {
        double expected = 0.0;
        for (int j = 0; j < 2; ++j)
            expected += fit.coefficients(j, 0) *
                        last(fit.neighbors.member_indices[static_cast<std::size_t>(j)],
                             fit.support[c]);
        CHECK(pred[static_cast<int>(c)] == doctest::Approx(expected).epsilon(1e-10));
    }
    CHECK_THROWS_AS(predict_epoch(fit, {last, last}), DimensionMismatch);
}

TEST_CASE("held-out prediction of the noiseless process is exact") {
    const MeaningSeries series = cyclic_series(6, 44);
    const DynamicsFit fit = fit_dynamics(series, 0, 1, 5); // last epoch unseen
    const Eigen::VectorXd pred = predict_epoch(fit, {series.rows[4]});
    Eigen::VectorXd truth(static_cast<int>(fit.support.size()));
    for (std::size_t c = 0; c < fit.support.size(); ++c)
        truth[static_cast<int>(c)] = series.rows[5](0, fit.support[c]);
    CHECK(prediction_error(pred, truth) < 1e-8);
}

TEST_CASE("prediction_error is the euclidean distance") {
    Eigen::VectorXd a(2), b(2);
    a << 3, 0;
    b << 0, 4;
    CHECK(prediction_error(a, b) == doctest::Approx(5.0).epsilon(1e-12));
    Eigen::VectorXd c(3);
    CHECK_THROWS_AS(prediction_error(a, c), DimensionMismatch);
}

TEST_CASE("persistence baseline is the support-restricted step size") {
    const MeaningSeries series = cyclic_series(4, 55);
    const auto& support = series.neighbors[2].member_indices;
    double acc = 0.0;
    for (int c : support) {
        const double d = series.rows[2](2, c) - series.rows[3](2, c);
        acc += d * d;
    }
    CHECK(persistence_baseline(series, 2) == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
}

TEST_CASE("evaluate_all fits every word of the noiseless process and beats persistence") {
    const MeaningSeries series = cyclic_series(7, 66);
    std::vector<DynamicsFit> fits;
    const EvaluationSummary summary = evaluate_all(series, 1, 1, &fits);
    CHECK(summary.fitted == 3);
    CHECK(summary.skipped == 0);
    CHECK(summary.p == 1);
    CHECK(summary.mean_pred_err < 1e-8);
    CHECK(summary.mean_adj_r2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(summary.mean_baseline > summary.mean_pred_err);
    CHECK(fits.size() == 3);
}

TEST_CASE("evaluate_all is independent of thread count") {
    const MeaningSeries series = cyclic_series(7, 66);
    const EvaluationSummary one = evaluate_all(series, 1, 1);
    const EvaluationSummary four = evaluate_all(series, 1, 4);
    CHECK(one.mean_pred_err == four.mean_pred_err);
    CHECK(one.mean_adj_r2 == four.mean_adj_r2);
}

TEST_CASE("negative_pairs filters on sign and significance, sorts by t statistic") {
    std::vector<DynamicsFit> fits(1);
    DynamicsFit& fit = fits[0];
    fit.target = "x";
    fit.order = 1;
    fit.neighbors.members = {"a", "b", "c"};
    fit.neighbors.member_indices = {0, 1, 2};
    fit.coefficients.resize(3, 1);
    fit.coefficients << -0.5, -0.1, 0.4;
    fit.fit.t_stats.resize(3);
    fit.fit.t_stats << -3.0, -1.0, 5.0; // b insignificant, c positive
    const auto pairs = negative_pairs(fits, 2.0);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].target == "x");
    CHECK(pairs[0].neighbor == "a");
    CHECK(pairs[0].coefficient == doctest::Approx(-0.5));
    CHECK(pairs[0].lag == 1);

    // two qualifying pairs come out most-negative-t first
    fit.fit.t_stats << -3.0, -4.5, 5.0;
    const auto two = negative_pairs(fits, 2.0);
    REQUIRE(two.size() == 2);
    CHECK(two[0].neighbor == "b");
    CHECK(two[1].neighbor == "a");
}

TEST_CASE("one-step forecast continues the noiseless recurrence exactly") {
    const MeaningSeries series = cyclic_series(6, 77);
    const auto preds = forecast(series, 0, 1, 2);
    REQUIRE(preds.size() == 2);

    // manual continuation of the true recurrence
    Eigen::MatrixXd cur = series.rows.back();
    const auto& support = series.neighbors[0].member_indices;
    for (int step = 0; step < 2; ++step) {
        Eigen::MatrixXd next(3, 3);
        for (int i = 0; i < 3; ++i)
            next.row(i) = 0.6 * cur.row((i + 1) % 3) + 0.3 * cur.row((i + 2) % 3);
        cur = next;
        for (std::size_t c = 0; c < support.size(); ++c)
            CHECK(preds[static_cast<std::size_t>(step)][static_cast<int>(c)] ==
                  doctest::Approx(cur(0, support[c])).epsilon(1e-6));
    }
}

TEST_CASE("dynamics error paths") {
    MeaningSeries series = cyclic_series(6, 88);
    Eigen::MatrixXd X;
    Eigen::VectorXd Y;
    std::vector<int> support;
    CHECK_THROWS_AS(build_design(series, 9, 1, 6, X, Y, support), UnknownWord);
    CHECK_THROWS_AS(build_design(series, 0, 0, 6, X, Y, support), InvalidSpec);
    CHECK_THROWS_AS(build_design(series, 0, 1, 1, X, Y, support), InsufficientData);
    CHECK_THROWS_AS(build_design(series, 0, 1, 7, X, Y, support), InsufficientData);
    series.neighbors[0].member_indices.clear();
    series.neighbors[0].members.clear();
    CHECK_THROWS_AS(build_design(series, 0, 1, 6, X, Y, support), EmptySupport);
    CHECK_THROWS_AS(forecast(series, 0, 1, 0), InvalidSpec);
    // the closure of word 0 only contains word 0, whose support is empty
    CHECK_THROWS_AS(forecast(series, 0, 1, 1), IncompleteSystem);
}
