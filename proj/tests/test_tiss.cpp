#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "semchange/errors.hpp"
#include "semchange/rng.hpp"
#include "semchange/tiss.hpp"

using namespace semchange;

namespace {

Vocabulary make_vocab(std::vector<std::string> words) {
    Vocabulary vocab;
    vocab.words = std::move(words);
    for (int i = 0; i < static_cast<int>(vocab.words.size()); ++i)
        vocab.index[vocab.words[i]] = i;
    vocab.counts.assign(vocab.words.size(), {1});
    return vocab;
}

TissGraph graph_from(const std::string& word, std::initializer_list<double> upper,
                     int epochs) {
    TissGraph graph;
    graph.word = word;
    graph.weights = Eigen::MatrixXd::Identity(epochs, epochs);
    auto it = upper.begin();
    for (int s = 0; s < epochs; ++s)
        for (int t = s + 1; t < epochs; ++t) {
            graph.weights(s, t) = *it;
            graph.weights(t, s) = *it;
            ++it;
        }
    return graph;
}

} // namespace

TEST_CASE("tiss graph entries are cosines of the word's similarity rows") {
    // 3 words, 3 epochs; second-order rows chosen by hand
    Vocabulary vocab = make_vocab({"a", "b", "c"});
    std::vector<SecondOrderMatrix> sos(3);
    GaussianStream g(5);
    for (int t = 0; t < 3; ++t) {
        sos[t].epoch = EpochId{t};
        Eigen::MatrixXd m(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = g.next();
        // symmetrize with unit diagonal, like real second-order matrices
        sos[t].sims = 0.5 * (m + m.transpose());
        for (int i = 0; i < 3; ++i) sos[t].sims(i, i) = 1.0;
    }
    const TissGraph graph = tiss_graph("b", sos, vocab);
    REQUIRE(graph.weights.rows() == 3);
    for (int s = 0; s < 3; ++s) {
        CHECK(graph.weights(s, s) == 1.0);
        for (int t = 0; t < 3; ++t) {
            const Eigen::VectorXd u = sos[s].sims.row(1);
            const Eigen::VectorXd v = sos[t].sims.row(1);
            if (s != t)
                CHECK(graph.weights(s, t) == doctest::Approx(cosine(u, v)).epsilon(1e-12));
            CHECK(graph.weights(s, t) == graph.weights(t, s));
        }
    }
}

TEST_CASE("identical rows across epochs give an all-ones graph") {
    Vocabulary vocab = make_vocab({"a", "b"});
    std::vector<SecondOrderMatrix> sos(4);
    Eigen::MatrixXd fixed(2, 2);
    fixed << 1.0, 0.3, 0.3, 1.0;
    for (int t = 0; t < 4; ++t) {
        sos[t].epoch = EpochId{t};
        sos[t].sims = fixed;
    }
    const TissGraph graph = tiss_graph("a", sos, vocab);
    CHECK(graph.weights.isApprox(Eigen::MatrixXd::Ones(4, 4), 1e-12));
}

TEST_CASE("word decay curve averages diagonals; loop oracle") {
    // epochs = 4; distances 1, 2, 3
    const TissGraph graph = graph_from("w", {0.9, 0.7, 0.5, 0.8, 0.6, 0.85}, 4);
    // weights: (0,1)=0.9 (0,2)=0.7 (0,3)=0.5 (1,2)=0.8 (1,3)=0.6 (2,3)=0.85
    const DecayCurve curve = word_decay_curve(graph);
    REQUIRE(curve.points.size() == 3);
    CHECK(curve.points[0].t0 == 1);
    CHECK(curve.points[0].count == 3);
    CHECK(curve.points[0].value == doctest::Approx((0.9 + 0.8 + 0.85) / 3).epsilon(1e-12));
    CHECK(curve.points[1].value == doctest::Approx((0.7 + 0.6) / 2).epsilon(1e-12));
    CHECK(curve.points[2].value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(curve.points[2].count == 1);
}

TEST_CASE("aggregate curve equals the pair-count weighted mean of word curves") {
    const TissGraph g1 = graph_from("a", {0.9, 0.7, 0.8}, 3);
    const TissGraph g2 = graph_from("b", {0.5, 0.3, 0.4}, 3);
    const DecayCurve agg = aggregate_decay_curve({g1, g2});
    const DecayCurve c1 = word_decay_curve(g1);
    const DecayCurve c2 = word_decay_curve(g2);
    REQUIRE(agg.points.size() == c1.points.size());
    for (std::size_t i = 0; i < agg.points.size(); ++i) {
        const double num = c1.points[i].value * c1.points[i].count +
                           c2.points[i].value * c2.points[i].count;
        const long den = c1.points[i].count + c2.points[i].count;
        CHECK(agg.points[i].count == den);
        CHECK(agg.points[i].value == doctest::Approx(num / den).epsilon(1e-12));
    }
}

TEST_CASE("std across words is zero for identical graphs") {
    const TissGraph g = graph_from("a", {0.9, 0.7, 0.8}, 3);
    TissGraph g2 = g;
    g2.word = "b";
    const auto stds = decay_std_across_words({g, g2});
    for (double s : stds) CHECK(s == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fit_decay recovers an exact line") {
    DecayCurve curve;
    for (int t0 = 1; t0 <= 5; ++t0)
        curve.points.push_back({t0, 1.0 - 0.04 * t0, 6 - t0});
    const DecayFit fit = fit_decay(curve);
    CHECK(fit.slope == doctest::Approx(-0.04).epsilon(1e-10));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fit.adjusted_r2 == doctest::Approx(1.0).epsilon(1e-9));
    // weighted fit of an exact line is the same line
    const DecayFit wfit = fit_decay(curve, true);
    CHECK(wfit.slope == doctest::Approx(-0.04).epsilon(1e-10));
    CHECK(wfit.intercept == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fit_decay needs three points") {
    DecayCurve curve;
    curve.points = {{1, 0.9, 3}, {2, 0.8, 2}};
    CHECK_THROWS_AS(fit_decay(curve), InsufficientData);
}

TEST_CASE("weakest link finds the off-diagonal minimum, earliest pair on ties") {
    const TissGraph g = graph_from("w", {0.9, 0.2, 0.5, 0.8, 0.2, 0.85}, 4);
    // minimum 0.2 occurs at (0,2) and (1,3); (0,2) is earlier
    const Edge e = weakest_link(g);
    CHECK(e.s == 0);
    CHECK(e.t == 2);
}

TEST_CASE("rank_changes orders by max/min ratio, most changed first") {
    const TissGraph stable = graph_from("stable", {0.9, 0.88, 0.89}, 3);
    const TissGraph changed = graph_from("changed", {0.9, 0.1, 0.8}, 3);
    const ChangeRanking ranking = rank_changes({stable, changed});
    REQUIRE(ranking.entries.size() == 2);
    CHECK(ranking.entries[0].word == "changed");
    CHECK(ranking.entries[0].ratio == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(ranking.entries[0].minlink == doctest::Approx(0.1));
    CHECK(ranking.entries[0].min_edge.s == 0);
    CHECK(ranking.entries[0].min_edge.t == 2);
    CHECK(ranking.entries[1].ratio == doctest::Approx(0.9 / 0.88).epsilon(1e-12));
}

TEST_CASE("non-positive minimum links rank above all finite ratios") {
    const TissGraph finite = graph_from("finite", {0.9, 0.001, 0.8}, 3); // huge ratio
    const TissGraph negat = graph_from("negat", {0.9, -0.2, 0.8}, 3);
    const TissGraph zero = graph_from("zero", {0.5, 0.0, 0.4}, 3);
    const ChangeRanking ranking = rank_changes({finite, negat, zero});
    // negat spread 0.9 - (-0.2) = 1.1 > zero spread 0.5; both above finite
    CHECK(ranking.entries[0].word == "negat");
    CHECK(ranking.entries[1].word == "zero");
    CHECK(ranking.entries[2].word == "finite");
    CHECK(std::isinf(ranking.entries[0].ratio));
}

TEST_CASE("ranking ties break lexicographically") {
    const TissGraph b = graph_from("b", {0.8, 0.4, 0.6}, 3);
    TissGraph a = b;
    a.word = "a";
    const ChangeRanking ranking = rank_changes({b, a});
    CHECK(ranking.entries[0].word == "a");
    CHECK(ranking.entries[1].word == "b");
}

TEST_CASE("decay distribution summary statistics; loop oracle") {
    std::vector<DecayFit> fits(5);
    const double slopes[5] = {-0.05, -0.01, 0.02, -0.03, -0.04};
    const double r2s[5] = {0.9, 0.5, 0.8, 0.76, 0.3};
    for (int i = 0; i < 5; ++i) {
        fits[i].slope = slopes[i];
        fits[i].adjusted_r2 = r2s[i];
    }
    const DecayDistribution dist = decay_distribution(fits, 4);
    CHECK(dist.mean_slope == doctest::Approx(-0.022).epsilon(1e-12));
    CHECK(dist.median_slope == doctest::Approx(-0.03).epsilon(1e-12));
    CHECK(dist.share_negative == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(dist.share_r2_at_least_075 == doctest::Approx(0.6).epsilon(1e-12));

    long total = 0;
    for (long c : dist.slope_pct.counts) total += c;
    CHECK(total == 5);
    CHECK(dist.slope_pct.counts.size() == 4);
    // histogram is over percent slopes: lo = -5
    CHECK(dist.slope_pct.lo == doctest::Approx(-5.0).epsilon(1e-12));
}

TEST_CASE("tiss error paths") {
    Vocabulary vocab = make_vocab({"a"});
    std::vector<SecondOrderMatrix> one(1);
    one[0].sims = Eigen::MatrixXd::Ones(1, 1);
    CHECK_THROWS_AS(tiss_graph("a", one, vocab), InsufficientData);
    CHECK_THROWS_AS(tiss_graph("zzz", one, vocab), UnknownWord);
    CHECK_THROWS_AS(decay_distribution({}, 4), InsufficientData);
}
