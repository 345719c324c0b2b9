#include "semchange/second_order.hpp"
#include "semchange/errors.hpp"
#include "semchange/parallel.hpp"

#include <algorithm>

namespace semchange {

SecondOrderMatrix second_order_matrix(const EpochEmbedding& emb, const Vocabulary& vocab,
                                      unsigned threads) {
    const int n = static_cast<int>(emb.matrix.rows());
    Eigen::VectorXd norms = emb.matrix.rowwise().norm();
    for (int i = 0; i < n; ++i)
        if (norms[i] == 0.0)
            throw ZeroVector("zero-norm embedding row for word '" +
                             (i < vocab.size() ? vocab.words[i] : std::to_string(i)) + "'");

    Eigen::MatrixXd unit = norms.cwiseInverse().asDiagonal() * emb.matrix;
    SecondOrderMatrix sos;
    sos.epoch = emb.epoch;
    sos.sims.resize(n, n);
    Eigen::MatrixXd& out = sos.sims;
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
        out.row(static_cast<int>(i)) = unit.row(static_cast<int>(i)) * unit.transpose();
    });
    // Enforce exact symmetry and unit diagonal; rounding in the two dot
    // product orders can differ in the last ulp.
    for (int i = 0; i < n; ++i) {
        out(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) out(j, i) = out(i, j);
    }
    return sos;
}

namespace {

NeighborSet neighbor_union(const std::vector<Eigen::VectorXd>& sims_per_epoch,
                           const Vocabulary& vocab, const std::string& target,
                           int target_idx, int n) {
    if (n < 1 || n >= vocab.size())
        throw NeighborCountTooLarge("neighbor count must satisfy 1 <= n < |V|");

    std::vector<char> member(vocab.size(), 0);
    std::vector<int> order(vocab.size());
    for (const auto& sims : sims_per_epoch) {
        for (int i = 0; i < vocab.size(); ++i) order[i] = i;
        // highest similarity first; ties lexicographic = ascending index
        // (the vocabulary is lexicographically sorted)
        std::partial_sort(order.begin(), order.begin() + n + 1, order.end(),
                          [&](int a, int b) {
                              if (sims[a] != sims[b]) return sims[a] > sims[b];
                              return a < b;
                          });
        int taken = 0;
        for (int k = 0; taken < n; ++k) {
            if (order[k] == target_idx) continue; // target excluded
            member[order[k]] = 1;
            ++taken;
        }
    }

    NeighborSet nset;
    nset.target = target;
    nset.n = n;
    for (int i = 0; i < vocab.size(); ++i) {
        if (!member[i]) continue;
        nset.members.push_back(vocab.words[i]);
        nset.member_indices.push_back(i);
    }
    return nset;
}

} // namespace

NeighborSet neighbor_set(const EmbeddingSet& set, const std::string& target, int n) {
    const Vocabulary& vocab = set.vocabulary;
    auto target_idx = vocab.find(target);
    if (!target_idx)
        throw UnknownWord("word not in vocabulary: " + target);
    std::vector<Eigen::VectorXd> sims_per_epoch;
    sims_per_epoch.reserve(set.epochs.size());
    for (const auto& emb : set.epochs) {
        const Eigen::VectorXd t = emb.matrix.row(*target_idx);
        Eigen::VectorXd sims(vocab.size());
        for (int i = 0; i < vocab.size(); ++i)
            sims[i] = cosine(t, emb.matrix.row(i));
        sims_per_epoch.push_back(std::move(sims));
    }
    return neighbor_union(sims_per_epoch, vocab, target, *target_idx, n);
}

NeighborSet neighbor_set(const std::vector<SecondOrderMatrix>& sims_per_epoch,
                         const Vocabulary& vocab, const std::string& target, int n) {
    auto target_idx = vocab.find(target);
    if (!target_idx)
        throw UnknownWord("word not in vocabulary: " + target);
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(sims_per_epoch.size());
    for (const auto& sos : sims_per_epoch)
        rows.push_back(sos.sims.row(*target_idx));
    return neighbor_union(rows, vocab, target, *target_idx, n);
}

MaskedRow mask_row(const Eigen::VectorXd& sims_row, const NeighborSet& nset) {
    MaskedRow masked;
    masked.dense = Eigen::VectorXd::Zero(sims_row.size());
    masked.support = nset.member_indices;
    for (int idx : masked.support) {
        if (idx < 0 || idx >= sims_row.size())
            throw DimensionMismatch("mask support index out of range");
        masked.dense[idx] = sims_row[idx];
    }
    return masked;
}

} // namespace semchange
