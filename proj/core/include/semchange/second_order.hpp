#ifndef SEMCHANGE_SECOND_ORDER_HPP
#define SEMCHANGE_SECOND_ORDER_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "semchange/embedding.hpp"

namespace semchange {

/// Structuralist per-epoch representation: entry (i, j) is the cosine of
/// word i's and word j's first-order vectors. Symmetric, unit diagonal,
/// entries within [-1, 1] up to rounding.
struct SecondOrderMatrix {
    EpochId epoch;
    Eigen::MatrixXd sims; // |V| x |V|
};

/// Union over epochs of a target's n most similar words (on first-order
/// vectors), target excluded, ties broken lexicographically. Members are
/// kept in vocabulary order.
struct NeighborSet {
    std::string target;
    std::vector<std::string> members;
    std::vector<int> member_indices; // vocabulary rows, sorted ascending
    int n = 0;
};

/// A dense row with its masking support: entries outside the support are
/// zero.
struct MaskedRow {
    Eigen::VectorXd dense;
    std::vector<int> support;
};

SecondOrderMatrix second_order_matrix(const EpochEmbedding& emb, const Vocabulary& vocab,
                                      unsigned threads = 1);

NeighborSet neighbor_set(const EmbeddingSet& set, const std::string& target, int n);

/// Same ranking read off precomputed first-order similarity matrices
/// (their entries are exactly the cosines neighbor ranking needs).
NeighborSet neighbor_set(const std::vector<SecondOrderMatrix>& sims_per_epoch,
                         const Vocabulary& vocab, const std::string& target, int n);

/// Keeps the coordinates in nset, zeroes everything else (including the
/// target's own coordinate). Idempotent.
MaskedRow mask_row(const Eigen::VectorXd& sims_row, const NeighborSet& nset);

} // namespace semchange

#endif
