#ifndef SEMCHANGE_EMBEDDING_HPP
#define SEMCHANGE_EMBEDDING_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "semchange/corpus.hpp"

namespace semchange {

/// First-order word vectors for one epoch; row i is the vector of
/// vocabulary word i.
struct EpochEmbedding {
    EpochId epoch;
    int dim = 0;
    Eigen::MatrixXd matrix; // |V| x dim, no zero-norm rows
};

/// The family of per-epoch embeddings over one time axis. Word ordering is
/// identical across epochs (the vocabulary order).
struct EmbeddingSet {
    TimeAxis axis;
    std::vector<EpochEmbedding> epochs; // one per axis entry
    Vocabulary vocabulary;
};

/// cosine(u, v) = dot / (|u| |v|). Throws ZeroVector on a zero-norm input
/// and DimensionMismatch on unequal lengths.
double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Parses the plain-text embedding format (header "<rows> <dim>", then one
/// "<word> <v1> ... <vdim>" line per word). Output rows follow vocabulary
/// order regardless of file order.
EpochEmbedding load_embedding_file(const std::filesystem::path& path,
                                   const Vocabulary& vocab, EpochId epoch);

/// Writes the same format with 9 significant digits.
void save_embedding_file(const std::filesystem::path& path,
                         const EpochEmbedding& emb, const Vocabulary& vocab);

/// Deterministic count-based trainer: symmetric windowed co-occurrence
/// counts over the vocabulary, PPMI transform, truncated SVD, embedding
/// U * sqrt(S). The seed fixes the randomized SVD start; small problems
/// take an exact SVD path. Bit-identical results for identical inputs.
EpochEmbedding train_count_embedding(const TokenStream& stream, const Vocabulary& vocab,
                                     int window, int dim, std::uint64_t seed);

/// The PPMI matrix the trainer factorizes, exposed for tests and tooling.
Eigen::MatrixXd ppmi_matrix(const TokenStream& stream, const Vocabulary& vocab, int window);

} // namespace semchange

#endif
