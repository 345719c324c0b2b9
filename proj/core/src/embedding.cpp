#include "semchange/embedding.hpp"
#include "semchange/errors.hpp"
#include "semchange/rng.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace semchange {

double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (u.size() != v.size())
        throw DimensionMismatch("cosine: vectors of unequal length");
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0)
        throw ZeroVector("cosine: zero-norm input");
    return u.dot(v) / (nu * nv);
}

EpochEmbedding load_embedding_file(const std::filesystem::path& path,
                                   const Vocabulary& vocab, EpochId epoch) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open embedding file: " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw IoError("empty embedding file: " + path.string());
    long rows = 0;
    int dim = 0;
    {
        std::istringstream header(line);
        if (!(header >> rows >> dim) || rows < 1 || dim < 1)
            throw DimensionMismatch("bad embedding header: " + line);
    }

    std::unordered_map<std::string, Eigen::VectorXd> parsed;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string word;
        fields >> word;
        Eigen::VectorXd vec(dim);
        int got = 0;
        std::string tok;
        while (fields >> tok) {
            if (got >= dim)
                throw DimensionMismatch("row of '" + word + "' exceeds header dim");
            char* end = nullptr;
            vec[got] = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || *end != '\0')
                throw IoError("non-numeric value '" + tok + "' for word '" + word + "'");
            ++got;
        }
        if (got != dim)
            throw DimensionMismatch("row of '" + word + "' has " + std::to_string(got) +
                                    " values, header says " + std::to_string(dim));
        parsed.emplace(std::move(word), std::move(vec));
    }

    EpochEmbedding emb;
    emb.epoch = epoch;
    emb.dim = dim;
    emb.matrix.resize(vocab.size(), dim);
    for (int i = 0; i < vocab.size(); ++i) {
        auto it = parsed.find(vocab.words[i]);
        if (it == parsed.end())
            throw MissingEmbedding("word '" + vocab.words[i] + "' missing from " + path.string());
        if (it->second.norm() == 0.0)
            throw ZeroVector("zero embedding vector for word '" + vocab.words[i] + "'");
        emb.matrix.row(i) = it->second;
    }
    return emb;
}

void save_embedding_file(const std::filesystem::path& path,
                         const EpochEmbedding& emb, const Vocabulary& vocab) {
    if (emb.matrix.rows() != vocab.size())
        throw DimensionMismatch("embedding row count differs from vocabulary size");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write embedding file: " + path.string());
    out << vocab.size() << ' ' << emb.dim << '\n';
    char buf[64];
    for (int i = 0; i < vocab.size(); ++i) {
        out << vocab.words[i];
        for (int j = 0; j < emb.dim; ++j) {
            std::snprintf(buf, sizeof(buf), "%.9g", emb.matrix(i, j));
            out << ' ' << buf;
        }
        out << '\n';
    }
}

Eigen::MatrixXd ppmi_matrix(const TokenStream& stream, const Vocabulary& vocab, int window) {
    if (window < 1)
        throw InvalidSpec("window must be >= 1");
    const int n = vocab.size();
    std::vector<int> ids(stream.tokens.size(), -1);
    std::vector<std::int64_t> occurrences(n, 0);
    for (std::size_t i = 0; i < stream.tokens.size(); ++i) {
        if (auto idx = vocab.find(stream.tokens[i])) {
            ids[i] = *idx;
            ++occurrences[*idx];
        }
    }
    for (int i = 0; i < n; ++i)
        if (occurrences[i] == 0)
            throw AbsentWord("vocabulary word '" + vocab.words[i] + "' absent from stream");

    // Symmetric unweighted co-occurrence; out-of-vocabulary tokens still
    // occupy positions so window distances refer to the raw stream.
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
    const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(ids.size());
    for (std::ptrdiff_t i = 0; i < len; ++i) {
        if (ids[i] < 0) continue;
        const std::ptrdiff_t hi = std::min(len - 1, i + window);
        for (std::ptrdiff_t j = i + 1; j <= hi; ++j) {
            if (ids[j] < 0) continue;
            counts(ids[i], ids[j]) += 1.0;
            counts(ids[j], ids[i]) += 1.0;
        }
    }

    const double total = counts.sum();
    if (total == 0.0)
        return Eigen::MatrixXd::Zero(n, n);
    const Eigen::VectorXd row_sums = counts.rowwise().sum();
    Eigen::MatrixXd ppmi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (row_sums[i] == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            const double c = counts(i, j);
            if (c == 0.0 || row_sums[j] == 0.0) continue;
            const double pmi = std::log(c * total / (row_sums[i] * row_sums[j]));
            if (pmi > 0.0) ppmi(i, j) = pmi;
        }
    }
    return ppmi;
}

namespace {

// Deterministic sign convention: the largest-magnitude entry of each left
// singular vector is made positive.
void fix_signs(Eigen::MatrixXd& u) {
    for (int c = 0; c < u.cols(); ++c) {
        int imax = 0;
        u.col(c).cwiseAbs().maxCoeff(&imax);
        if (u(imax, c) < 0.0) u.col(c) = -u.col(c);
    }
}

// Halko-style randomized range finder with power iterations; the seed
// fixes the gaussian test matrix.
void randomized_svd(const Eigen::MatrixXd& a, int rank, std::uint64_t seed,
                    Eigen::MatrixXd& u, Eigen::VectorXd& s) {
    const int n = static_cast<int>(a.rows());
    const int probe = std::min(n, rank + 10);
    GaussianStream gauss(seed);
    Eigen::MatrixXd omega(n, probe);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < probe; ++j) omega(i, j) = gauss.next();

    Eigen::MatrixXd y = a * omega;
    for (int it = 0; it < 2; ++it) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
        y = a * (a.transpose() * Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(n, probe)));
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, probe);

    Eigen::MatrixXd b = q.transpose() * a; // probe x n
    Eigen::BDCSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU);
    u = (q * svd.matrixU()).leftCols(rank);
    s = svd.singularValues().head(rank);
}

} // namespace

EpochEmbedding train_count_embedding(const TokenStream& stream, const Vocabulary& vocab,
                                     int window, int dim, std::uint64_t seed) {
    const int n = vocab.size();
    if (dim < 1 || dim > n)
        throw InvalidSpec("dim must satisfy 1 <= dim <= |V|");
    const Eigen::MatrixXd ppmi = ppmi_matrix(stream, vocab, window);

    Eigen::MatrixXd u;
    Eigen::VectorXd s;
    if (n <= 300 || dim + 10 >= n) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(ppmi, Eigen::ComputeThinU);
        u = svd.matrixU().leftCols(dim);
        s = svd.singularValues().head(dim);
    } else {
        randomized_svd(ppmi, dim, seed, u, s);
    }
    fix_signs(u);

    EpochEmbedding emb;
    emb.epoch = stream.epoch;
    emb.dim = dim;
    emb.matrix = u * s.cwiseMax(0.0).cwiseSqrt().asDiagonal();
    for (int i = 0; i < n; ++i)
        if (emb.matrix.row(i).norm() == 0.0)
            throw ZeroVector("trained embedding row is zero for word '" + vocab.words[i] + "'");
    return emb;
}

} // namespace semchange
