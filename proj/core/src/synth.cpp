#include "semchange/synth.hpp"
#include "semchange/errors.hpp"
#include "semchange/rng.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace semchange {

namespace {

std::string synth_word(int i, int width) {
    std::string num = std::to_string(i);
    return "w" + std::string(static_cast<std::size_t>(std::max(0, width - (int)num.size())), '0') + num;
}

int digits(int n) {
    int d = 1;
    while (n >= 10) { n /= 10; ++d; }
    return d;
}

} // namespace

DecayData gen_decay_graphs(const DecaySpec& spec) {
    if (spec.epochs < 2 || spec.words < 1)
        throw InvalidSpec("decay spec needs epochs >= 2 and words >= 1");
    if (spec.noise_sigma < 0.0)
        throw InvalidSpec("noise_sigma must be >= 0");
    if (spec.slope > 0.0)
        throw InvalidSpec("decay slope must be <= 0");
    if (1.0 + spec.slope * (spec.epochs - 1) - 4.0 * spec.noise_sigma < -1.0)
        throw InvalidSpec("decay line leaves the similarity range");

    const int width = digits(spec.words - 1);
    DecayData data;
    data.graphs.resize(static_cast<std::size_t>(spec.words));
    for (int w = 0; w < spec.words; ++w) {
        GaussianStream gauss(derive_seed(spec.seed, static_cast<std::uint64_t>(w)));
        TissGraph& graph = data.graphs[static_cast<std::size_t>(w)];
        graph.word = synth_word(w, width);
        graph.weights.resize(spec.epochs, spec.epochs);
        for (int s = 0; s < spec.epochs; ++s) {
            graph.weights(s, s) = 1.0;
            for (int t = s + 1; t < spec.epochs; ++t) {
                const double base = 1.0 + spec.slope * (t - s);
                double noise = spec.noise_sigma * gauss.next();
                // symmetric truncation to the headroom keeps E[w] = base
                const double headroom = std::min(1.0 - base, base + 1.0);
                noise = std::clamp(noise, -headroom, headroom);
                double value = base + noise;
                if (value > 1.0) { value = 1.0; ++data.clamped; }
                if (value < -1.0) { value = -1.0; ++data.clamped; }
                graph.weights(s, t) = value;
                graph.weights(t, s) = value;
            }
        }
    }
    const long entries = static_cast<long>(spec.words) * spec.epochs * (spec.epochs - 1) / 2;
    if (entries > 0 && data.clamped * 100 >= entries)
        throw InvalidSpec("more than 1% of generated entries were clamped");
    return data;
}

double companion_spectral_radius(const VarSpec& spec) {
    const int w = spec.words;
    const int p = spec.order;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(w * p, w * p);
    for (int n = 1; n <= p; ++n)
        for (int i = 0; i < w; ++i)
            for (int m = 1; m <= spec.neighbors; ++m)
                companion(i, (n - 1) * w + (i + m) % w) = spec.coefficients(m - 1, n - 1);
    for (int n = 1; n < p; ++n)
        companion.block(n * w, (n - 1) * w, w, w).setIdentity();
    return Eigen::EigenSolver<Eigen::MatrixXd>(companion, false)
        .eigenvalues()
        .cwiseAbs()
        .maxCoeff();
}

VarData gen_var_embeddings(const VarSpec& spec) {
    if (spec.epochs < 2 || spec.words < 2)
        throw InvalidSpec("var spec needs epochs >= 2 and words >= 2");
    if (spec.neighbors < 1 || spec.neighbors >= spec.words)
        throw InvalidSpec("neighbors per word must satisfy 1 <= k < words");
    if (spec.order < 1 || spec.order >= spec.epochs)
        throw InvalidSpec("order must satisfy 1 <= p < epochs");
    if (spec.coefficients.rows() != spec.neighbors || spec.coefficients.cols() != spec.order)
        throw InvalidSpec("coefficient table must be neighbors x order");
    if (spec.noise_sigma < 0.0)
        throw InvalidSpec("noise_sigma must be >= 0");
    if (companion_spectral_radius(spec) > 1.0 + 1e-9)
        throw UnstableProcess("companion spectral radius exceeds 1");

    const int w = spec.words;
    const int p = spec.order;
    const int width = digits(w - 1);

    VarData data;
    data.true_coefficients = spec.coefficients;
    MeaningSeries& series = data.series;
    for (int i = 0; i < w; ++i) series.words.push_back(synth_word(i, width));
    for (int t = 0; t < spec.epochs; ++t) series.axis.push_back(EpochId{t});

    series.neighbors.resize(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i) {
        NeighborSet& nset = series.neighbors[static_cast<std::size_t>(i)];
        nset.target = series.words[static_cast<std::size_t>(i)];
        nset.n = spec.neighbors;
        for (int m = 1; m <= spec.neighbors; ++m)
            nset.member_indices.push_back((i + m) % w);
        std::sort(nset.member_indices.begin(), nset.member_indices.end());
        for (int idx : nset.member_indices)
            nset.members.push_back(series.words[static_cast<std::size_t>(idx)]);
    }

    // Initial p epochs: seeded gaussian rows (one substream per word so
    // parallel callers see identical data).
    series.rows.assign(static_cast<std::size_t>(spec.epochs), Eigen::MatrixXd::Zero(w, w));
    if (spec.identical_init) {
        GaussianStream gauss(derive_seed(spec.seed, 0));
        Eigen::RowVectorXd shared(w);
        for (int c = 0; c < w; ++c) shared[c] = gauss.next();
        for (int t = 0; t < p; ++t)
            for (int i = 0; i < w; ++i) series.rows[static_cast<std::size_t>(t)].row(i) = shared;
    } else {
        for (int i = 0; i < w; ++i) {
            GaussianStream gauss(derive_seed(spec.seed, static_cast<std::uint64_t>(i)));
            for (int t = 0; t < p; ++t)
                for (int c = 0; c < w; ++c)
                    series.rows[static_cast<std::size_t>(t)](i, c) = gauss.next();
        }
    }

    GaussianStream noise(derive_seed(spec.seed, 0x6E6F697365ULL)); // "noise"
    for (int t = p; t < spec.epochs; ++t) {
        Eigen::MatrixXd& current = series.rows[static_cast<std::size_t>(t)];
        for (int i = 0; i < w; ++i) {
            Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(w);
            // the generator's neighbor order is the cyclic offset, which
            // pins each table row to a concrete neighbor
            for (int n = 1; n <= p; ++n)
                for (int m = 1; m <= spec.neighbors; ++m)
                    row += spec.coefficients(m - 1, n - 1) *
                           series.rows[static_cast<std::size_t>(t - n)].row((i + m) % w);
            if (spec.noise_sigma > 0.0)
                for (int c = 0; c < w; ++c) row[c] += spec.noise_sigma * noise.next();
            current.row(i) = row;
        }
    }
    return data;
}

double true_coefficient(const VarSpec& spec, int target, int member_index, int lag) {
    const int offset = ((member_index - target) % spec.words + spec.words) % spec.words;
    if (offset < 1 || offset > spec.neighbors)
        throw InvalidSpec("member is not a generator neighbor of the target");
    return spec.coefficients(offset - 1, lag - 1);
}

namespace {

std::map<std::string, std::string> read_kv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open spec file: " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }
    return kv;
}

double get_num(const std::map<std::string, std::string>& kv, const std::string& key,
               bool required, double fallback = 0.0) {
    auto it = kv.find(key);
    if (it == kv.end()) {
        if (required) throw InvalidSpec("spec file is missing key: " + key);
        return fallback;
    }
    return std::stod(it->second);
}

} // namespace

DecaySpec parse_decay_spec(const std::filesystem::path& path) {
    const auto kv = read_kv(path);
    DecaySpec spec;
    spec.epochs = static_cast<int>(get_num(kv, "epochs", true));
    spec.words = static_cast<int>(get_num(kv, "words", true));
    spec.slope = get_num(kv, "slope", true);
    spec.noise_sigma = get_num(kv, "noise_sigma", false, 0.0);
    spec.seed = static_cast<std::uint64_t>(get_num(kv, "seed", false, 0.0));
    return spec;
}

VarSpec parse_var_spec(const std::filesystem::path& path) {
    const auto kv = read_kv(path);
    VarSpec spec;
    spec.epochs = static_cast<int>(get_num(kv, "epochs", true));
    spec.words = static_cast<int>(get_num(kv, "words", true));
    spec.neighbors = static_cast<int>(get_num(kv, "neighbors", true));
    spec.order = static_cast<int>(get_num(kv, "order", false, 1.0));
    spec.noise_sigma = get_num(kv, "noise_sigma", false, 0.0);
    spec.seed = static_cast<std::uint64_t>(get_num(kv, "seed", false, 0.0));
    spec.identical_init = get_num(kv, "identical_init", false, 0.0) != 0.0;

    auto it = kv.find("coefficients");
    if (it == kv.end())
        throw InvalidSpec("spec file is missing key: coefficients");
    std::vector<double> values;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) values.push_back(std::stod(tok));
    if (static_cast<int>(values.size()) != spec.neighbors * spec.order)
        throw InvalidSpec("coefficients must list neighbors*order values (neighbor-major)");
    spec.coefficients.resize(spec.neighbors, spec.order);
    for (int m = 0; m < spec.neighbors; ++m)
        for (int n = 0; n < spec.order; ++n)
            spec.coefficients(m, n) = values[static_cast<std::size_t>(m * spec.order + n)];
    return spec;
}

} // namespace semchange
