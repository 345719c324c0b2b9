#include "semchange/corpus.hpp"
#include "semchange/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace semchange {

namespace {

// Validates UTF-8 byte structure; we do not need code point semantics,
// only a guarantee that the file is not binary garbage.
bool valid_utf8(const std::string& s) {
    std::size_t i = 0;
    const auto cont = [&](std::size_t k) {
        for (std::size_t j = 1; j <= k; ++j)
            if (i + j >= s.size() || (static_cast<unsigned char>(s[i + j]) & 0xC0) != 0x80)
                return false;
        return true;
    };
    while (i < s.size()) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (c < 0x80) { i += 1; continue; }
        if ((c & 0xE0) == 0xC0 && c >= 0xC2) { if (!cont(1)) return false; i += 2; continue; }
        if ((c & 0xF0) == 0xE0) { if (!cont(2)) return false; i += 3; continue; }
        if ((c & 0xF8) == 0xF0 && c <= 0xF4) { if (!cont(3)) return false; i += 4; continue; }
        return false;
    }
    return true;
}

// ASCII case folding only; multi-byte sequences pass through unchanged.
void lowercase_ascii(std::string& s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
}

} // namespace

TokenStream read_tokens(const std::filesystem::path& path, EpochId epoch) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open corpus file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();
    if (!valid_utf8(content))
        throw InvalidEncoding("corpus file is not valid UTF-8: " + path.string());

    TokenStream stream;
    stream.epoch = epoch;
    std::string token;
    std::istringstream words(content);
    while (words >> token) {
        lowercase_ascii(token);
        stream.tokens.push_back(std::move(token));
        token.clear();
    }
    if (stream.tokens.empty())
        throw EmptyCorpus("corpus file contains no tokens: " + path.string());
    return stream;
}

CountTable epoch_counts(const TokenStream& stream) {
    if (stream.tokens.empty())
        throw EmptyCorpus("token stream is empty");
    CountTable counts;
    for (const auto& t : stream.tokens) ++counts[t];
    return counts;
}

Vocabulary build_vocabulary(const std::vector<CountTable>& per_epoch,
                            std::int64_t min_count,
                            const std::unordered_set<std::string>* allowlist) {
    if (per_epoch.size() < 2)
        throw InsufficientData("build_vocabulary requires at least 2 epochs");
    if (min_count < 1)
        throw InvalidSpec("min_count must be >= 1");

    std::vector<std::string> kept;
    for (const auto& [word, count] : per_epoch.front()) {
        if (count < min_count) continue;
        if (allowlist && !allowlist->count(word)) continue;
        bool everywhere = true;
        for (std::size_t e = 1; e < per_epoch.size(); ++e) {
            auto it = per_epoch[e].find(word);
            if (it == per_epoch[e].end() || it->second < min_count) {
                everywhere = false;
                break;
            }
        }
        if (everywhere) kept.push_back(word);
    }
    if (kept.empty())
        throw NoCommonVocabulary("no word meets the threshold in every epoch");
    std::sort(kept.begin(), kept.end());

    Vocabulary vocab;
    vocab.min_count = min_count;
    vocab.words = std::move(kept);
    vocab.counts.resize(vocab.words.size(), std::vector<std::int64_t>(per_epoch.size()));
    for (std::size_t i = 0; i < vocab.words.size(); ++i) {
        vocab.index.emplace(vocab.words[i], static_cast<int>(i));
        for (std::size_t e = 0; e < per_epoch.size(); ++e)
            vocab.counts[i][e] = per_epoch[e].at(vocab.words[i]);
    }
    return vocab;
}

TimeAxis scan_corpus_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw IoError("not a directory: " + dir.string());
    TimeAxis axis;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        const std::string stem = entry.path().stem().string();
        try {
            std::size_t pos = 0;
            long label = std::stol(stem, &pos);
            if (pos == stem.size()) axis.push_back(EpochId{label});
        } catch (const std::exception&) {
            // non-numeric file names are ignored
        }
    }
    if (axis.size() < 2)
        throw InsufficientData("corpus directory needs at least two <label>.txt files: " + dir.string());
    std::sort(axis.begin(), axis.end());
    for (std::size_t i = 1; i < axis.size(); ++i)
        if (axis[i].label == axis[i - 1].label)
            throw InvalidSpec("duplicate epoch label in corpus directory");
    return axis;
}

std::unordered_set<std::string> read_allowlist(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open allowlist: " + path.string());
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        lowercase_ascii(line);
        words.insert(line);
    }
    return words;
}

} // namespace semchange
