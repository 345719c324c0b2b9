#ifndef SEMCHANGE_CORPUS_HPP
#define SEMCHANGE_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace semchange {

/// One time slice, identified by its integer label (year, decade start,
/// century start). Position on the axis, not the label, is the unit of
/// time distance everywhere downstream.
struct EpochId {
    long label = 0;
    friend bool operator==(const EpochId&, const EpochId&) = default;
    friend auto operator<=>(const EpochId&, const EpochId&) = default;
};

using TimeAxis = std::vector<EpochId>; // labels strictly increasing

struct TokenStream {
    EpochId epoch;
    std::vector<std::string> tokens; // lowercased, document order
};

using CountTable = std::unordered_map<std::string, std::int64_t>;

/// Common filtered vocabulary: words occurring at least min_count times
/// in every epoch, in fixed lexicographic order shared by all downstream
/// matrices.
struct Vocabulary {
    std::vector<std::string> words;                  // sorted, no duplicates
    std::vector<std::vector<std::int64_t>> counts;   // counts[word][epoch]
    std::int64_t min_count = 1;
    std::unordered_map<std::string, int> index;      // word -> row

    int size() const { return static_cast<int>(words.size()); }
    std::optional<int> find(const std::string& w) const {
        auto it = index.find(w);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }
};

/// Reads a whitespace-tokenized UTF-8 file (one sentence per line) and
/// returns its lowercased tokens. Errors: missing file, invalid UTF-8,
/// empty token stream.
TokenStream read_tokens(const std::filesystem::path& path, EpochId epoch);

/// Exact multiset counts of a non-empty stream.
CountTable epoch_counts(const TokenStream& stream);

/// Intersection of all epochs' words at threshold min_count, sorted
/// lexicographically. Requires at least two epochs. An optional allowlist
/// restricts the result to the listed words.
Vocabulary build_vocabulary(const std::vector<CountTable>& per_epoch,
                            std::int64_t min_count,
                            const std::unordered_set<std::string>* allowlist = nullptr);

/// Corpus directory layout: one `<epoch_label>.txt` per epoch.
/// Returns the strictly increasing time axis parsed from file names.
TimeAxis scan_corpus_dir(const std::filesystem::path& dir);

/// Allowlist file: one word per line.
std::unordered_set<std::string> read_allowlist(const std::filesystem::path& path);

} // namespace semchange

#endif
