#ifndef SEMCHANGE_SYNTH_HPP
#define SEMCHANGE_SYNTH_HPP

#include <cstdint>
#include <filesystem>

#include "semchange/dynamics.hpp"
#include "semchange/tiss.hpp"

namespace semchange {

/// Ground-truth generator for the linear decay law: per-word graphs with
/// weights 1 + slope * |s - t| plus seeded gaussian noise. Noise is
/// truncated symmetrically to the headroom left by the similarity bounds,
/// so the expected weight is exactly the construction line.
struct DecaySpec {
    int epochs = 0;
    int words = 0;
    double slope = 0.0;       // per index step, <= 0
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

struct DecayData {
    std::vector<TissGraph> graphs;
    long clamped = 0; // hard [-1, 1] clamps after truncation; stays 0
};

/// Ground-truth generator for the lag model: every word's row evolves as
/// the table-weighted sum of its neighbors' lagged rows (neighbors of word
/// i are the next `neighbors` words cyclically). The recurrence applies to
/// all coordinates, so the recorded coefficients are exactly recoverable
/// from any full-rank support.
struct VarSpec {
    int epochs = 0;
    int words = 0;
    int neighbors = 0;
    int order = 1;
    Eigen::MatrixXd coefficients; // neighbors x order
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    bool identical_init = false;  // all initial rows equal (fixed points)
};

struct VarData {
    MeaningSeries series;
    Eigen::MatrixXd true_coefficients; // the spec table
};

DecayData gen_decay_graphs(const DecaySpec& spec);

VarData gen_var_embeddings(const VarSpec& spec);

/// Spectral radius of the process's companion matrix; specs above
/// 1 + 1e-9 are rejected as UnstableProcess.
double companion_spectral_radius(const VarSpec& spec);

/// Ground-truth coefficient of `member_index` at `lag` (1-based) in
/// `target`'s equation; fitted coefficients index members in sorted order,
/// the generator indexes them by cyclic offset.
double true_coefficient(const VarSpec& spec, int target, int member_index, int lag);

/// Key-value spec files (one `key = value` per line, '#' comments).
DecaySpec parse_decay_spec(const std::filesystem::path& path);
VarSpec parse_var_spec(const std::filesystem::path& path);

} // namespace semchange

#endif
