#ifndef SEMCHANGE_DYNAMICS_HPP
#define SEMCHANGE_DYNAMICS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "semchange/regression.hpp"
#include "semchange/second_order.hpp"

namespace semchange {

/// Input to the meaning-dynamics model: per-epoch row matrices (row i is
/// word i's similarity vector) plus one neighbor set per word. Coordinates
/// are vocabulary indices.
struct MeaningSeries {
    std::vector<std::string> words;
    TimeAxis axis;
    std::vector<Eigen::MatrixXd> rows;      // one |V| x |V| matrix per epoch
    std::vector<NeighborSet> neighbors;     // one per word
};

/// Estimated lag coefficients of one target word. coefficients(j, n-1) is
/// the weight of neighbor j's vector at lag n. The regression stacks one
/// scalar equation per (training epoch, support coordinate); no intercept.
struct DynamicsFit {
    std::string target;
    int target_index = -1;
    int order = 1;
    NeighborSet neighbors;
    Eigen::MatrixXd coefficients;           // |neighbors| x order
    OlsFit fit;
    std::vector<int> support;               // masked coordinate indices
};

struct EvaluationSummary {
    int n = 0;              // neighbor count
    int p = 1;              // order
    double mean_adj_r2 = 0.0;
    double std_adj_r2 = 0.0;
    double mean_pred_err = 0.0;
    double std_pred_err = 0.0;
    double mean_baseline = 0.0;
    double std_baseline = 0.0;
    int fitted = 0;
    int skipped = 0;
};

/// A significantly negative lag coefficient: the operational reading of
/// the law of differentiation.
struct DifferentiationPair {
    std::string target;
    std::string neighbor;
    double coefficient = 0.0; // < 0
    double t_stat = 0.0;
    int lag = 1;
};

/// Stacked design for one target over the first train_epochs epochs:
/// column (j, n) holds neighbor j's values at lag n on the target's
/// support coordinates; the response is the target's own values.
void build_design(const MeaningSeries& series, int target_index, int p, int train_epochs,
                  Eigen::MatrixXd& X, Eigen::VectorXd& Y, std::vector<int>& support);

DynamicsFit fit_dynamics(const MeaningSeries& series, int target_index, int p,
                         int train_epochs);

/// One-step prediction on the support. history[n-1] is the full row matrix
/// at epoch t-n.
Eigen::VectorXd predict_epoch(const DynamicsFit& fit,
                              const std::vector<Eigen::MatrixXd>& history);

/// Euclidean distance, unnormalized.
double prediction_error(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth);

/// Error of the predictor that keeps the penultimate epoch's vector,
/// on the target's support coordinates.
double persistence_baseline(const MeaningSeries& series, int target_index);

/// Fits every word on all epochs but the last, scores held-out prediction
/// of the final epoch against the persistence baseline. Words whose design
/// is rank deficient or data-starved are skipped and counted.
EvaluationSummary evaluate_all(const MeaningSeries& series, int p, unsigned threads = 1,
                               std::vector<DynamicsFit>* fits_out = nullptr);

std::vector<DifferentiationPair> negative_pairs(const std::vector<DynamicsFit>& fits,
                                                double t_threshold);

/// h-step forecast beyond the last epoch. Fits the transitive neighbor
/// closure of the target on all epochs and iterates the joint linear
/// system; coefficients apply to every coordinate, so rows of closure
/// words are advanced densely. Returns the target's predicted vectors on
/// its support.
std::vector<Eigen::VectorXd> forecast(const MeaningSeries& series, int target_index,
                                      int p, int horizon);

/// Pipeline assembly: second-order matrices become the row data and
/// neighbor sets are ranked on first-order similarities.
MeaningSeries make_series(const std::vector<SecondOrderMatrix>& sos, const Vocabulary& vocab,
                          const TimeAxis& axis, int n, unsigned threads = 1);

/// Neighbor sets for every vocabulary word at once; lets callers sweep n
/// without copying the row matrices.
std::vector<NeighborSet> all_neighbor_sets(const std::vector<SecondOrderMatrix>& sos,
                                           const Vocabulary& vocab, int n,
                                           unsigned threads = 1);

} // namespace semchange

#endif
