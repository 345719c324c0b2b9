#ifndef SEMCHANGE_REGRESSION_HPP
#define SEMCHANGE_REGRESSION_HPP

#include <Eigen/Dense>

namespace semchange {

/// Ordinary least squares result. When fitted with an intercept it is the
/// first coefficient and r2 is centered; without one r2 is uncentered
/// (1 - |r|^2 / |y|^2).
struct OlsFit {
    Eigen::VectorXd coefficients;
    double r2 = 0.0;
    double adjusted_r2 = 0.0;
    Eigen::VectorXd std_errors;
    Eigen::VectorXd t_stats;
    int m = 0;    // observations
    int k = 0;    // predictors, excluding intercept
    bool intercept = false;
};

/// Solves min |y - Xb| via SVD. The design (with intercept column when
/// requested) must have full column rank: smallest singular value
/// > 1e-10 * largest, else RankDeficient. Requires m > k (+1 with
/// intercept), else InsufficientData.
OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool intercept);

} // namespace semchange

#endif
