#include "semchange/regression.hpp"
#include "semchange/errors.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace semchange {

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool intercept) {
    const int m = static_cast<int>(X.rows());
    const int k = static_cast<int>(X.cols());
    if (y.size() != m)
        throw DimensionMismatch("ols: X rows and y length differ");
    const int cols = k + (intercept ? 1 : 0);
    if (cols < 1)
        throw InsufficientData("ols: no predictors");
    if (m <= cols)
        throw InsufficientData("ols: need more observations than parameters");

    Eigen::MatrixXd design(m, cols);
    if (intercept) {
        design.col(0).setOnes();
        design.rightCols(k) = X;
    } else {
        design = X;
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv[cols - 1] <= 1e-10 * sv[0])
        throw RankDeficient("ols: design matrix is rank deficient");

    OlsFit fit;
    fit.intercept = intercept;
    fit.m = m;
    fit.k = k;
    fit.coefficients = svd.solve(y);

    const Eigen::VectorXd residuals = y - design * fit.coefficients;
    const double ssr = residuals.squaredNorm();
    double sst;
    if (intercept) {
        const double mean = y.mean();
        sst = (y.array() - mean).square().sum();
    } else {
        sst = y.squaredNorm();
    }
    fit.r2 = (sst > 0.0) ? 1.0 - ssr / sst : 0.0;
    if (intercept)
        fit.adjusted_r2 = 1.0 - (1.0 - fit.r2) * double(m - 1) / double(m - k - 1);
    else
        fit.adjusted_r2 = 1.0 - (1.0 - fit.r2) * double(m) / double(m - k);

    // sigma^2 (X'X)^-1 through the SVD factors.
    const double sigma2 = ssr / double(m - cols);
    const Eigen::VectorXd inv_s2 = sv.array().square().inverse();
    fit.std_errors.resize(cols);
    for (int j = 0; j < cols; ++j) {
        const double var = sigma2 * (svd.matrixV().row(j).array().square() * inv_s2.transpose().array()).sum();
        fit.std_errors[j] = std::sqrt(std::max(0.0, var));
    }
    fit.t_stats.resize(cols);
    for (int j = 0; j < cols; ++j) {
        if (fit.std_errors[j] > 0.0)
            fit.t_stats[j] = fit.coefficients[j] / fit.std_errors[j];
        else if (fit.coefficients[j] == 0.0)
            fit.t_stats[j] = 0.0;
        else
            fit.t_stats[j] = std::copysign(std::numeric_limits<double>::infinity(),
                                           fit.coefficients[j]);
    }
    return fit;
}

} // namespace semchange
