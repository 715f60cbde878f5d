#pragma once
//
// Independent reference routes used by verification campaigns. Nothing here is
// called by the formulas it checks.
//

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "mcflab/dense.hpp"

namespace mcflab {

/// log det of a dense square array by partial-pivot LU; NaN if the determinant is not positive.
inline double lu_log_det(const SquareArray<double>& a)
{
    const int N = a.size();
    if (N == 0) return 0.0;
    Eigen::MatrixXd m(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m(i, j) = a(i, j);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    const Eigen::MatrixXd& u = lu.matrixLU();
    double sum = 0.0;
    int sign = lu.permutationP().determinant();
    for (int i = 0; i < N; ++i) {
        const double d = u(i, i);
        if (d == 0.0) return std::numeric_limits<double>::quiet_NaN();
        if (d < 0.0) sign = -sign;
        sum += std::log(std::abs(d));
    }
    return sign > 0 ? sum : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace mcflab
