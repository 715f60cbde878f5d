#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcflab/errors.hpp"

namespace mcflab::flowsim {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct MonitorRecord {
    double t = 0.0;
    double min_phi = kNaN;  ///< NaN when the state is flagged
    double max_two_dilation = 0.0;
    double max_lambda = 0.0;
    double sup_A2 = 0.0;
    bool flagged = false;  ///< some node has pair product >= 1
    double max_velocity = 0.0;
    double max_mu_ratio = kNaN;      ///< equivariant only: max |<H, mu>| / (1e-6 |H| + roundoff floor)
    double residual_evol_S = kNaN;   ///< filled by consistency studies only
};

/// Non-finite values or loss of the graphical regime; carries the last healthy record.
class FlowError : public std::runtime_error {
public:
    FlowError(const std::string& what, MonitorRecord last) : std::runtime_error(what), last_(last) {}
    const MonitorRecord& last_healthy() const { return last_; }

private:
    MonitorRecord last_;
};

/// Phi for one pair of singular values; NaN when l1 l2 >= 1.
inline double pair_phi(double l1, double l2)
{
    const double p = l1 * l2;
    if (!(p < 1.0)) return kNaN;
    return std::log1p(-p * p) - std::log1p(l1 * l1) - std::log1p(l2 * l2);
}

}  // namespace mcflab::flowsim
