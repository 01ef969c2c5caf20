#pragma once

#include <cstddef>
#include <vector>

namespace fracflux {

/// Norms of a residual at a sequence of resolutions, coarse to fine.
struct ResidualReport {
    std::vector<std::size_t> resolutions;
    std::vector<double> maxNorm;
    std::vector<double> l2Norm;
    /// Observed order from the two finest max norms; NaN when undefined.
    double order = 0.0;
    /// Both finest residuals are below the round-off floor, so no order can
    /// be observed and the identity is reproduced to working precision.
    bool atRoundoff = false;

    double finestMax() const { return maxNorm.empty() ? 0.0 : maxNorm.back(); }
    double finestL2() const { return l2Norm.empty() ? 0.0 : l2Norm.back(); }
    /// Order at least `target`, or converged to round-off.
    bool convergesWithOrder(double target) const;
    /// Strictly decreasing max norm under refinement, or at round-off.
    bool decreasing() const;
};

/// Fills `order` and `atRoundoff` from the recorded norms.
void finalizeReport(ResidualReport& report, double roundoffFloor);

double observedOrder(double coarseError, double fineError, double coarseN, double fineN);

}  // namespace fracflux
