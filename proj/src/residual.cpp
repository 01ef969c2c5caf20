#include "fracflux/residual.hpp"

#include <cmath>
#include <limits>

namespace fracflux {

double observedOrder(double coarseError, double fineError, double coarseN, double fineN) {
    if (!(coarseError > 0.0) || !(fineError > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(coarseError / fineError) / std::log(fineN / coarseN);
}

void finalizeReport(ResidualReport& report, double roundoffFloor) {
    const std::size_t n = report.maxNorm.size();
    report.order = std::numeric_limits<double>::quiet_NaN();
    report.atRoundoff = false;
    if (n < 2) return;
    const double e1 = report.maxNorm[n - 2];
    const double e2 = report.maxNorm[n - 1];
    report.order = observedOrder(e1, e2, static_cast<double>(report.resolutions[n - 2]),
                                 static_cast<double>(report.resolutions[n - 1]));
    report.atRoundoff = e1 <= roundoffFloor && e2 <= roundoffFloor;
}

bool ResidualReport::convergesWithOrder(double target) const {
    return atRoundoff || (std::isfinite(order) && order >= target);
}

bool ResidualReport::decreasing() const {
    if (atRoundoff) return true;
    for (std::size_t i = 1; i < maxNorm.size(); ++i)
        if (!(maxNorm[i] < maxNorm[i - 1])) return false;
    return maxNorm.size() >= 2;
}

}  // namespace fracflux
