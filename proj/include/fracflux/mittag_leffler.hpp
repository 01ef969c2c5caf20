#pragma once

#include "fracflux/field.hpp"

namespace fracflux {

/// Which representation mlEvalWith uses.
enum class MLMethod { Auto, Series, Integral, Asymptotic };

/// One-parameter Mittag-Leffler function E_alpha(z) = sum z^n / Gamma(alpha n + 1)
/// for real z and alpha in (0, 2].
///
/// z > 0 uses the positive series (summed in log space); z < 0 uses the
/// alternating series near the origin, the real-line integral (the Laplace
/// inversion contour collapsed onto the branch cut, plus the pole terms for
/// alpha > 1) in the middle band, and the asymptotic expansion for large |z|. alpha = 1 and alpha = 2 reduce to
/// exp and cos / cosh.
double mlEval(double alpha, double z);

/// Forces one representation (for crossover checks). Auto equals mlEval.
double mlEvalWith(double alpha, double z, MLMethod method);

/// Largest positive argument accepted before E_alpha overflows a double.
double mlOverflowThreshold(double alpha);

/// |z| below which the series is used for negative z.
double mlSeriesSwitch(double alpha);
/// |z| above which the asymptotic expansion is used for negative z.
double mlAsymptoticSwitch(double alpha);

enum class ModeBranch { Forward, Conjugate };

/// e^{ikx} E_alpha(-+ lambda2 k^2 t^alpha) on a grid with one fractional and
/// one classical axis (periodic axes need k on the mode lattice). Forward solves D^alpha phi = lambda2 phi_xx +
/// phi(x,0) Phi_{1-alpha}; Conjugate solves the conjugated equation
/// -D^alpha phi' - lambda2 phi'_xx + phi'(x,0) Phi_{1-alpha} = 0.
SampledField modeSolution(double k, double alpha, double lambda2, ModeBranch branch, const Grid& grid);

}  // namespace fracflux
