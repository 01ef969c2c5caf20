#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracflux/field.hpp"

namespace fracflux {

/// Closed-form initial profile phi(x, 0) in d space dimensions.
struct InitialData {
    enum class Kind { Delta, Gaussian, FourierMode };
    Kind kind = Kind::Delta;
    /// phi_0: delta weight, Gaussian mass or mode amplitude.
    double weight = 1.0;
    double sigma = 1.0;
    /// Wave vector of a Fourier mode, one entry per space axis.
    std::vector<double> k;

    static InitialData delta(double weight = 1.0);
    static InitialData gaussian(double sigma, double weight = 1.0);
    static InitialData mode(std::vector<double> k, double weight = 1.0);

    /// Profile value at x (not defined for delta data).
    Complex operator()(std::span<const double> x) const;
};

/// D^alpha phi = C Laplace(phi) + phi(x,0) t^{-alpha} / Gamma(1 - alpha).
struct DiffusionProblem {
    double alpha = 0.5;
    double diffusivity = 1.0;
    std::size_t dim = 1;
    InitialData initial;

    void validate() const;
};

enum class SolveMethod { Auto, Spectral, Green };

struct SolveOptions {
    SolveMethod method = SolveMethod::Auto;
    /// Largest relative spectral amplitude allowed in the outermost wave
    /// numbers of smooth initial data.
    double spectralTail = 1e-10;
};

/// Fractional Green's function G_alpha(r, t) of the problem in d dimensions,
/// obtained by inverting its Laplace transform s^{alpha-1} H_d(r; kappa) / C,
/// kappa = sqrt(s^alpha / C), where H_d is the Helmholtz kernel
/// (e^{-kappa r} / 2 kappa, K_0(kappa r) / 2 pi, e^{-kappa r} / 4 pi r).
/// r = 0 is allowed only for d = 1.
double greensFunction(double alpha, double diffusivity, std::size_t d, double r, double t);

struct GreenEvaluation {
    double value = 0.0;
    double errorEstimate = 0.0;
};
GreenEvaluation greensFunctionWithError(double alpha, double diffusivity, std::size_t d, double r, double t);

/// int G_alpha(|x|, t) d^d x by composite Gauss-Legendre in r.
double greensMass(double alpha, double diffusivity, std::size_t d, double t);

/// Solution on a grid with one fractional (time) axis and `dim` classical
/// axes. Fourier modes are evaluated in closed form; smooth or delta data on
/// a periodic box are propagated spectrally; delta data on truncated lines
/// give phi_0 G_alpha(|x|, t); Gaussian data on a truncated line (d = 1) is
/// convolved with G_alpha. Delta data carries exponent -alpha/2 in time.
SampledField solve(const DiffusionProblem& problem, const Grid& grid, const SolveOptions& options = {});

/// Solution of the conjugated equation -D^alpha phi' - C Laplace(phi') +
/// phi'(x,0) t^{-alpha} / Gamma(1 - alpha) = 0: each Fourier mode |k| <= K of
/// the initial data grows as E_alpha(+C k^2 t^alpha); higher modes are
/// removed. Fourier-mode data may live on any classical axes.
SampledField solveConjugate(const DiffusionProblem& problem, const Grid& grid, double bandLimit);

/// Least-squares slope of log v against log t over the first decade of t.
double asymptoticExponent(std::span<const double> t, std::span<const double> v);

}  // namespace fracflux
