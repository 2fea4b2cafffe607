#pragma once

#include <span>
#include <vector>

namespace corpusdiff {

double log_beta(double a, double b);
double regularized_incomplete_beta(double x, double a, double b);

// P(T >= t) for Student's t with df degrees of freedom.
double student_t_sf(double t, double df);

// Q(a, x): upper regularized incomplete gamma.
double regularized_gamma_q(double a, double x);

// P(X >= x) for chi-square with df degrees of freedom.
double chi_square_sf(double x, int df);

struct WelchResult {
    double t;
    double df;
    double p; // one-sided, H0: mean(a) <= mean(b)
};

/// Welch's unequal-variance t-test of H0: mean(a) <= mean(b), returning the
/// one-sided p-value. Requires at least two entries per side. When both sides
/// have zero variance the t statistic is undefined and the p-value is pinned
/// by the sign of the mean difference: 0 if mean(a) > mean(b), 1 if
/// mean(a) < mean(b), 0.5 if equal.
WelchResult welch_one_sided(std::span<const double> a, std::span<const double> b);
double one_sided_t_test(std::span<const double> a, std::span<const double> b);

} // namespace corpusdiff
