#pragma once

#include <span>

namespace fairsample {

double mean(std::span<const double> v);
/// Sample standard deviation (n-1 denominator); 0 for n < 2.
double sample_sd(std::span<const double> v);
/// sd / sqrt(n); 0 for a single value.
double standard_error(std::span<const double> v);

/// Regularized incomplete beta function I_x(a, b), a,b > 0, x in [0,1].
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided tail probability of a Student-t statistic with df degrees of
/// freedom: I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    int df = 0;
};

/// Paired two-sided Student t-test on equal-length samples.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace fairsample
