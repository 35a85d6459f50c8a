#pragma once

#include <span>

namespace glab {

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    /// Standard error of the mean (sample standard deviation / √n); 0 for n < 2.
    double std_error = 0.0;
};

Summary summarize(std::span<const double> values);

/// √(a² + b²)
double combined_stderr(double a, double b);

struct KsResult {
    double statistic = 0.0;
    /// Asymptotic critical value c(α)·√((n+m)/(nm)).
    double critical = 0.0;
    double p_value = 1.0;
    bool pass = true;
};

/// Two-sample Kolmogorov–Smirnov test with the asymptotic critical value.
/// Throws ParameterError if either sample has fewer than `min_size` values
/// or alpha is outside (0, 1).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha = 0.01,
                       std::size_t min_size = 200);

/// P(K > t) for the Kolmogorov distribution.
double kolmogorov_survival(double t);

}  // namespace glab
