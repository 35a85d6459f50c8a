#include "glab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "glab/error.hpp"

namespace glab {

Summary summarize(std::span<const double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.count);
    if (s.count < 2) return s;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std_error = std::sqrt(ss / static_cast<double>(s.count - 1) / static_cast<double>(s.count));
    return s;
}

double combined_stderr(double a, double b) { return std::hypot(a, b); }

double kolmogorov_survival(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 0.2) return 1.0;  // the alternating series converges too slowly; P ≈ 1 here
    double sum = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-300) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha, std::size_t min_size) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("ks_two_sample: alpha must lie in (0, 1)");
    if (a.size() < min_size || b.size() < min_size)
        throw ParameterError("ks_two_sample: each sample needs at least " + std::to_string(min_size) + " values");

    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());

    // Walk both sorted samples, stepping past every copy of a tied value.
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }

    KsResult r;
    r.statistic = d;
    const double scale = std::sqrt((n + m) / (n * m));
    r.critical = std::sqrt(-0.5 * std::log(alpha / 2.0)) * scale;
    r.p_value = kolmogorov_survival(d / scale);
    r.pass = d <= r.critical;
    return r;
}

}  // namespace glab
