#include "evorf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evorf/error.hpp"

namespace evorf::stats {

double mean(std::span<const double> xs) {
    if (xs.empty()) throw ValidationError("mean of empty sample");
    double sum = 0.0;
    for (const double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (const double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double median(std::vector<double> xs) {
    if (xs.empty()) throw ValidationError("median of empty sample");
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    if (n % 2 == 1) return xs[n / 2];
    return (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

namespace {

// Incomplete beta continued fraction (Lentz's method).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 200;
    constexpr double kEps = 3.0e-16;
    constexpr double kTiny = 1.0e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

// Regularized incomplete beta I_x(a, b).
double betai(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                               a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double f_survival(double f, int df1, int df2) {
    if (df1 < 1 || df2 < 1) throw ValidationError("F distribution needs positive df");
    if (std::isnan(f)) return std::nan("");
    if (f <= 0.0) return 1.0;
    const double d1 = df1, d2 = df2;
    const double x = d2 / (d2 + d1 * f);
    return betai(d2 / 2.0, d1 / 2.0, x);
}

Ols ols(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("x and y lengths differ");
    const std::size_t n = x.size();
    if (n < 3) throw ValidationError("regression needs at least 3 points");

    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw ValidationError("zero variance in x; slope undefined");

    Ols r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.df1 = 1;
    r.df2 = static_cast<int>(n) - 2;

    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (r.intercept + r.slope * x[i]);
        ss_res += e * e;
    }
    if (syy == 0.0) {
        // constant response: the slope is exactly 0 and explains nothing
        r.r_squared = 0.0;
        r.f_statistic = 0.0;
        r.p_value = 1.0;
        return r;
    }
    r.r_squared = 1.0 - ss_res / syy;
    if (r.r_squared < 0.0) r.r_squared = 0.0;
    if (r.r_squared > 1.0) r.r_squared = 1.0;
    if (ss_res == 0.0) {
        r.f_statistic = std::numeric_limits<double>::infinity();
        r.p_value = 0.0;
        return r;
    }
    r.f_statistic = (syy - ss_res) / (ss_res / static_cast<double>(r.df2));
    if (r.f_statistic < 0.0) r.f_statistic = 0.0;
    r.p_value = f_survival(r.f_statistic, r.df1, r.df2);
    return r;
}

}  // namespace evorf::stats
