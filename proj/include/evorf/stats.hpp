#pragma once

#include <span>
#include <vector>

namespace evorf::stats {

double mean(std::span<const double> xs);

// Sample standard deviation (n−1 denominator); 0 for fewer than 2 values.
double sample_sd(std::span<const double> xs);

// Middle element, or the average of the two middle elements.
double median(std::vector<double> xs);

struct Ols {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double f_statistic = 0.0;
    int df1 = 1;
    int df2 = 0;
    double p_value = 1.0;
};

// Simple linear regression of y on x with an F-test of the slope
// (df = 1, n−2). Throws on fewer than 3 points or zero variance in x.
Ols ols(std::span<const double> x, std::span<const double> y);

// Upper tail P(F > f) of the F distribution, via the regularized incomplete
// beta function.
double f_survival(double f, int df1, int df2);

}  // namespace evorf::stats
