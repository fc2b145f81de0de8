#pragma once

#include <functional>
#include <vector>

namespace coulgas {

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);  // unbiased (n-1)

struct BatchMeans {
    double mean = 0.0;
    double se = 0.0;  // standard error of the mean from batch variance
    int batches = 0;
};

// Batch-means standard error; throws InsufficientDataError below min_batches.
BatchMeans batch_means(const std::vector<double>& x, int min_batches = 20);

// Effective sample size from the initial-positive-sequence autocorrelation sum.
double effective_sample_size(const std::vector<double>& x);

// Kolmogorov asymptotic tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

struct KsResult {
    double statistic = 0.0;  // sup-distance D
    double p_value = 1.0;
};

// One-sample KS test against a CDF.
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);

// Two-sample KS test.
KsResult ks_test_two(std::vector<double> a, std::vector<double> b);

// D'Agostino K^2 normality test (skewness + kurtosis), p from chi^2(2 dof).
struct NormalityResult {
    double k2 = 0.0;
    double p_value = 1.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};
NormalityResult dagostino_k2(const std::vector<double>& x);

// log(mean exp(s * x)) with a jackknife standard error.
struct LogMeanExp {
    double value = 0.0;
    double se = 0.0;
};
LogMeanExp log_mean_exp(const std::vector<double>& x, double s);

// Ordinary least squares: minimize |A beta - y|; columns of A given as vectors.
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  const std::vector<double>& y);

}  // namespace coulgas
