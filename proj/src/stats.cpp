#include "coulgas/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "coulgas/error.hpp"

namespace coulgas {

double mean(const std::vector<double>& x) {
    if (x.empty()) throw InsufficientDataError("mean: empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / x.size();
}

double variance(const std::vector<double>& x) {
    if (x.size() < 2) throw InsufficientDataError("variance: need at least 2 samples");
    double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / (x.size() - 1);
}

BatchMeans batch_means(const std::vector<double>& x, int min_batches) {
    int n = static_cast<int>(x.size());
    if (n < 2 * min_batches)
        throw InsufficientDataError("batch_means: fewer than 2 samples per batch");
    int nb = min_batches;
    int bs = n / nb;
    std::vector<double> bm(static_cast<size_t>(nb));
    for (int b = 0; b < nb; ++b) {
        double s = 0.0;
        for (int i = b * bs; i < (b + 1) * bs; ++i) s += x[static_cast<size_t>(i)];
        bm[static_cast<size_t>(b)] = s / bs;
    }
    BatchMeans r;
    r.batches = nb;
    r.mean = mean(bm);
    r.se = std::sqrt(variance(bm) / nb);
    return r;
}

double effective_sample_size(const std::vector<double>& x) {
    int n = static_cast<int>(x.size());
    if (n < 4) throw InsufficientDataError("effective_sample_size: too few samples");
    double m = mean(x);
    double c0 = 0.0;
    for (double v : x) c0 += (v - m) * (v - m);
    c0 /= n;
    if (c0 == 0.0) return 1.0;
    double tau = 1.0;
    int maxlag = std::min(n - 2, 2000);
    for (int k = 1; k <= maxlag; ++k) {
        double ck = 0.0;
        for (int i = 0; i + k < n; ++i)
            ck += (x[static_cast<size_t>(i)] - m) * (x[static_cast<size_t>(i + k)] - m);
        ck /= n;
        double rho = ck / c0;
        if (rho <= 0.0) break;
        tau += 2.0 * rho;
    }
    return std::clamp(n / tau, 1.0, static_cast<double>(n));
}

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {
double ks_lambda(double d, double ne) {
    double s = std::sqrt(ne);
    return (s + 0.12 + 0.11 / s) * d;
}
}  // namespace

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw InsufficientDataError("ks_test: empty sample");
    std::sort(sample.begin(), sample.end());
    double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::max((i + 1) / n - f, f - i / n));
    }
    return {d, kolmogorov_q(ks_lambda(d, n))};
}

KsResult ks_test_two(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw InsufficientDataError("ks_test_two: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double xa = a[i], xb = b[j];
        if (xa <= xb) ++i;
        if (xb <= xa) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    double ne = na * nb / (na + nb);
    return {d, kolmogorov_q(ks_lambda(d, ne))};
}

NormalityResult dagostino_k2(const std::vector<double>& x) {
    double n = static_cast<double>(x.size());
    if (n < 20) throw InsufficientDataError("dagostino_k2: need at least 20 samples");
    double m = mean(x);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    double g1 = m3 / std::pow(m2, 1.5);
    double b2 = m4 / (m2 * m2);

    // skewness (D'Agostino 1970)
    double Y = g1 * std::sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)));
    double beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0) /
                   ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
    double W2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
    double delta = 1.0 / std::sqrt(0.5 * std::log(W2));
    double alpha = std::sqrt(2.0 / (W2 - 1.0));
    double Ya = Y / alpha;
    double z1 = delta * std::log(Ya + std::sqrt(Ya * Ya + 1.0));

    // kurtosis (Anscombe-Glynn 1983)
    double eb2 = 3.0 * (n - 1.0) / (n + 1.0);
    double vb2 = 24.0 * n * (n - 2.0) * (n - 3.0) / ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0));
    double xs = (b2 - eb2) / std::sqrt(vb2);
    double sb = 6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0)) *
                std::sqrt(6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0)));
    double A = 6.0 + 8.0 / sb * (2.0 / sb + std::sqrt(1.0 + 4.0 / (sb * sb)));
    double num = 1.0 - 2.0 / A;
    double den = 1.0 + xs * std::sqrt(2.0 / (A - 4.0));
    double z2 = ((1.0 - 2.0 / (9.0 * A)) - std::cbrt(num / den)) / std::sqrt(2.0 / (9.0 * A));

    NormalityResult r;
    r.skewness = g1;
    r.excess_kurtosis = b2 - 3.0;
    r.k2 = z1 * z1 + z2 * z2;
    r.p_value = std::exp(-0.5 * r.k2);  // chi^2 survival with 2 dof
    return r;
}

LogMeanExp log_mean_exp(const std::vector<double>& x, double s) {
    if (x.size() < 2) throw InsufficientDataError("log_mean_exp: need at least 2 samples");
    size_t n = x.size();
    double mx = s * x[0];
    for (double v : x) mx = std::max(mx, s * v);
    if (!std::isfinite(mx)) throw std::range_error("log_mean_exp: overflow; reduce s");
    double tot = 0.0;
    std::vector<double> e(n);
    for (size_t i = 0; i < n; ++i) {
        e[i] = std::exp(s * x[i] - mx);
        tot += e[i];
    }
    LogMeanExp r;
    r.value = mx + std::log(tot / n);
    // jackknife
    double jm = 0.0;
    std::vector<double> jk(n);
    for (size_t i = 0; i < n; ++i) {
        jk[i] = mx + std::log((tot - e[i]) / (n - 1));
        jm += jk[i];
    }
    jm /= n;
    double v = 0.0;
    for (size_t i = 0; i < n; ++i) v += (jk[i] - jm) * (jk[i] - jm);
    r.se = std::sqrt(v * (n - 1) / n);
    return r;
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  const std::vector<double>& y) {
    if (columns.empty()) throw std::invalid_argument("least_squares: no columns");
    Eigen::Index rows = static_cast<Eigen::Index>(y.size());
    Eigen::Index cols = static_cast<Eigen::Index>(columns.size());
    Eigen::MatrixXd A(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        if (static_cast<Eigen::Index>(columns[static_cast<size_t>(c)].size()) != rows)
            throw std::invalid_argument("least_squares: column length mismatch");
        for (Eigen::Index r = 0; r < rows; ++r)
            A(r, c) = columns[static_cast<size_t>(c)][static_cast<size_t>(r)];
    }
    Eigen::VectorXd b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) b(r) = y[static_cast<size_t>(r)];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < cols) throw std::invalid_argument("least_squares: rank-deficient design");
    Eigen::VectorXd beta = qr.solve(b);
    return std::vector<double>(beta.data(), beta.data() + cols);
}

}  // namespace coulgas
