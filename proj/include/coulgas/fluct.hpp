#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "coulgas/energy.hpp"
#include "coulgas/equilibrium.hpp"
#include "coulgas/stats.hpp"

namespace coulgas {

enum class TestFunctionKind { RadialBump, Polynomial1D, Custom };

// Compactly supported C^2 test function xi (also used as the transport field
// psi of the anisotropy functional).
class TestFunction {
  public:
    // 1 on |x - center| <= r_inner, quintic-smoothstep down to 0 at r_outer.
    static TestFunction radial_bump(const Vec& center, double r_inner, double r_outer, int d);
    // P(x) multiplied by a C^2 window: 1 on [-w_inner, w_inner], 0 beyond w_outer.
    static TestFunction polynomial1d(std::vector<double> coeffs, double w_inner, double w_outer);
    static TestFunction custom(std::function<double(const Vec&)> f,
                               std::function<Vec(const Vec&)> grad, int d,
                               const Vec& support_center, double support_radius);

    TestFunctionKind kind() const { return kind_; }
    int dim() const { return d_; }
    double operator()(const Vec& x) const { return f_(x); }
    Vec grad(const Vec& x) const { return grad_(x); }

    const Vec& support_center() const { return center_; }
    double support_radius() const { return radius_; }

    // int |grad xi|^2 over R^d (radial quadrature for bumps, 1D quadrature
    // for windowed polynomials).
    double dirichlet_integral() const;

    // support contained in the open support of mu (margin > 0 required)
    bool supported_inside(const EquilibriumMeasure& eqm, double margin = 0.0) const;

  private:
    TestFunctionKind kind_ = TestFunctionKind::Custom;
    int d_ = 1;
    Vec center_{};
    double radius_ = 0.0;
    double inner_ = 0.0;
    std::function<double(const Vec&)> f_;
    std::function<Vec(const Vec&)> grad_;
};

// int xi dmu by the equilibrium-measure quadrature.
double xi_mean(const EquilibriumMeasure& eqm, const TestFunction& xi, double tol = 1e-10);

// Fluct_N(xi) = sum xi(x_i) - N int xi dmu.
double fluct_linear(const Configuration& config, const EquilibriumMeasure& eqm,
                    const TestFunction& xi);
// Variant with a precomputed int xi dmu (for sample streams).
double fluct_linear(const Configuration& config, const TestFunction& xi, double xi_mean_value);

struct VariancePrediction {
    double v_xi = 0.0;            // (1/(2 pi beta)) int |grad xi|^2
    double variance = 0.0;        // adopted Gaussian variance = v_xi
    double alt_convention = 0.0;  // 2 v_xi, the "m s + v s^2" reading; recorded, not asserted
};

// Log2 case only; xi must be supported in the interior of the support.
VariancePrediction variance_prediction(const TestFunction& xi, double beta,
                                       const EquilibriumMeasure& eqm);

// log E[exp(s Fluct)] over a sample of Fluct values, with jackknife SE.
LogMeanExp empirical_log_laplace(const std::vector<double>& fluct_values, double s);

// A[X_N, psi, mu] = iint (psi(x)-psi(y))/(x-y) dfluct dfluct, d = 1.
double anisotropy_1d(const Configuration& config, const EquilibriumMeasure& eqm,
                     const TestFunction& psi, double tol = 1e-10);

struct CltReport {
    double beta = 0.0;
    int n = 0;
    double sample_mean = 0.0;
    double se_mean = 0.0;
    double sample_variance = 0.0;
    double se_variance = 0.0;
    double predicted_variance = 0.0;       // v_xi convention
    double predicted_variance_alt = 0.0;   // 2 v_xi convention
    double p_normal = 0.0;
    std::size_t sample_size = 0;
    double ess = 0.0;
};

// Assemble the CLT report from a stream of Fluct values (batch-means errors).
CltReport clt_report(const std::vector<double>& fluct_values, double beta, int n,
                     const std::optional<VariancePrediction>& pred);

struct ConcentrationRow {
    int n = 0;
    double exp_moment = 0.0;  // (1/N) log E exp((beta/4)(F_N + (N/d) log N [log case]))
    double se = 0.0;
    double fluct_variance = 0.0;
};

struct ConcentrationReport {
    std::vector<ConcentrationRow> rows;
    bool insufficient_data = false;
};

// fn_values[i] pairs with fluct_values[i] for a fixed N; call per N.
ConcentrationRow concentration_row(const std::vector<double>& fn_values,
                                   const std::vector<double>& fluct_values, int n, double beta,
                                   int d, bool log_case);

struct LocalStatsReport {
    std::vector<double> nn_distances;  // blown-up nearest-neighbor distances
    double mean_nn = 0.0;
    double gap_variance = 0.0;  // 1D only: variance of consecutive gaps
    int tags_used = 0;
    int tags_skipped = 0;
};

// Blow up by N^{1/d} around each tag and collect local statistics in a
// window of side R (blown-up units).
LocalStatsReport local_statistics(const std::vector<Configuration>& samples,
                                  const EquilibriumMeasure& eqm, const std::vector<Vec>& tags,
                                  double window);

}  // namespace coulgas
