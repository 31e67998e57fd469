#include "zetatrace/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zetatrace {

namespace {

constexpr int kGaussOrder = 16;
constexpr int kMaxPanels = 1 << 16;

struct GaussRule {
    std::array<double, kGaussOrder> nodes;
    std::array<double, kGaussOrder> weights;
};

/// Legendre nodes and weights on [-1, 1] found by Newton iteration.
GaussRule build_gauss_rule() {
    GaussRule rule{};
    const int n = kGaussOrder;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        rule.nodes[static_cast<size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const GaussRule& gauss_rule() {
    static const GaussRule rule = build_gauss_rule();
    return rule;
}

QuadraturePlan plan_with_panels(double lo, double hi, int panels) {
    const GaussRule& rule = gauss_rule();
    QuadraturePlan plan;
    plan.panels = panels;
    plan.points_per_panel = kGaussOrder;
    plan.nodes.reserve(static_cast<size_t>(panels) * kGaussOrder);
    plan.weights.reserve(static_cast<size_t>(panels) * kGaussOrder);
    const double step = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * step;
        const double mid = a + 0.5 * step;
        const double half = 0.5 * step;
        for (int i = 0; i < kGaussOrder; ++i) {
            plan.nodes.push_back(mid + half * rule.nodes[static_cast<size_t>(i)]);
            plan.weights.push_back(half * rule.weights[static_cast<size_t>(i)]);
        }
    }
    return plan;
}

}  // namespace

double pairwise_sum(const double* values, size_t count) {
    if (count == 0) return 0.0;
    if (count <= 8) {
        double acc = values[0];
        for (size_t i = 1; i < count; ++i) acc += values[i];
        return acc;
    }
    const size_t half = count / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

double pairwise_sum(const std::vector<double>& values) {
    return pairwise_sum(values.data(), values.size());
}

std::complex<double> pairwise_sum(const std::complex<double>* values, size_t count) {
    if (count == 0) return {0.0, 0.0};
    if (count <= 8) {
        std::complex<double> acc = values[0];
        for (size_t i = 1; i < count; ++i) acc += values[i];
        return acc;
    }
    const size_t half = count / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& values) {
    return pairwise_sum(values.data(), values.size());
}

std::complex<double> integrate_exp(const QuadraturePlan& plan, const TestFunction& alpha,
                                   std::complex<double> s) {
    std::vector<std::complex<double>> terms;
    terms.reserve(plan.nodes.size());
    for (size_t i = 0; i < plan.nodes.size(); ++i) {
        const double t = plan.nodes[i];
        terms.push_back(plan.weights[i] * alpha(t) * std::exp(s * t));
    }
    return pairwise_sum(terms);
}

QuadraturePlan build_quadrature_plan(const TestFunction& alpha, double max_abs_omega,
                                     double abs_tol) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
    const double lo = alpha.support_min();
    const double hi = alpha.support_max();
    const double width = hi - lo;
    const double cycles = width * std::max(max_abs_omega, 1.0) / (2.0 * std::numbers::pi);
    // Start near six points per oscillation cycle, then double until two
    // reference integrals stabilize.
    int panels = 8;
    while (panels * kGaussOrder < cycles * 6.0 && panels < kMaxPanels) panels *= 2;
    // The convergence target is scaled by the largest factor exp(Re s * t)
    // reachable with Re s in [0, 1] over the support, times the amplitude.
    const double scale =
        std::abs(alpha.amplitude) * std::exp(std::max(0.0, hi)) *
        std::max(1.0, width);
    const double target = abs_tol * std::max(1.0, scale);
    const std::complex<double> s1(0.0, max_abs_omega);
    const std::complex<double> s2(1.0, max_abs_omega);
    auto eval = [&](int np, std::complex<double> s) {
        return integrate_exp(plan_with_panels(lo, hi, np), alpha, s);
    };
    std::complex<double> i1 = eval(panels, s1);
    std::complex<double> i2 = eval(panels, s2);
    while (panels < kMaxPanels) {
        const int next = panels * 2;
        const std::complex<double> j1 = eval(next, s1);
        const std::complex<double> j2 = eval(next, s2);
        const bool converged = std::abs(j1 - i1) <= target && std::abs(j2 - i2) <= target;
        panels = next;
        i1 = j1;
        i2 = j2;
        if (converged) break;
    }
    return plan_with_panels(lo, hi, panels);
}

}  // namespace zetatrace
