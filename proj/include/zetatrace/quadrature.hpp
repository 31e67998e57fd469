#pragma once

#include "zetatrace/test_function.hpp"

#include <complex>
#include <vector>

namespace zetatrace {

/// Deterministic pairwise reduction (fixed halving tree).
double pairwise_sum(const std::vector<double>& xs);
std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& xs);

/// Composite Gauss-Legendre rule over the support of one test function. The
/// node set is frozen once per plan, so every s evaluated against the plan
/// sees identical nodes and results are bit-for-bit reproducible.
struct QuadraturePlan {
    std::vector<double> nodes;
    std::vector<double> weights;
    int panels = 0;
    int points_per_panel = 0;
};

/// Plan able to integrate e^{s t} alpha(t) to roughly abs_tol for all
/// |Im s| <= max_abs_omega, |Re s| <= 1. Starts from a density of six nodes
/// per oscillation cycle and doubles the panel count until reference
/// integrands at the extreme frequencies stabilize within abs_tol.
QuadraturePlan build_quadrature_plan(const TestFunction& alpha, double max_abs_omega,
                                     double abs_tol);

/// integral e^{s t} alpha(t) dt over the plan's nodes, pairwise-summed.
std::complex<double> integrate_exp(const QuadraturePlan& plan, const TestFunction& alpha,
                                   std::complex<double> s);

}  // namespace zetatrace
