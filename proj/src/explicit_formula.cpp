#include "zetatrace/explicit_formula.hpp"

#include "zetatrace/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace zetatrace {

namespace {

constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

/// Accumulates one vertical family of transform values at rho + 2 pi i nu / log q.
/// Each node carries a unit rotor advanced by e^{2 pi i t / log q} per nu; the
/// rotors are resynchronized from exact reduced angles every 64 steps so the
/// recurrence never drifts beyond a few ulps.
SpectralFamily accumulate_family(const QuadraturePlan& plan,
                                 const std::vector<double>& alpha_values,
                                 std::complex<double> rho, int64_t q, int nu_max,
                                 double quadrature_tol) {
    const int count = 2 * nu_max + 1;
    SpectralFamily family;
    family.rho = rho;
    family.terms.assign(static_cast<size_t>(count), {0.0, 0.0});
    const long double logq_l = std::log(static_cast<long double>(q));

    const size_t nodes = plan.nodes.size();
    std::vector<double> base_re(nodes), base_im(nodes);
    std::vector<double> step_re(nodes), step_im(nodes);
    std::vector<double> rot_re(nodes), rot_im(nodes);
    std::vector<long double> theta(nodes);
    for (size_t i = 0; i < nodes; ++i) {
        const double t = plan.nodes[i];
        const std::complex<double> base =
            plan.weights[i] * alpha_values[i] * std::exp(rho * t);
        base_re[i] = base.real();
        base_im[i] = base.imag();
        theta[i] = kTwoPiL * static_cast<long double>(t) / logq_l;
        const double step_angle = static_cast<double>(std::remainder(theta[i], kTwoPiL));
        step_re[i] = std::cos(step_angle);
        step_im[i] = std::sin(step_angle);
    }
    for (int idx = 0; idx < count; ++idx) {
        const int nu = idx - nu_max;
        if ((idx & 63) == 0) {
            for (size_t i = 0; i < nodes; ++i) {
                const double angle = static_cast<double>(std::remainder(theta[i] * nu, kTwoPiL));
                rot_re[i] = std::cos(angle);
                rot_im[i] = std::sin(angle);
            }
        }
        double acc_re = 0.0, acc_im = 0.0;
        for (size_t i = 0; i < nodes; ++i) {
            acc_re += base_re[i] * rot_re[i] - base_im[i] * rot_im[i];
            acc_im += base_re[i] * rot_im[i] + base_im[i] * rot_re[i];
            const double next_re = rot_re[i] * step_re[i] - rot_im[i] * step_im[i];
            const double next_im = rot_re[i] * step_im[i] + rot_im[i] * step_re[i];
            rot_re[i] = next_re;
            rot_im[i] = next_im;
        }
        family.terms[static_cast<size_t>(idx)] = {acc_re, acc_im};
    }
    family.value = pairwise_sum(family.terms);
    const double first = std::abs(family.terms.front());
    const double last = std::abs(family.terms.back());
    family.tail_bound = std::max(first, last) * nu_max * 10.0 +
                        quadrature_tol * static_cast<double>(count);
    return family;
}

}  // namespace

std::complex<double> phi_transform(const TestFunction& alpha, std::complex<double> s,
                                   double abs_tol) {
    const QuadraturePlan plan = build_quadrature_plan(alpha, std::abs(s.imag()), abs_tol);
    return integrate_exp(plan, alpha, s);
}

SpectralFamily spectral_sum(const TestFunction& alpha, std::complex<double> rho, int64_t q,
                            int nu_max, const FormulaOptions& opts) {
    if (nu_max < 0) throw std::invalid_argument("spectral sum needs nu_max >= 0");
    const double logq = std::log(static_cast<double>(q));
    const double omega =
        std::abs(rho.imag()) + 2.0 * std::numbers::pi * (nu_max + 1) / logq;
    const QuadraturePlan plan = build_quadrature_plan(alpha, omega, opts.quadrature_tol);
    std::vector<double> alpha_values;
    alpha_values.reserve(plan.nodes.size());
    for (const double t : plan.nodes) alpha_values.push_back(alpha(t));
    return accumulate_family(plan, alpha_values, rho, q, nu_max, opts.quadrature_tol);
}

SpectralInput spectral_input(const ZetaData& zd, double max_support_radius) {
    SpectralInput input;
    input.genus = zd.genus;
    input.q = zd.q;
    const auto zeros = zd.zeros();
    input.zeros.assign(zeros.begin(), zeros.end());
    const double logq = std::log(static_cast<double>(zd.q));
    const int depth = std::max(0, static_cast<int>(std::ceil(max_support_radius / logq - 1e-12)));
    const ClosedPointCensus census = closed_point_census(zd, depth);
    for (const auto& line : census.lines) input.orbit_counts.push_back(line.orbit_count);
    return input;
}

SpectralSide spectral_side(const SpectralInput& input, const TestFunction& alpha, int nu_max,
                           const FormulaOptions& opts) {
    if (nu_max < 0) throw std::invalid_argument("spectral side needs nu_max >= 0");
    SpectralSide side;
    side.nu_max = nu_max;
    const double logq = std::log(static_cast<double>(input.q));
    double max_zero_im = 0.0;
    for (const auto& rho : input.zeros) max_zero_im = std::max(max_zero_im, std::abs(rho.imag()));
    const double omega = max_zero_im + 2.0 * std::numbers::pi * (nu_max + 1) / logq;
    const QuadraturePlan plan = build_quadrature_plan(alpha, omega, opts.quadrature_tol);
    std::vector<double> alpha_values;
    alpha_values.reserve(plan.nodes.size());
    for (const double t : plan.nodes) alpha_values.push_back(alpha(t));

    side.families.push_back(accumulate_family(plan, alpha_values, {0.0, 0.0}, input.q, nu_max,
                                              opts.quadrature_tol));
    for (const auto& rho : input.zeros) {
        side.families.push_back(
            accumulate_family(plan, alpha_values, rho, input.q, nu_max, opts.quadrature_tol));
    }
    side.families.push_back(accumulate_family(plan, alpha_values, {1.0, 0.0}, input.q, nu_max,
                                              opts.quadrature_tol));

    side.h0 = side.families.front().value.real();
    side.h2 = side.families.back().value.real();
    std::vector<std::complex<double>> zero_values;
    for (size_t j = 1; j + 1 < side.families.size(); ++j) {
        zero_values.push_back(side.families[j].value);
    }
    side.h1 = pairwise_sum(zero_values).real();
    side.value = side.h0 - side.h1 + side.h2;
    side.tail_bound = 0.0;
    for (const auto& fam : side.families) side.tail_bound += fam.tail_bound;
    return side;
}

GeometricSide geometric_side(const SpectralInput& input, const TestFunction& alpha) {
    GeometricSide side;
    const double logq = std::log(static_cast<double>(input.q));
    side.euler_term = (2.0 - 2.0 * input.genus) * alpha(0.0) * logq;
    const double radius = alpha.support_radius();
    const int needed = std::max(0, static_cast<int>(std::ceil(radius / logq - 1e-12)));
    if (static_cast<int>(input.orbit_counts.size()) < needed) {
        throw std::invalid_argument(
            "orbit census is too shallow for the support of the test function");
    }
    side.max_degree = needed;
    const double sup_max = alpha.support_max();
    const double sup_min = alpha.support_min();
    for (int d = 1; d <= needed; ++d) {
        const double b = static_cast<double>(input.orbit_counts[static_cast<size_t>(d - 1)]);
        const double length = d * logq;
        for (int k = 1;; ++k) {
            const double pos = k * length;
            const bool forward_in = pos < sup_max;
            const bool backward_in = -pos > sup_min;
            if (!forward_in && !backward_in) break;
            if (forward_in) {
                const double value = b * length * alpha(pos);
                side.terms.push_back(OrbitTerm{d, k, pos, value});
            }
            if (backward_in) {
                const double weight = std::pow(static_cast<double>(input.q),
                                               -static_cast<double>(k) * d);
                const double value = b * length * weight * alpha(-pos);
                side.terms.push_back(OrbitTerm{d, -k, -pos, value});
            }
        }
    }
    std::vector<double> values;
    values.reserve(side.terms.size());
    for (const auto& term : side.terms) values.push_back(term.value);
    side.orbit_sum = pairwise_sum(values);
    side.value = side.euler_term + side.orbit_sum;
    return side;
}

TraceReport verify_trace_formula(const SpectralInput& input, const TestFunction& alpha,
                                 int nu_max, const FormulaOptions& opts) {
    TraceReport report;
    report.spectral = spectral_side(input, alpha, nu_max, opts);
    report.geometric = geometric_side(input, alpha);
    report.lhs = report.spectral.value;
    report.rhs = report.geometric.value;
    report.residual = std::abs(report.lhs - report.rhs);
    report.tail_bound = report.spectral.tail_bound;
    report.formula_tol = opts.formula_tol;
    report.pass = report.residual <= opts.formula_tol + report.tail_bound;
    return report;
}

TraceReport verify_trace_formula(const ZetaData& zd, const TestFunction& alpha, int nu_max,
                                 const FormulaOptions& opts) {
    const SpectralInput input = spectral_input(zd, alpha.support_radius());
    return verify_trace_formula(input, alpha, nu_max, opts);
}

std::string trace_report_json(const TraceReport& report) {
    nlohmann::ordered_json out;
    out["lhs"] = report.lhs;
    out["rhs"] = report.rhs;
    out["residual"] = report.residual;
    out["tail_bound"] = report.tail_bound;
    out["formula_tol"] = report.formula_tol;
    out["pass"] = report.pass;
    out["nu_max"] = report.spectral.nu_max;
    out["spectral"] = {{"h0", report.spectral.h0},
                       {"h1", report.spectral.h1},
                       {"h2", report.spectral.h2},
                       {"tail_bound", report.spectral.tail_bound}};
    out["geometric"] = {{"euler_term", report.geometric.euler_term},
                        {"orbit_sum", report.geometric.orbit_sum},
                        {"max_degree", report.geometric.max_degree}};
    out["per_term"] = nlohmann::ordered_json::array();
    for (const auto& fam : report.spectral.families) {
        out["per_term"].push_back({{"side", "spectral"},
                                   {"rho_re", fam.rho.real()},
                                   {"rho_im", fam.rho.imag()},
                                   {"value_re", fam.value.real()},
                                   {"value_im", fam.value.imag()},
                                   {"tail_bound", fam.tail_bound}});
    }
    out["per_term"].push_back({{"side", "geometric"},
                               {"term", "euler"},
                               {"value", report.geometric.euler_term}});
    for (const auto& term : report.geometric.terms) {
        out["per_term"].push_back({{"side", "geometric"},
                                   {"d", term.degree},
                                   {"k", term.k},
                                   {"position", term.position},
                                   {"value", term.value}});
    }
    return out.dump(2);
}

std::string trace_plot_csv(const TraceReport& report) {
    std::ostringstream out;
    out << "nu,h0,h1,h2,lhs_partial\n";
    const auto& families = report.spectral.families;
    const int nu_max = report.spectral.nu_max;
    const size_t zero_count = families.size() - 2;
    double h0 = 0.0, h1 = 0.0, h2 = 0.0;
    auto term_at = [&](const SpectralFamily& fam, int nu) {
        return fam.terms[static_cast<size_t>(nu + nu_max)];
    };
    for (int n = 0; n <= nu_max; ++n) {
        for (const int nu : {n, -n}) {
            if (nu == 0 && n != 0) continue;
            h0 += term_at(families.front(), nu).real();
            h2 += term_at(families.back(), nu).real();
            for (size_t j = 0; j < zero_count; ++j) {
                h1 += term_at(families[j + 1], nu).real();
            }
            if (n == 0) break;
        }
        out << n << ',' << format_double(h0) << ',' << format_double(h1) << ','
            << format_double(h2) << ',' << format_double(h0 - h1 + h2) << '\n';
    }
    return out.str();
}

int alternating_trace_sign(const std::array<std::array<double, 2>, 2>& m) {
    const double det_id_minus =
        (1.0 - m[0][0]) * (1.0 - m[1][1]) - m[0][1] * m[1][0];
    if (std::abs(det_id_minus) < 1e-9) {
        throw std::domain_error("alternating trace is degenerate: map has eigenvalue 1");
    }
    return det_id_minus > 0.0 ? 1 : -1;
}

Rational guillemin_sternberg_weight(std::complex<double> leaf_jacobian,
                                    const Rational& transversal_factor,
                                    FlowDirection direction) {
    if (std::abs(leaf_jacobian - 1.0) < 1e-9) {
        throw std::domain_error("leaf Jacobian is degenerate: eigenvalue within 1e-9 of 1");
    }
    // The leaf acts as multiplication by a complex scalar; its realification
    // has det(I - M) = |1 - lambda|^2 > 0, so the alternating sign is +1.
    const std::array<std::array<double, 2>, 2> real_form{
        {{leaf_jacobian.real(), -leaf_jacobian.imag()},
         {leaf_jacobian.imag(), leaf_jacobian.real()}}};
    const int sign = alternating_trace_sign(real_form);
    Rational weight = direction == FlowDirection::Minus ? transversal_factor : Rational(1);
    if (sign < 0) weight = -weight;
    return weight;
}

}  // namespace zetatrace
