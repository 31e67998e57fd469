#include "zetatrace/cli.hpp"

#include "zetatrace/census.hpp"
#include "zetatrace/curve.hpp"
#include "zetatrace/errors.hpp"
#include "zetatrace/explicit_formula.hpp"
#include "zetatrace/padic.hpp"
#include "zetatrace/tate.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace zetatrace {

namespace {

using Json = nlohmann::ordered_json;

std::string rational_str(const Rational& r) {
    std::ostringstream out;
    out << r;
    return out.str();
}

/// Portable uniform double in [-1, 1) built from the raw 64-bit stream.
double uniform_pm1(std::mt19937_64& rng) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * unit - 1.0;
}

int64_t uniform_below(std::mt19937_64& rng, int64_t bound) {
    return static_cast<int64_t>(rng() % static_cast<uint64_t>(bound));
}

CharNormConvention parse_convention(const std::string& name) {
    if (name == "conductor") return CharNormConvention::Conductor;
    if (name == "topdigit") return CharNormConvention::TopDigit;
    throw CLI::ValidationError("--convention", "must be conductor or topdigit");
}

// ---------------------------------------------------------------- zeta verb

struct ZetaArgs {
    std::string curve;
    std::string eval;
    bool check_zeros = false;
    bool check_fe = false;
    bool check_euler = false;
    int euler_depth = 10;
};

int run_zeta(const ZetaArgs& args, std::ostream& out) {
    const CurveSpec curve = parse_curve_spec(args.curve);
    const ZetaData zd = zeta_data(curve);
    Json report = Json::parse(zeta_json(zd));
    bool all_pass = true;
    Json checks = Json::object();

    if (!args.eval.empty()) {
        double re = 0.0, im = 0.0;
        try {
            const auto comma = args.eval.find(',');
            re = std::stod(args.eval.substr(0, comma));
            if (comma != std::string::npos) im = std::stod(args.eval.substr(comma + 1));
        } catch (const std::logic_error&) {
            throw std::invalid_argument("--eval expects re or re,im");
        }
        const std::complex<double> value = zeta_eval(zd, {re, im});
        report["zeta_at"] = {{"s_re", re}, {"s_im", im}, {"re", value.real()},
                             {"im", value.imag()}};
    }

    if (args.check_zeros) {
        const Rational norm_sq = zd.xi_norm_squared_exact();
        const bool norm_ok = norm_sq == Rational(zd.q);
        bool line_ok = true;
        for (const auto& rho : zd.zeros()) line_ok = line_ok && rho.real() == 0.5;
        checks["zeros_on_critical_line"] = {{"xi_norm_squared", rational_str(norm_sq)},
                                            {"norm_matches_q", norm_ok},
                                            {"re_exactly_half", line_ok},
                                            {"pass", norm_ok && line_ok}};
        all_pass = all_pass && norm_ok && line_ok;
    }

    if (args.check_fe) {
        double worst = 0.0;
        for (int j = 1; j <= 20; ++j) {
            const std::complex<double> s(0.05 + 0.045 * j, 0.3 * j - 3.0);
            worst = std::max(worst, functional_equation_residual(zd, s));
        }
        const bool ok = worst <= 1e-10;
        checks["functional_equation"] = {{"grid_points", 20},
                                         {"max_relative_residual", worst},
                                         {"tolerance", 1e-10},
                                         {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (args.check_euler) {
        const int depth = args.euler_depth;
        const ClosedPointCensus census = closed_point_census(zd, depth);
        const std::complex<double> closed = zeta_eval(zd, {2.0, 0.0});
        const double q = static_cast<double>(zd.q);
        double log_product = 0.0;
        std::vector<double> partials;
        for (const auto& line : census.lines) {
            const double local = std::pow(q, -2.0 * line.degree);
            log_product -= static_cast<double>(line.orbit_count) * std::log1p(-local);
            partials.push_back(std::exp(log_product));
        }
        const double final_value = partials.back();
        const double tail =
            4.0 * std::abs(closed) * std::pow(q, -(depth + 1.0)) / (depth + 1.0) + 1e-12;
        const double err = std::abs(final_value - closed.real());
        const bool ok = err <= tail;
        checks["euler_product"] = {{"depth", depth},
                                   {"partial_products", partials},
                                   {"zeta_at_2", closed.real()},
                                   {"final_error", err},
                                   {"tail_bound", tail},
                                   {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (!checks.empty()) {
        report["checks"] = checks;
        report["pass"] = all_pass;
    }
    out << report.dump(2) << '\n';
    return all_pass ? kCliPass : kCliCheckFailed;
}

// -------------------------------------------------------------- census verb

struct CensusArgs {
    std::string curve;
    int max_degree = 5;
    double max_length = 0.0;
    std::string format = "csv";
};

int run_census(const CensusArgs& args, std::ostream& out) {
    const CurveSpec curve = parse_curve_spec(args.curve);
    const ZetaData zd = zeta_data(curve);
    int depth = args.max_degree;
    if (args.max_length > 0.0) {
        depth = static_cast<int>(std::floor(
            args.max_length / std::log(static_cast<double>(zd.q)) + 1e-12));
    }
    const ClosedPointCensus census = closed_point_census(zd, depth);
    if (args.format == "csv") {
        out << census_csv(census);
    } else if (args.format == "json") {
        out << census_json(census) << '\n';
    } else {
        throw std::invalid_argument("--format must be csv or json");
    }
    return kCliPass;
}

// -------------------------------------------------------------- verify verb

struct VerifyArgs {
    std::string curve;
    std::string alpha;
    int nu_max = 256;
    double formula_tol = 1e-8;
    double quad_tol = 1e-12;
    bool poisson = false;
    std::string emit_plot;
};

/// log q * sum_k exp(rho k log q) alpha(k log q), the closed form the
/// vertical family telescopes to.
std::complex<double> poisson_value(const TestFunction& alpha, std::complex<double> rho,
                                   int64_t q) {
    const double logq = std::log(static_cast<double>(q));
    const int kmax = static_cast<int>(std::ceil(alpha.support_radius() / logq)) + 1;
    std::complex<double> acc{0.0, 0.0};
    for (int k = -kmax; k <= kmax; ++k) {
        const double t = k * logq;
        const double a = alpha(t);
        if (a != 0.0) acc += std::exp(rho * t) * a;
    }
    return acc * logq;
}

int run_verify(const VerifyArgs& args, std::ostream& out) {
    const CurveSpec curve = parse_curve_spec(args.curve);
    const ZetaData zd = zeta_data(curve);
    const TestFunction alpha = parse_test_function(args.alpha);
    FormulaOptions opts;
    opts.formula_tol = args.formula_tol;
    opts.quadrature_tol = args.quad_tol;
    const TraceReport report = verify_trace_formula(zd, alpha, args.nu_max, opts);
    Json doc = Json::parse(trace_report_json(report));
    bool all_pass = report.pass;

    if (args.poisson) {
        Json rows = Json::array();
        bool poisson_ok = true;
        for (const auto& fam : report.spectral.families) {
            const std::complex<double> expected = poisson_value(alpha, fam.rho, zd.q);
            const double err = std::abs(fam.value - expected);
            const double allowed = fam.tail_bound + opts.formula_tol;
            poisson_ok = poisson_ok && err <= allowed;
            rows.push_back({{"rho_re", fam.rho.real()},
                            {"rho_im", fam.rho.imag()},
                            {"family_value_re", fam.value.real()},
                            {"family_value_im", fam.value.imag()},
                            {"closed_form_re", expected.real()},
                            {"closed_form_im", expected.imag()},
                            {"error", err},
                            {"allowed", allowed}});
        }
        doc["poisson"] = {{"families", rows}, {"pass", poisson_ok}};
        all_pass = all_pass && poisson_ok;
        doc["pass"] = all_pass;
    }

    if (!args.emit_plot.empty()) {
        if (args.emit_plot == "-") {
            out << trace_plot_csv(report);
        } else {
            std::ofstream file(args.emit_plot);
            if (!file) {
                throw std::invalid_argument("cannot open plot file " + args.emit_plot);
            }
            file << trace_plot_csv(report);
        }
    }
    out << doc.dump(2) << '\n';
    return all_pass ? kCliPass : kCliCheckFailed;
}

// ----------------------------------------------------------- padic lab verb

struct PadicArgs {
    int64_t p = 3;
    int n = 2;
    int m = 2;
    std::string check = "all";
    int samples = 25;
    uint64_t seed = 1;
    int64_t cutoff = -1;
    double lambda = 1.0;
    std::string convention = "conductor";
};

TransversalFunction random_table(int64_t p, int n, int m, std::mt19937_64& rng) {
    TransversalFunction u = make_transversal_function(p, n, m);
    for (auto& v : u.values) v = {uniform_pm1(rng), uniform_pm1(rng)};
    return u;
}

PAdicAffineMap random_unit_map(int64_t p, int n, int m, std::mt19937_64& rng) {
    const TransversalFunction shape = make_transversal_function(p, n, m);
    const int64_t pn = shape.pn();
    for (;;) {
        std::vector<std::vector<int64_t>> linear(static_cast<size_t>(m),
                                                 std::vector<int64_t>(static_cast<size_t>(m)));
        std::vector<int64_t> shift(static_cast<size_t>(m));
        for (auto& row : linear) {
            for (auto& e : row) e = uniform_below(rng, pn);
        }
        for (auto& e : shift) e = uniform_below(rng, pn);
        PAdicAffineMap g = make_affine_map(p, n, std::move(linear), std::move(shift));
        if (g.unit()) return g;
    }
}

double max_abs_diff(const TransversalFunction& a, const TransversalFunction& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    }
    return worst;
}

Json function_json(const TransversalFunction& u) {
    Json data = Json::array();
    for (const auto& v : u.values) data.push_back({v.real(), v.imag()});
    return Json{{"p", u.p}, {"n", u.n}, {"m", u.m}, {"data", data}};
}

int run_padic_lab(const PadicArgs& args, std::ostream& out) {
    const CharNormConvention conv = parse_convention(args.convention);
    const int64_t cutoff = args.cutoff >= 0 ? args.cutoff : args.p;
    std::mt19937_64 rng(args.seed);
    const auto wants = [&](const char* name) {
        return args.check == "all" || args.check == name;
    };
    Json checks = Json::object();
    bool all_pass = true;

    if (wants("fourier")) {
        double worst_rt = 0.0, worst_plancherel = 0.0;
        for (int s = 0; s < args.samples; ++s) {
            const TransversalFunction u = random_table(args.p, args.n, args.m, rng);
            const auto coeffs = fourier(u);
            const TransversalFunction back = inverse_fourier(args.p, args.n, args.m, coeffs);
            worst_rt = std::max(worst_rt, max_abs_diff(u, back));
            double lhs = 0.0, rhs = 0.0;
            for (const auto& v : u.values) lhs += std::norm(v);
            lhs /= static_cast<double>(u.size());
            for (const auto& c : coeffs) rhs += std::norm(c);
            worst_plancherel = std::max(worst_plancherel, std::abs(lhs - rhs));
        }
        const bool ok = worst_rt <= 1e-10 && worst_plancherel <= 1e-10;
        checks["fourier"] = {{"samples", args.samples},
                             {"max_roundtrip_error", worst_rt},
                             {"max_plancherel_error", worst_plancherel},
                             {"tolerance", 1e-10},
                             {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (wants("delta")) {
        TransversalFunction ones = make_transversal_function(args.p, args.n, args.m);
        for (auto& v : ones.values) v = {1.0, 0.0};
        const TransversalFunction flat = delta_p(ones, conv);
        double worst_const = 0.0;
        for (const auto& v : flat.values) worst_const = std::max(worst_const, std::abs(v));
        double worst_adjoint = 0.0;
        for (int s = 0; s < args.samples; ++s) {
            const TransversalFunction u = random_table(args.p, args.n, args.m, rng);
            const TransversalFunction v = random_table(args.p, args.n, args.m, rng);
            const TransversalFunction du = delta_p(u, conv);
            const TransversalFunction dv = delta_p(v, conv);
            std::complex<double> lhs{0.0, 0.0}, rhs{0.0, 0.0};
            for (size_t i = 0; i < u.values.size(); ++i) {
                lhs += du.values[i] * std::conj(v.values[i]);
                rhs += u.values[i] * std::conj(dv.values[i]);
            }
            const double scale = static_cast<double>(u.size());
            worst_adjoint = std::max(worst_adjoint, std::abs(lhs - rhs) / scale);
        }
        const bool ok = worst_const <= 1e-10 && worst_adjoint <= 1e-9;
        checks["delta"] = {{"kills_constants_error", worst_const},
                           {"max_self_adjoint_error", worst_adjoint},
                           {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (wants("conjugation")) {
        double worst = 0.0;
        for (int s = 0; s < args.samples; ++s) {
            const PAdicAffineMap g = random_unit_map(args.p, args.n, args.m, rng);
            const TransversalFunction u = random_table(args.p, args.n, args.m, rng);
            const TransversalFunction lhs = delta_p(conjugate_by_affine(g, u), conv);
            const TransversalFunction rhs = conjugate_by_affine(g, delta_p(u, conv));
            worst = std::max(worst, max_abs_diff(lhs, rhs));
        }
        const bool ok = worst <= 1e-12;
        checks["conjugation"] = {{"samples", args.samples},
                                 {"max_error", worst},
                                 {"tolerance", 1e-12},
                                 {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (wants("transpose")) {
        const auto chars = enumerate_characters(args.p, args.n, args.m);
        bool ok = true;
        int64_t tested = 0;
        for (int s = 0; s < std::max(1, args.samples / 5); ++s) {
            const PAdicAffineMap g = random_unit_map(args.p, args.n, args.m, rng);
            for (const auto& chi : chars) {
                const PCharacter moved = transpose_character(g, chi);
                ok = ok && char_norm(moved, conv) == char_norm(chi, conv);
                ++tested;
            }
        }
        checks["transpose"] = {{"pairs_tested", tested}, {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (wants("haar")) {
        const TransversalFunction shape = make_transversal_function(args.p, args.n, args.m);
        std::vector<std::vector<int64_t>> cells;
        for (int64_t i = 0; i < shape.size(); ++i) cells.push_back(shape.theta_of(i));
        bool ok = true;
        Json rows = Json::array();
        for (int s = 0; s < std::min(args.samples, 12); ++s) {
            PAdicAffineMap g = random_unit_map(args.p, args.n, args.m, rng);
            int expected_v = 0;
            const int variant = s % 3;
            if (variant == 1) {
                for (auto& row : g.linear) {
                    for (auto& e : row) e *= args.p;
                }
                expected_v = args.m;
            } else if (variant == 2) {
                for (auto& e : g.linear[0]) e *= args.p;
                expected_v = 1;
            }
            const HaarScalingReport rep = haar_scaling_check(g, cells);
            const Rational expected(1, bigint_pow(BigInt(args.p),
                                                  static_cast<unsigned>(expected_v)));
            const bool row_ok = rep.ratio == expected && rep.valuation == expected_v;
            ok = ok && row_ok;
            rows.push_back({{"valuation", rep.valuation},
                            {"ratio", rational_str(rep.ratio)},
                            {"expected", rational_str(expected)},
                            {"pass", row_ok}});
        }
        checks["haar"] = {{"rows", rows}, {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (wants("jacobian")) {
        bool ok = true;
        int id_minus_units = 0;
        const int rounds = std::max(1, args.samples);
        for (int s = 0; s < rounds; ++s) {
            PAdicAffineMap g = random_unit_map(args.p, args.n, args.m, rng);
            JacobianReport rep = jacobian_identities(g);
            ok = ok && rep.jac_linear == Rational(1);
            if (rep.id_minus_unit) ++id_minus_units;
            for (auto& row : g.linear) {
                for (auto& e : row) e *= args.p;
            }
            rep = jacobian_identities(g);
            ok = ok && rep.jac_linear ==
                           Rational(1, bigint_pow(BigInt(args.p),
                                                  static_cast<unsigned>(args.m)));
        }
        checks["jacobian"] = {{"samples", rounds},
                              {"unit_jacobians_exact", ok},
                              {"id_minus_unit_count", id_minus_units},
                              {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (wants("parametrix")) {
        const auto defect =
            parametrix_defect_multiplier(args.p, args.n, args.m, args.lambda, cutoff, conv);
        const TransversalFunction shape = make_transversal_function(args.p, args.n, args.m);
        bool support_ok = true;
        int64_t defect_rank = 0;
        for (int64_t ci = 0; ci < shape.size(); ++ci) {
            const PCharacter chi = PCharacter::from_residues(args.p, args.n, shape.theta_of(ci));
            const bool below = char_norm(chi, conv) <= cutoff;
            const double d = defect[static_cast<size_t>(ci)];
            if (below) ++defect_rank;
            support_ok = support_ok && (below || d == 0.0);
        }
        double worst_above = 0.0;
        for (int s = 0; s < std::min(args.samples, 5); ++s) {
            const TransversalFunction u = random_table(args.p, args.n, args.m, rng);
            auto coeffs = fourier(u);
            for (int64_t ci = 0; ci < shape.size(); ++ci) {
                const int64_t norm = char_norm(
                    PCharacter::from_residues(args.p, args.n, shape.theta_of(ci)), conv);
                coeffs[static_cast<size_t>(ci)] *=
                    1.0 + static_cast<double>(norm) * static_cast<double>(norm) + args.lambda;
            }
            const TransversalFunction y = inverse_fourier(args.p, args.n, args.m, coeffs);
            const TransversalFunction z = apply_truncated_resolvent(y, args.lambda, cutoff, conv);
            TransversalFunction residual = z;
            for (size_t i = 0; i < residual.values.size(); ++i) residual.values[i] -= u.values[i];
            const auto rescoeffs = fourier(residual);
            for (int64_t ci = 0; ci < shape.size(); ++ci) {
                const int64_t norm = char_norm(
                    PCharacter::from_residues(args.p, args.n, shape.theta_of(ci)), conv);
                if (norm > cutoff) {
                    worst_above = std::max(worst_above,
                                           std::abs(rescoeffs[static_cast<size_t>(ci)]));
                }
            }
        }
        const bool ok = support_ok && worst_above <= 1e-9;
        checks["parametrix"] = {{"cutoff", cutoff},
                                {"lambda", args.lambda},
                                {"defect_rank", defect_rank},
                                {"defect_supported_below_cutoff", support_ok},
                                {"max_defect_leak_above_cutoff", worst_above},
                                {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (wants("sobolev")) {
        bool ok = true;
        for (int s = 0; s < std::max(1, args.samples / 5); ++s) {
            const TransversalFunction u = random_table(args.p, args.n, args.m, rng);
            double prev = -1.0;
            for (int k = 0; k <= 3; ++k) {
                const double norm = sobolev_norm(u, k, conv);
                ok = ok && norm >= prev;
                prev = norm;
            }
            const auto coeffs = fourier(u);
            double l2 = 0.0;
            for (const auto& c : coeffs) l2 += std::norm(c);
            ok = ok && std::abs(sobolev_norm(u, 0, conv) - std::sqrt(l2)) <= 1e-10;
        }
        checks["sobolev"] = {{"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (checks.empty()) {
        throw std::invalid_argument("unknown padic check: " + args.check);
    }

    Json doc;
    doc["p"] = args.p;
    doc["n"] = args.n;
    doc["m"] = args.m;
    doc["seed"] = args.seed;
    doc["convention"] = args.convention;
    {
        std::mt19937_64 example_rng(args.seed);
        const TransversalFunction example =
            random_table(args.p, std::min(args.n, 1), 1, example_rng);
        doc["example_function"] = function_json(example);
    }
    doc["checks"] = checks;
    doc["pass"] = all_pass;
    out << doc.dump(2) << '\n';
    return all_pass ? kCliPass : kCliCheckFailed;
}

// ------------------------------------------------------------- tate lab verb

struct TateArgs {
    std::string model = "gaussian";
    std::string lattice_file;
    std::string check = "all";
    int nu = 3;
    int depth = 4;
    int k = 2;
    int n = 4;
};

int64_t smallest_prime_factor(int64_t value) {
    for (int64_t d = 2; d * d <= value; ++d) {
        if (value % d == 0) return d;
    }
    return value;
}

int run_tate_lab(const TateArgs& args, std::ostream& out) {
    LatticeData ld;
    if (!args.lattice_file.empty()) {
        std::ifstream file(args.lattice_file);
        if (!file) throw std::invalid_argument("cannot open lattice file " + args.lattice_file);
        std::stringstream buffer;
        buffer << file.rdbuf();
        ld = parse_lattice_json(buffer.str());
    } else if (args.model == "gaussian") {
        ld = gaussian_integer_lattice();
    } else if (args.model == "eisenstein") {
        ld = eisenstein_root_lattice();
    } else if (args.model == "generic") {
        ld = generic_cm_lattice();
    } else {
        throw std::invalid_argument("--model must be gaussian, eisenstein, or generic");
    }
    const int64_t q = ld.q();
    const auto wants = [&](const char* name) {
        return args.check == "all" || args.check == name;
    };
    Json checks = Json::object();
    bool all_pass = true;

    if (wants("digits")) {
        const auto digits = digit_set(ld);
        bool ok = static_cast<int64_t>(digits.size()) == q && digits[0][0] == 0 &&
                  digits[0][1] == 0;
        Json dset = Json::array();
        for (const auto& d : digits) dset.push_back({d[0], d[1]});
        int roundtrips = 0;
        for (int64_t x = -3; x <= 3 && ok; ++x) {
            for (int64_t y = -3; y <= 3; ++y) {
                const LatticePoint gamma{x, y};
                const TateDigits t = expand_element(ld, gamma, args.depth);
                const LatticePoint value = digits_value(ld, t);
                const TateDigits again = expand_element(ld, value, args.depth);
                if (again.digits != t.digits) {
                    ok = false;
                    break;
                }
                ++roundtrips;
            }
        }
        int shifts = 0;
        for (int64_t x = -1; x <= 1 && ok; ++x) {
            for (int64_t y = -1; y <= 1; ++y) {
                const LatticePoint gamma{x, y};
                const TateDigits t = expand_element(ld, gamma, args.depth);
                if (t.digits.back() != LatticePoint{0, 0}) continue;
                const TateDigits shifted = xi_multiply(ld, t);
                const LatticePoint xg = ld.xi_matrix.apply(gamma);
                const TateDigits direct = expand_element(ld, xg, args.depth);
                if (shifted.digits != direct.digits) {
                    ok = false;
                    break;
                }
                ++shifts;
            }
        }
        checks["digits"] = {{"digit_set", dset},
                            {"roundtrips", roundtrips},
                            {"xi_shifts", shifts},
                            {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (wants("quotient")) {
        bool ok = true;
        Json rows = Json::array();
        for (int nu = 0; nu <= args.nu; ++nu) {
            const BigInt count = quotient_count(ld, nu);
            const BigInt expected = bigint_pow(BigInt(q), static_cast<unsigned>(nu));
            const BigInt dual = dual_index(ld, nu);
            const bool row_ok = count == expected && dual == expected;
            ok = ok && row_ok;
            rows.push_back({{"nu", nu},
                            {"count", count.str()},
                            {"dual_index", dual.str()},
                            {"expected", expected.str()},
                            {"pass", row_ok}});
        }
        checks["quotient"] = {{"rows", rows}, {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (wants("bijectivity")) {
        bool ok = true;
        Json rows = Json::array();
        for (int nu = 1; nu <= args.nu; ++nu) {
            if (quotient_count(ld, nu) > 10000) break;
            const BijectivityReport rep = one_minus_xi_bijectivity(ld, nu);
            const bool row_ok =
                rep.bijective &&
                rep.quotient_size == bigint_pow(BigInt(q), static_cast<unsigned>(nu));
            ok = ok && row_ok;
            rows.push_back({{"nu", nu},
                            {"bijective", rep.bijective},
                            {"quotient_size", rep.quotient_size.str()},
                            {"pass", row_ok}});
        }
        checks["bijectivity"] = {{"rows", rows}, {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (wants("dual")) {
        const DualBasis dual = dual_lattice(ld);
        const double two_pi = 2.0 * std::numbers::pi;
        const std::array<std::complex<double>, 2> star{dual.omega1_star, dual.omega2_star};
        const std::array<std::complex<double>, 2> base{ld.omega1, ld.omega2};
        double worst = 0.0;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const double want = i == j ? two_pi : 0.0;
                worst = std::max(worst, std::abs(lattice_pairing(star[static_cast<size_t>(i)],
                                                                 base[static_cast<size_t>(j)]) -
                                                 want));
            }
        }
        double worst_integrality = 0.0;
        for (int a = -2; a <= 2; ++a) {
            for (int b = -2; b <= 2; ++b) {
                for (int c = -2; c <= 2; ++c) {
                    for (int d = -2; d <= 2; ++d) {
                        const std::complex<double> z =
                            static_cast<double>(a) * dual.omega1_star +
                            static_cast<double>(b) * dual.omega2_star;
                        const std::complex<double> w = ld.embed({c, d});
                        const double frac = lattice_pairing(z, w) / two_pi;
                        worst_integrality =
                            std::max(worst_integrality, std::abs(frac - std::round(frac)));
                    }
                }
            }
        }
        const bool ok = worst <= 1e-9 && worst_integrality <= 1e-9;
        checks["dual"] = {{"max_pairing_error", worst},
                          {"max_integrality_error", worst_integrality},
                          {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (wants("fixed-points")) {
        const int64_t p = smallest_prime_factor(q);
        const ZetaData zd = zeta_data_from_trace(q, p, ld.trace());
        bool ok = true;
        Json rows = Json::array();
        for (int k = 1; k <= args.k; ++k) {
            const BigInt fp = fixed_point_count(ld, k);
            const BigInt census = extension_count(zd, k);
            const FixedPointReport sol = solve_fixed_point(ld, {1, 0}, k);
            const bool row_ok = fp == census && sol.residual <= 1e-9;
            ok = ok && row_ok;
            rows.push_back({{"k", k},
                            {"fixed_points", fp.str()},
                            {"census_count", census.str()},
                            {"sample_residual", sol.residual},
                            {"leaf_jacobian", sol.leaf_jacobian},
                            {"pass", row_ok}});
        }
        checks["fixed_points"] = {{"rows", rows}, {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (wants("haar")) {
        if (smallest_prime_factor(q) != q) {
            checks["haar"] = {{"skipped", true},
                              {"reason", "q is not prime, no single-prime cell model"}};
        } else {
            const int64_t p = q;
            const TransversalFunction shape = make_transversal_function(p, args.n, 2);
            std::vector<std::vector<int64_t>> cells;
            for (int64_t i = 0; i < shape.size(); ++i) cells.push_back(shape.theta_of(i));
            bool ok = true;
            Json rows = Json::array();
            Mat2 power = Mat2::identity();
            for (int nu = 1; nu <= args.nu; ++nu) {
                power = power.mul(ld.xi_matrix);
                const PAdicAffineMap g = make_affine_map(
                    p, args.n, {{power.a, power.b}, {power.c, power.d}}, {0, 0});
                const HaarScalingReport rep = haar_scaling_check(g, cells);
                const Rational expected(1,
                                        bigint_pow(BigInt(q), static_cast<unsigned>(nu)));
                const bool row_ok = rep.ratio == expected && rep.valuation == nu;
                ok = ok && row_ok;
                rows.push_back({{"nu", nu},
                                {"ratio", rational_str(rep.ratio)},
                                {"expected", rational_str(expected)},
                                {"pass", row_ok}});
            }
            checks["haar"] = {{"precision_n", args.n}, {"rows", rows}, {"pass", ok}};
            all_pass = all_pass && ok;
        }
    }

    if (wants("weights")) {
        bool ok = true;
        Json rows = Json::array();
        for (int d = 1; d <= 2; ++d) {
            for (int k = 1; k <= args.k; ++k) {
                for (const FlowDirection dir : {FlowDirection::Plus, FlowDirection::Minus}) {
                    const OrbitWeightReport rep = orbit_weight_report(ld, d, k, dir);
                    const Rational expected =
                        dir == FlowDirection::Minus
                            ? Rational(1, bigint_pow(BigInt(q),
                                                     static_cast<unsigned>(k * d)))
                            : Rational(1);
                    const bool row_ok =
                        rep.transversal_factor == expected && rep.leaf_sign == 1;
                    ok = ok && row_ok;
                    rows.push_back(
                        {{"d", d},
                         {"k", k},
                         {"direction", dir == FlowDirection::Minus ? "minus" : "plus"},
                         {"factor", rational_str(rep.transversal_factor)},
                         {"coefficient", rep.coefficient},
                         {"delta_position", rep.delta_position},
                         {"pass", row_ok}});
                }
            }
        }
        checks["weights"] = {{"rows", rows}, {"pass", ok}};
        all_pass = all_pass && ok;
    }

    if (checks.empty()) {
        throw std::invalid_argument("unknown tate check: " + args.check);
    }

    Json doc;
    doc["lattice"] = Json::parse(lattice_json(ld));
    doc["q"] = q;
    doc["checks"] = checks;
    doc["pass"] = all_pass;
    out << doc.dump(2) << '\n';
    return all_pass ? kCliPass : kCliCheckFailed;
}

// ------------------------------------------------------------- weights verb

struct WeightsArgs {
    std::string curve;
    int max_degree = 3;
    int max_k = 3;
    bool check_dissymmetry = false;
    std::string alpha;
};

int run_weights(const WeightsArgs& args, std::ostream& out) {
    const CurveSpec curve = parse_curve_spec(args.curve);
    const ZetaData zd = zeta_data(curve);
    const double logq = std::log(static_cast<double>(zd.q));
    const ClosedPointCensus census = closed_point_census(zd, args.max_degree);
    const std::complex<double> xi = zd.xi();

    Json rows = Json::array();
    for (int d = 1; d <= args.max_degree; ++d) {
        const BigInt& b = census.lines[static_cast<size_t>(d - 1)].orbit_count;
        for (int k = 1; k <= args.max_k; ++k) {
            const int kd = k * d;
            for (const FlowDirection dir : {FlowDirection::Plus, FlowDirection::Minus}) {
                const bool minus = dir == FlowDirection::Minus;
                std::complex<double> leaf{1.0, 0.0};
                for (int i = 0; i < kd; ++i) leaf *= xi;
                if (minus) leaf = 1.0 / leaf;
                const Rational factor =
                    minus ? Rational(1, bigint_pow(BigInt(zd.q), static_cast<unsigned>(kd)))
                          : Rational(1);
                const Rational weight = guillemin_sternberg_weight(leaf, factor, dir);
                const double coefficient = d * logq * weight.convert_to<double>();
                rows.push_back({{"d", d},
                                {"k", k},
                                {"direction", minus ? "minus" : "plus"},
                                {"length", d * logq},
                                {"transversal_factor", rational_str(factor)},
                                {"coefficient", coefficient},
                                {"multiplicity", b.str()},
                                {"assembled", static_cast<double>(b) * coefficient},
                                {"delta_position", (minus ? -1.0 : 1.0) * kd * logq}});
            }
        }
    }

    Json doc;
    doc["q"] = zd.q;
    doc["a"] = zd.trace_a;
    doc["rows"] = rows;
    bool all_pass = true;

    if (args.check_dissymmetry) {
        if (args.alpha.empty()) {
            throw std::invalid_argument("--check-dissymmetry needs --alpha");
        }
        const TestFunction alpha = parse_test_function(args.alpha);
        if (alpha.center != 0.0) {
            throw std::invalid_argument("dissymmetry check needs a test function centered at 0");
        }
        const SpectralInput input = spectral_input(zd, alpha.support_radius());
        const GeometricSide side = geometric_side(input, alpha);
        double worst = 0.0;
        int pairs = 0;
        for (const auto& fwd : side.terms) {
            if (fwd.k <= 0 || fwd.value == 0.0) continue;
            for (const auto& bwd : side.terms) {
                if (bwd.degree != fwd.degree || bwd.k != -fwd.k) continue;
                const double ratio = bwd.value / fwd.value;
                const double expected = std::pow(static_cast<double>(zd.q),
                                                 -static_cast<double>(fwd.k) * fwd.degree);
                worst = std::max(worst, std::abs(ratio - expected) / expected);
                ++pairs;
            }
        }
        const bool ok = pairs > 0 && worst <= 1e-12;
        doc["dissymmetry"] = {{"pairs", pairs},
                              {"max_relative_error", worst},
                              {"tolerance", 1e-12},
                              {"pass", ok}};
        all_pass = all_pass && ok;
        doc["pass"] = all_pass;
    }

    out << doc.dump(2) << '\n';
    return all_pass ? kCliPass : kCliCheckFailed;
}

Json defaults_json() {
    Json doc;
    doc["formula_tol"] = 1e-8;
    doc["quadrature_tol"] = 1e-12;
    doc["nu_max"] = 256;
    doc["tail_bound"] =
        "max(|first term|, |last term|) * nu_max * 10 + quadrature_tol * (2 nu_max + 1)";
    doc["char_norm_convention"] = "conductor";
    doc["padic"] = {{"p", 3}, {"n", 2}, {"m", 2}, {"samples", 25}, {"seed", 1},
                    {"cutoff", "p"}, {"lambda", 1.0}};
    doc["tate"] = {{"model", "gaussian"}, {"nu", 3}, {"depth", 4}, {"k", 2},
                   {"haar_precision_n", 4}};
    doc["alpha_kinds"] = {"bump (A exp(-1/(1-u^2)))", "gaussian (A exp(-4 u^2), cut at |u|=1)",
                          "hat (A (1-|u|))"};
    doc["exit_codes"] = {{"pass", 0}, {"check_failed", 1}, {"config_error", 2},
                         {"internal_inconsistency", 3}};
    return doc;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-sided verification of elliptic zeta trace identities"};
    app.set_config("--config", "", "Read options from a config file");
    bool explain = false;
    app.add_flag("--explain", explain, "Print all defaults as JSON and exit");

    ZetaArgs zeta_args;
    CLI::App* zeta_cmd = app.add_subcommand("zeta", "Zeta data of a curve over F_q");
    zeta_cmd->add_option("--curve", zeta_args.curve, "Curve spec, e.g. \"p=5 f=1 a4=1 a6=1\"")
        ->required();
    zeta_cmd->add_option("--eval", zeta_args.eval, "Evaluate zeta at s = re,im");
    zeta_cmd->add_flag("--check-zeros", zeta_args.check_zeros,
                       "Check |xi|^2 = q exactly and Re rho = 1/2");
    zeta_cmd->add_flag("--check-functional-equation", zeta_args.check_fe,
                       "Check zeta(s) = zeta(1-s) on a 20-point grid");
    zeta_cmd->add_flag("--check-euler", zeta_args.check_euler,
                       "Check Euler product partial products against zeta(2)");
    zeta_cmd->add_option("--euler-depth", zeta_args.euler_depth,
                         "Closed-point depth for the Euler product check");

    CensusArgs census_args;
    CLI::App* census_cmd = app.add_subcommand("census", "Closed-point census of a curve");
    census_cmd->add_option("--curve", census_args.curve, "Curve spec")->required();
    census_cmd->add_option("--max-degree", census_args.max_degree, "Largest degree d");
    census_cmd->add_option("--max-length", census_args.max_length,
                           "Largest orbit length (overrides --max-degree)");
    census_cmd->add_option("--format", census_args.format, "csv or json");

    VerifyArgs verify_args;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Verify the two-sided trace identity for a curve");
    verify_cmd->add_option("--curve", verify_args.curve, "Curve spec")->required();
    verify_cmd->add_option("--alpha", verify_args.alpha,
                           "Test function, e.g. bump:c=1.6,w=0.5")
        ->required();
    verify_cmd->add_option("--nu-max", verify_args.nu_max, "Vertical truncation");
    verify_cmd->add_option("--formula-tol", verify_args.formula_tol, "Residual tolerance");
    verify_cmd->add_option("--quad-tol", verify_args.quad_tol, "Quadrature tolerance");
    verify_cmd->add_flag("--poisson", verify_args.poisson,
                         "Also compare each vertical family to its closed form");
    verify_cmd->add_option("--emit-plot", verify_args.emit_plot,
                           "Write per-nu partial sums as CSV to this path (- for stdout)");

    PadicArgs padic_args;
    CLI::App* padic_cmd = app.add_subcommand("padic", "p-adic transversal machinery");
    CLI::App* padic_lab = padic_cmd->add_subcommand("lab", "Run p-adic self-checks");
    padic_lab->add_option("--p", padic_args.p, "Prime p");
    padic_lab->add_option("--n", padic_args.n, "Precision exponent n");
    padic_lab->add_option("--m", padic_args.m, "Coordinate count m");
    padic_lab->add_option("--check", padic_args.check,
                          "all, fourier, delta, conjugation, transpose, haar, jacobian, "
                          "parametrix, or sobolev");
    padic_lab->add_option("--samples", padic_args.samples, "Randomized sample count");
    padic_lab->add_option("--seed", padic_args.seed, "RNG seed");
    padic_lab->add_option("--cutoff", padic_args.cutoff, "Parametrix conductor cutoff");
    padic_lab->add_option("--lambda", padic_args.lambda, "Resolvent shift");
    padic_lab->add_option("--convention", padic_args.convention,
                          "Character norm convention: conductor or topdigit");
    padic_cmd->require_subcommand(1);

    TateArgs tate_args;
    CLI::App* tate_cmd = app.add_subcommand("tate", "Lattice and digit arithmetic");
    CLI::App* tate_lab = tate_cmd->add_subcommand("lab", "Run lattice self-checks");
    tate_lab->add_option("--model", tate_args.model, "gaussian, eisenstein, or generic");
    tate_lab->add_option("--lattice-file", tate_args.lattice_file,
                         "JSON lattice spec (overrides --model)");
    tate_lab->add_option("--check", tate_args.check,
                         "all, digits, quotient, bijectivity, dual, fixed-points, haar, or "
                         "weights");
    tate_lab->add_option("--nu", tate_args.nu, "Largest quotient depth");
    tate_lab->add_option("--depth", tate_args.depth, "Digit window depth");
    tate_lab->add_option("--k", tate_args.k, "Largest traversal count");
    tate_lab->add_option("--n", tate_args.n, "Cell precision for the Haar check");
    tate_cmd->require_subcommand(1);

    WeightsArgs weights_args;
    CLI::App* weights_cmd =
        app.add_subcommand("weights", "Orbit weight table for a curve");
    weights_cmd->add_option("--curve", weights_args.curve, "Curve spec")->required();
    weights_cmd->add_option("--max-degree", weights_args.max_degree, "Largest degree d");
    weights_cmd->add_option("--max-k", weights_args.max_k, "Largest traversal count");
    weights_cmd->add_flag("--check-dissymmetry", weights_args.check_dissymmetry,
                          "Check backward/forward orbit term ratios equal q^{-kd}");
    weights_cmd->add_option("--alpha", weights_args.alpha,
                            "Even test function centered at 0 for the dissymmetry check");

    std::vector<const char*> argv;
    argv.push_back("zetatrace");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kCliPass;
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return kCliConfigError;
    }

    try {
        if (explain) {
            out << defaults_json().dump(2) << '\n';
            return kCliPass;
        }
        if (app.got_subcommand(zeta_cmd)) return run_zeta(zeta_args, out);
        if (app.got_subcommand(census_cmd)) return run_census(census_args, out);
        if (app.got_subcommand(verify_cmd)) return run_verify(verify_args, out);
        if (app.got_subcommand(padic_cmd)) return run_padic_lab(padic_args, out);
        if (app.got_subcommand(tate_cmd)) return run_tate_lab(tate_args, out);
        if (app.got_subcommand(weights_cmd)) return run_weights(weights_args, out);
        err << "config error: no verb given (try --help)\n";
        return kCliConfigError;
    } catch (const InternalInconsistencyError& e) {
        err << "internal inconsistency: " << e.what() << '\n';
        return kCliInternalError;
    } catch (const PrecisionInsufficientError& e) {
        err << "config error: " << e.what() << '\n';
        return kCliConfigError;
    } catch (const DepthExhaustedError& e) {
        err << "config error: " << e.what() << '\n';
        return kCliConfigError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kCliConfigError;
    } catch (const std::domain_error& e) {
        err << "config error: " << e.what() << '\n';
        return kCliConfigError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kCliInternalError;
    }
}

}  // namespace zetatrace
