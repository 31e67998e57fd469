#include "zetatrace/curve.hpp"

#include "zetatrace/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zetatrace {

namespace {

FieldElement curve_rhs(const CurveSpec& curve, const FieldElement& x) {
    const FiniteField& field = curve.field;
    const FieldElement x3 = field.mul(field.mul(x, x), x);
    return field.add(field.add(x3, field.mul(curve.a4, x)), curve.a6);
}

}  // namespace

CurveSpec make_curve(FiniteField field, FieldElement a4, FieldElement a6) {
    if (field.p() <= 3) {
        throw std::invalid_argument("short Weierstrass form requires characteristic p > 3");
    }
    // -16 (4 a4^3 + 27 a6^2)
    const FieldElement a4cubed = field.mul(field.mul(a4, a4), a4);
    const FieldElement term1 = field.mul(field.from_integer(4), a4cubed);
    const FieldElement term2 = field.mul(field.from_integer(27), field.mul(a6, a6));
    const FieldElement disc = field.mul(field.from_integer(-16), field.add(term1, term2));
    if (field.is_zero(disc)) {
        throw std::invalid_argument("singular curve: discriminant is zero");
    }
    return CurveSpec{std::move(field), std::move(a4), std::move(a6)};
}

CurveSpec parse_curve_spec(const std::string& text) {
    int64_t p = 0, a4 = 0, a6 = 0;
    int f = 1;
    bool have_p = false, have_a4 = false, have_a6 = false;
    std::vector<int64_t> modulus;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("curve spec token without '=': " + token);
        }
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        try {
            if (key == "p") {
                p = std::stoll(value);
                have_p = true;
            } else if (key == "f") {
                f = static_cast<int>(std::stoll(value));
            } else if (key == "a4") {
                a4 = std::stoll(value);
                have_a4 = true;
            } else if (key == "a6") {
                a6 = std::stoll(value);
                have_a6 = true;
            } else if (key == "mod") {
                modulus.clear();
                std::istringstream coeffs(value);
                std::string c;
                while (std::getline(coeffs, c, ',')) modulus.push_back(std::stoll(c));
            } else {
                throw std::invalid_argument("unknown curve spec key: " + key);
            }
        } catch (const std::logic_error& e) {
            if (std::string(e.what()).rfind("unknown", 0) == 0) throw;
            throw std::invalid_argument("bad curve spec value in: " + token);
        }
    }
    if (!have_p || !have_a4 || !have_a6) {
        throw std::invalid_argument("curve spec needs p=, a4=, a6= (and optional f=, mod=)");
    }
    FiniteField field = modulus.empty() ? FiniteField(p, f) : FiniteField(p, f, modulus);
    FieldElement e4 = field.from_integer(a4);
    FieldElement e6 = field.from_integer(a6);
    return make_curve(std::move(field), std::move(e4), std::move(e6));
}

int64_t count_points(const CurveSpec& curve) {
    const FiniteField& field = curve.field;
    int64_t total = 1;  // point at infinity
    for (int64_t xi = 0; xi < field.q(); ++xi) {
        const FieldElement x = field.from_integer(xi);
        total += 1 + field.quadratic_character(curve_rhs(curve, x));
    }
    return total;
}

std::complex<double> ZetaData::xi() const {
    const double re = static_cast<double>(trace_a) / 2.0;
    const double im = std::sqrt(static_cast<double>(4 * q - trace_a * trace_a)) / 2.0;
    return {re, im};
}

std::array<std::complex<double>, 2> ZetaData::eigenvalues() const {
    const std::complex<double> x = xi();
    return {x, std::conj(x)};
}

std::array<std::complex<double>, 2> ZetaData::zeros() const {
    const std::complex<double> x = xi();
    const double theta = std::atan2(x.imag(), x.real());
    const double logq = std::log(static_cast<double>(q));
    return {std::complex<double>(0.5, theta / logq), std::complex<double>(0.5, -theta / logq)};
}

Rational ZetaData::xi_norm_squared_exact() const {
    // |xi|^2 = (a/2)^2 + (4q - a^2)/4 from the stored integer pair.
    const BigInt a(trace_a);
    const BigInt num = a * a + (BigInt(4) * q - a * a);
    return Rational(num, 4);
}

ZetaData zeta_data_from_trace(int64_t q, int64_t p, int64_t trace_a) {
    if (trace_a * trace_a > 4 * q) {
        throw InternalInconsistencyError("Frobenius trace violates the Hasse bound");
    }
    ZetaData zd;
    zd.q = q;
    zd.p = p;
    zd.trace_a = trace_a;
    zd.genus = 1;
    zd.supersingular = (trace_a % p == 0);
    return zd;
}

ZetaData zeta_data(const CurveSpec& curve) {
    const int64_t n = count_points(curve);
    const int64_t q = curve.field.q();
    return zeta_data_from_trace(q, curve.field.p(), q + 1 - n);
}

std::complex<double> zeta_eval(const ZetaData& zd, std::complex<double> s) {
    const double logq = std::log(static_cast<double>(zd.q));
    const std::complex<double> qs = std::exp(-s * logq);  // q^{-s}
    const std::complex<double> x = zd.xi();
    const std::complex<double> num = (1.0 - x * qs) * (1.0 - std::conj(x) * qs);
    const std::complex<double> den =
        (1.0 - qs) * (1.0 - static_cast<double>(zd.q) * qs);
    if (std::abs(den) < 1e-12) {
        throw std::domain_error("zeta_eval: s is within 1e-12 of a pole");
    }
    return num / den;
}

double functional_equation_residual(const ZetaData& zd, std::complex<double> s) {
    const std::complex<double> lhs = zeta_eval(zd, s);
    const std::complex<double> rhs = zeta_eval(zd, 1.0 - s);
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

std::string zeta_json(const ZetaData& zd) {
    nlohmann::ordered_json out;
    out["q"] = zd.q;
    out["a"] = zd.trace_a;
    const std::complex<double> x = zd.xi();
    out["xi_re"] = x.real();
    out["xi_im"] = x.imag();
    out["zeros"] = nlohmann::ordered_json::array();
    for (const auto& rho : zd.zeros()) {
        out["zeros"].push_back({{"re", rho.real()}, {"im", rho.imag()}});
    }
    return out.dump(2);
}

}  // namespace zetatrace
