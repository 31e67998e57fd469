#include "zetatrace/census.hpp"

#include "zetatrace/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zetatrace {

namespace {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

}  // namespace

int mobius(int n) {
    if (n <= 0) throw std::invalid_argument("mobius is defined for n >= 1");
    int result = 1;
    for (int d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            result = -result;
        }
    }
    if (n > 1) result = -result;
    return result;
}

BigInt frobenius_power_trace(const ZetaData& zd, int n) {
    if (n < 0) throw std::invalid_argument("power trace needs n >= 0");
    // t_0 = 2, t_1 = a, t_{k+1} = a t_k - q t_{k-1}
    BigInt prev = 2;
    if (n == 0) return prev;
    BigInt cur = zd.trace_a;
    for (int k = 1; k < n; ++k) {
        BigInt next = BigInt(zd.trace_a) * cur - BigInt(zd.q) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

BigInt extension_count(const ZetaData& zd, int n) {
    if (n <= 0) throw std::invalid_argument("extension count needs n >= 1");
    return bigint_pow(BigInt(zd.q), static_cast<unsigned>(n)) + 1 - frobenius_power_trace(zd, n);
}

ClosedPointCensus closed_point_census(const ZetaData& zd, int max_degree) {
    if (max_degree < 0) throw std::invalid_argument("census depth must be >= 0");
    ClosedPointCensus census;
    census.q = zd.q;
    census.max_degree = max_degree;
    const double logq = std::log(static_cast<double>(zd.q));
    std::vector<BigInt> counts(static_cast<size_t>(max_degree) + 1);
    for (int n = 1; n <= max_degree; ++n) {
        counts[static_cast<size_t>(n)] = extension_count(zd, n);
    }
    for (int d = 1; d <= max_degree; ++d) {
        BigInt sum = 0;
        for (int e = 1; e <= d; ++e) {
            if (d % e == 0) sum += BigInt(mobius(d / e)) * counts[static_cast<size_t>(e)];
        }
        if (sum % d != 0) {
            throw InternalInconsistencyError("closed point count is not an integer at degree " +
                                             std::to_string(d));
        }
        BigInt orbits = sum / d;
        if (orbits < 0) {
            throw InternalInconsistencyError("closed point count is negative at degree " +
                                             std::to_string(d));
        }
        CensusLine line;
        line.degree = d;
        line.point_count = counts[static_cast<size_t>(d)];
        line.orbit_count = std::move(orbits);
        line.length = d * logq;
        census.lines.push_back(std::move(line));
    }
    return census;
}

std::vector<OrbitLine> orbit_census(const ZetaData& zd, double max_length) {
    const double logq = std::log(static_cast<double>(zd.q));
    const int max_degree = static_cast<int>(std::floor(max_length / logq + 1e-12));
    const ClosedPointCensus census = closed_point_census(zd, std::max(max_degree, 0));
    std::vector<OrbitLine> lines;
    for (const auto& cl : census.lines) {
        lines.push_back(OrbitLine{cl.degree, cl.length, cl.orbit_count});
    }
    return lines;
}

std::string census_csv(const ClosedPointCensus& census) {
    std::ostringstream out;
    out << "d,N_d,B_d,length\n";
    for (const auto& line : census.lines) {
        out << line.degree << ',' << line.point_count.str() << ',' << line.orbit_count.str()
            << ',' << format_double(line.length) << '\n';
    }
    return out.str();
}

std::string census_json(const ClosedPointCensus& census) {
    nlohmann::ordered_json out;
    out["q"] = census.q;
    out["max_degree"] = census.max_degree;
    out["lines"] = nlohmann::ordered_json::array();
    for (const auto& line : census.lines) {
        out["lines"].push_back({{"d", line.degree},
                                {"N_d", line.point_count.str()},
                                {"B_d", line.orbit_count.str()},
                                {"length", line.length}});
    }
    return out.dump(2);
}

}  // namespace zetatrace
