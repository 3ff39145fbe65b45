#include "tokeval/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tokeval/errors.hpp"

namespace tokeval {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-15;

// Lower incomplete gamma by series expansion; valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n <= kMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by Lentz's continued fraction; valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || std::isnan(x)) {
        throw std::invalid_argument("regularized_gamma_p requires a > 0 and x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || std::isnan(x)) {
        throw std::invalid_argument("regularized_gamma_q requires a > 0 and x >= 0");
    }
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_fraction(a, x);
}

double chi2_survival(double x, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("chi2_survival requires k > 0");
    if (x <= 0.0) return 1.0;
    return regularized_gamma_q(k / 2.0, x / 2.0);
}

McNemarMethod mcnemar_method_from_name(const std::string& name) {
    if (name == "auto") return McNemarMethod::Auto;
    if (name == "chi2_corrected") return McNemarMethod::Chi2Corrected;
    if (name == "exact_binomial") return McNemarMethod::ExactBinomial;
    throw UsageError("unknown mcnemar method: " + name +
                     " (expected auto, chi2_corrected or exact_binomial)");
}

const std::string& mcnemar_method_name(McNemarMethod method) {
    static const std::string names[] = {"auto", "chi2_corrected", "exact_binomial"};
    return names[static_cast<int>(method)];
}

McNemarResult mcnemar(uint64_t b, uint64_t c, McNemarMethod method, size_t bonferroni_m) {
    McNemarResult result;
    result.b = b;
    result.c = c;
    const uint64_t n = b + c;
    McNemarMethod chosen = method;
    if (chosen == McNemarMethod::Auto) {
        chosen = n >= 25 ? McNemarMethod::Chi2Corrected : McNemarMethod::ExactBinomial;
    }
    result.method = chosen;
    if (n == 0) {
        result.p_raw = 1.0;
        result.p_adjusted = 1.0;
        return result;
    }
    if (chosen == McNemarMethod::Chi2Corrected) {
        const double diff = b > c ? static_cast<double>(b - c) : static_cast<double>(c - b);
        const double adj = std::max(diff - 1.0, 0.0);
        result.statistic = adj * adj / static_cast<double>(n);
        result.p_raw = chi2_survival(result.statistic, 1.0);
    } else {
        // Two-sided binomial at p = 1/2: double the smaller tail, capped at 1.
        const uint64_t m = b < c ? b : c;
        const double log_half_n = static_cast<double>(n) * std::log(0.5);
        const double lg_n1 = std::lgamma(static_cast<double>(n) + 1.0);
        double tail = 0.0;
        for (uint64_t k = 0; k <= m; ++k) {
            const double lg = lg_n1 - std::lgamma(static_cast<double>(k) + 1.0) -
                              std::lgamma(static_cast<double>(n - k) + 1.0);
            tail += std::exp(lg + log_half_n);
        }
        result.p_raw = std::min(1.0, 2.0 * tail);
    }
    result.p_adjusted = bonferroni(result.p_raw, bonferroni_m == 0 ? 1 : bonferroni_m);
    return result;
}

McNemarResult mcnemar(const PairedPredictions& pp, McNemarMethod method, size_t bonferroni_m) {
    if (pp.gold.empty()) throw DataError("mcnemar needs at least one prediction");
    if (pp.preds_a.size() != pp.gold.size() || pp.preds_b.size() != pp.gold.size()) {
        throw DataError("mcnemar inputs differ in length (gold " + std::to_string(pp.gold.size()) +
                        ", A " + std::to_string(pp.preds_a.size()) + ", B " +
                        std::to_string(pp.preds_b.size()) + ")");
    }
    uint64_t b = 0;
    uint64_t c = 0;
    for (size_t i = 0; i < pp.gold.size(); ++i) {
        const bool a_ok = pp.preds_a[i] == pp.gold[i];
        const bool b_ok = pp.preds_b[i] == pp.gold[i];
        if (a_ok && !b_ok) ++b;
        if (!a_ok && b_ok) ++c;
    }
    return mcnemar(b, c, method, bonferroni_m);
}

double bonferroni(double p, size_t m) {
    if (p < 0.0 || std::isnan(p)) throw std::invalid_argument("p must be in [0, 1]");
    return std::min(1.0, p * static_cast<double>(m));
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw DataError("correlation inputs differ in length (" + std::to_string(x.size()) +
                        " vs " + std::to_string(y.size()) + ")");
    }
    if (x.size() < 2) throw DataError("correlation needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DataError("correlation undefined for zero-variance input");
    }
    return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

}  // namespace tokeval
