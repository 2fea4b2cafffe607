#include "corpusdiff/mathstat.hpp"

#include <cmath>
#include <limits>

#include "corpusdiff/errors.hpp"

namespace corpusdiff {

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

// Continued fraction for the incomplete beta, modified Lentz.
double beta_continued_fraction(double x, double a, double b) {
    const double tiny = 1e-300;
    const double eps = 1e-15;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double result = d;
    for (int m = 1; m <= 200000; ++m) {
        double dm = m;
        // even step
        double num = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        result *= d * c;
        // odd step
        num = -(a + dm) * (a + b + dm) * x / ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double mult = d * c;
        result *= mult;
        if (std::fabs(mult - 1.0) < eps) break;
    }
    return result;
}

} // namespace

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(x >= 0.0 && x <= 1.0) || a <= 0.0 || b <= 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(x, a, b) / a;
    }
    return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) *
                     beta_continued_fraction(1.0 - x, b, a) / b;
}

double student_t_sf(double t, double df) {
    if (!(df > 0)) return std::numeric_limits<double>::quiet_NaN();
    double w = regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5);
    // Same incomplete-beta value for t and -t keeps sf(t) + sf(-t) == 1 exactly.
    return t >= 0 ? 0.5 * w : 1.0 - 0.5 * w;
}

namespace {

double gamma_p_series(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double mult = d * c;
        h *= mult;
        if (std::fabs(mult - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double regularized_gamma_q(double a, double x) {
    if (a <= 0 || x < 0) return std::numeric_limits<double>::quiet_NaN();
    if (x == 0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double x, int df) {
    if (df <= 0) return std::numeric_limits<double>::quiet_NaN();
    if (x <= 0) return 1.0;
    return regularized_gamma_q(df / 2.0, x / 2.0);
}

WelchResult welch_one_sided(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw Error("t-test requires at least 2 entries per side");
    const double na = double(a.size()), nb = double(b.size());
    double ma = 0, mb = 0;
    for (double v : a) ma += v;
    for (double v : b) mb += v;
    ma /= na;
    mb /= nb;
    double va = 0, vb = 0;
    for (double v : a) va += (v - ma) * (v - ma);
    for (double v : b) vb += (v - mb) * (v - mb);
    va /= (na - 1.0);
    vb /= (nb - 1.0);

    if (va == 0.0 && vb == 0.0) {
        double p = ma > mb ? 0.0 : (ma < mb ? 1.0 : 0.5);
        double t = ma > mb ? std::numeric_limits<double>::infinity()
                           : (ma < mb ? -std::numeric_limits<double>::infinity() : 0.0);
        return {t, na + nb - 2.0, p};
    }

    double ga = va / na, gb = vb / nb;
    double se = std::sqrt(ga + gb);
    double t = (ma - mb) / se;
    double df = (ga + gb) * (ga + gb) /
                (ga * ga / (na - 1.0) + gb * gb / (nb - 1.0));
    return {t, df, student_t_sf(t, df)};
}

double one_sided_t_test(std::span<const double> a, std::span<const double> b) {
    return welch_one_sided(a, b).p;
}

} // namespace corpusdiff
