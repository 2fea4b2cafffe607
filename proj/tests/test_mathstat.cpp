#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "corpusdiff/errors.hpp"
#include "corpusdiff/mathstat.hpp"

using namespace corpusdiff;

TEST_CASE("one-sided test on identical lists is 0.5") {
    std::vector<double> a = {0.1, 0.4, 0.7, 0.9};
    CHECK(one_sided_t_test(a, a) == doctest::Approx(0.5).epsilon(1e-12));
    // Zero-variance identical lists pin to 0.5 as well.
    std::vector<double> c = {0.5, 0.5, 0.5};
    CHECK(one_sided_t_test(c, c) == 0.5);
}

TEST_CASE("degenerate zero-variance cases pin to 0 or 1") {
    std::vector<double> ones = {1, 1, 1, 1};
    std::vector<double> zeros = {0, 0, 0, 0};
    CHECK(one_sided_t_test(ones, zeros) == 0.0);
    CHECK(one_sided_t_test(zeros, ones) == 1.0);
}

TEST_CASE("matches the reference implementation on the worked example") {
    // Reference p-value computed with an independent Welch implementation
    // (same inputs, alternative: mean(a) > mean(b)).
    std::vector<double> a = {0.9, 0.8, 0.7, 0.95};
    std::vector<double> b = {0.2, 0.3, 0.25, 0.4};
    CHECK(std::fabs(one_sided_t_test(a, b) - 0.00015274814400204441) < 1e-9);
}

TEST_CASE("more reference pins") {
    std::vector<double> a0 = {0.439, 0.859};
    std::vector<double> b0 = {0.697, 0.094, 0.976, 0.761, 0.786, 0.128, 0.45, 0.371};
    CHECK(std::fabs(one_sided_t_test(a0, b0) - 0.34178951777777922) < 1e-9);
    std::vector<double> a1 = {0.644, 0.823, 0.443};
    std::vector<double> b1 = {0.227, 0.555, 0.064, 0.828, 0.632, 0.758, 0.355, 0.971, 0.893};
    CHECK(std::fabs(one_sided_t_test(a1, b1) - 0.37716629348347119) < 1e-9);
    std::vector<double> a2 = {0.195, 0.467, 0.044, 0.154, 0.683, 0.745, 0.968};
    std::vector<double> b2 = {0.326, 0.37, 0.47, 0.189, 0.13, 0.476, 0.227, 0.67};
    CHECK(std::fabs(one_sided_t_test(a2, b2) - 0.23940959220913799) < 1e-9);
}

TEST_CASE("requires two entries per side") {
    std::vector<double> one = {0.5};
    std::vector<double> two = {0.5, 0.6};
    CHECK_THROWS_AS(one_sided_t_test(one, two), Error);
    CHECK_THROWS_AS(one_sided_t_test(two, one), Error);
}

TEST_CASE("two directions sum to one") {
    std::mt19937_64 rng(123);
    auto u = [&] { return double(rng() % 10000) / 10000.0; };
    for (int trial = 0; trial < 200; ++trial) {
        size_t na = 2 + rng() % 20, nb = 2 + rng() % 20;
        std::vector<double> a(na), b(nb);
        for (auto& v : a) v = u();
        for (auto& v : b) v = u();
        double p_ab = one_sided_t_test(a, b);
        double p_ba = one_sided_t_test(b, a);
        CHECK(p_ab + p_ba == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("shifting one side up never raises the p-value") {
    std::mt19937_64 rng(99);
    auto u = [&] { return double(rng() % 10000) / 10000.0; };
    for (int trial = 0; trial < 200; ++trial) {
        size_t na = 3 + rng() % 10, nb = 3 + rng() % 10;
        std::vector<double> a(na), b(nb);
        for (auto& v : a) v = u();
        for (auto& v : b) v = u();
        double p0 = one_sided_t_test(a, b);
        auto shifted = a;
        double c = 0.01 + u();
        for (auto& v : shifted) v += c;
        CHECK(one_sided_t_test(shifted, b) <= p0 + 1e-12);
    }
}

TEST_CASE("regularized incomplete beta endpoints and symmetry") {
    CHECK(regularized_incomplete_beta(0.0, 2.0, 3.0) == 0.0);
    CHECK(regularized_incomplete_beta(1.0, 2.0, 3.0) == 1.0);
    // I_x(a,b) + I_{1-x}(b,a) == 1
    for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        double s = regularized_incomplete_beta(x, 2.5, 4.0) +
                   regularized_incomplete_beta(1.0 - x, 4.0, 2.5);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    // I_x(1,1) is the identity.
    CHECK(regularized_incomplete_beta(0.42, 1.0, 1.0) == doctest::Approx(0.42).epsilon(1e-12));
}

TEST_CASE("chi-square survival matches reference values") {
    CHECK(std::fabs(chi_square_sf(1.0, 2) - 0.60653065971263342) < 1e-12);
    CHECK(std::fabs(chi_square_sf(5.991, 2) - 0.050011615026579088) < 1e-10);
    CHECK(std::fabs(chi_square_sf(13.816, 2) - 0.00099975530892388274) < 1e-12);
    CHECK(std::fabs(chi_square_sf(3.841, 1) - 0.050013683763956804) < 1e-10);
    CHECK(std::fabs(chi_square_sf(0.5, 1) - 0.47950012218695337) < 1e-10);
    CHECK(std::fabs(chi_square_sf(10.0, 4) - 0.040427681994512792) < 1e-10);
    CHECK(chi_square_sf(0.0, 3) == 1.0);
}

TEST_CASE("t distribution survival basic shape") {
    CHECK(student_t_sf(0.0, 5.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(student_t_sf(100.0, 5.0) < 1e-6);
    CHECK(student_t_sf(-100.0, 5.0) > 1.0 - 1e-6);
}
