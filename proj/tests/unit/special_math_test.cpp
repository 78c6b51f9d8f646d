#include "vbsbm/errors.hpp"
#include "vbsbm/special_math.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace vbsbm::special;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

constexpr double euler_gamma = 0.57721566490153286061;

} // namespace

TEST_CASE("ln_gamma known values") {
    CHECK(std::abs(ln_gamma(1.0)) <= 1e-14);
    CHECK(std::abs(ln_gamma(2.0)) <= 1e-14);
    CHECK(ln_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
    CHECK(ln_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-14));
}

TEST_CASE("ln_gamma matches factorials") {
    double log_factorial = 0.0;
    for (int k = 1; k <= 20; ++k) {
        CHECK(rel_err(ln_gamma(k), log_factorial) <= 1e-12);
        log_factorial += std::log(static_cast<double>(k));
    }
}

TEST_CASE("ln_gamma against Boost across the range") {
    double worst = 0.0;
    for (double x = 1e-6; x < 1e8; x *= 1.37) {
        const double want = boost::math::lgamma(x);
        worst = std::max(worst, std::abs(ln_gamma(x) - want) / std::max(std::abs(want), 1e-300));
    }
    // Near the roots at 1 and 2 relative error is meaningless; compare absolutely there.
    for (double x = 0.9; x < 2.1; x += 0.001) {
        CHECK(std::abs(ln_gamma(x) - boost::math::lgamma(x)) <= 1e-13);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("digamma known values") {
    CHECK(std::abs(digamma(1.0) + euler_gamma) <= 1e-12);
    CHECK(std::abs(digamma(0.5) - (-euler_gamma - 2.0 * std::log(2.0))) <= 1e-12);
    CHECK(std::abs(digamma(0.5) + 1.9635100260214235) <= 1e-12);
}

TEST_CASE("digamma against Boost") {
    double worst = 0.0;
    for (double x = 1e-6; x < 1e8; x *= 1.21) {
        worst = std::max(worst, std::abs(digamma(x) - boost::math::digamma(x)) / std::max(1.0, std::abs(digamma(x))));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("digamma recurrence") {
    double worst = 0.0;
    for (double x = 0.1; x <= 100.0; x += 0.0137) {
        worst = std::max(worst, std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("ln_beta") {
    CHECK(std::abs(ln_beta(1.0, 1.0)) <= 1e-14);
    CHECK(ln_beta(0.5, 0.5) == doctest::Approx(std::log(std::numbers::pi)).epsilon(1e-14));
    CHECK(ln_beta(0.5, 0.5) == doctest::Approx(1.1447298858494002).epsilon(1e-14));

    SUBCASE("agrees with direct gamma products") {
        const double want = std::log(boost::math::tgamma(3.5) * boost::math::tgamma(0.5) / boost::math::tgamma(4.0));
        CHECK(ln_beta(3.5, 0.5) == doctest::Approx(want).epsilon(1e-13));
    }
    SUBCASE("symmetric") {
        for (double a = 0.3; a < 500.0; a *= 1.9) {
            for (double b = 0.5; b < 300.0; b *= 2.3) {
                CHECK(ln_beta(a, b) == ln_beta(b, a));
            }
        }
    }
}

TEST_CASE("domain errors") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    for (const double bad : {0.0, -1.0, -0.5, nan, inf}) {
        CHECK_THROWS_AS(ln_gamma(bad), vbsbm::DomainError);
        CHECK_THROWS_AS(digamma(bad), vbsbm::DomainError);
        CHECK_THROWS_AS(ln_beta(bad, 1.0), vbsbm::DomainError);
        CHECK_THROWS_AS(ln_beta(1.0, bad), vbsbm::DomainError);
    }
}
