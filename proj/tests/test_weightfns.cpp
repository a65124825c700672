#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cdd/gammafn.hpp"
#include "cdd/weightfns.hpp"

namespace {

// Composite Simpson over [a, b] with n panels (n even).
double simpson(const cdd::WeightingFunction& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double sum = cdd::pdf(f, a) + cdd::pdf(f, b);
    for (int i = 1; i < n; ++i) {
        sum += cdd::pdf(f, a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

// Integration range covering (well over) 99.99% of each table point's mass.
void mass_range(const cdd::WeightingFunction& f, double& lo, double& hi) {
    switch (f.kind) {
        case cdd::WeightKind::chi_squared: lo = 0.0; hi = 60.0; break;
        case cdd::WeightKind::extreme_value: lo = -7.0; hi = 56.0; break;
        case cdd::WeightKind::weibull: lo = 0.0; hi = 40.0; break;
        case cdd::WeightKind::log_logistic: lo = 0.0; hi = 2000.0; break;
        case cdd::WeightKind::gamma: lo = 0.0; hi = 80.0; break;
        case cdd::WeightKind::logistic: lo = -40.0; hi = 40.0; break;
        case cdd::WeightKind::normal: lo = -17.0; hi = 17.0; break;
        case cdd::WeightKind::landau: lo = -5.0; hi = 80.0; break;
    }
}

}  // namespace

TEST_CASE("gamma function hits reference values", "[weightfns]") {
    const double sqrt_pi = std::sqrt(3.14159265358979323846);
    CHECK(std::abs(cdd::gamma_fn(0.5) - sqrt_pi) < 1e-10);
    CHECK(std::abs(cdd::gamma_fn(5.0) - 24.0) < 1e-9);
    CHECK(std::abs(cdd::gamma_fn(1.0) - 1.0) < 1e-12);
    CHECK(std::abs(cdd::gamma_fn(2.0) - 1.0) < 1e-12);
    CHECK(std::abs(cdd::gamma_fn(0.25) - 3.6256099082219083) < 1e-9);  // reflection path
    CHECK(std::abs(cdd::gamma_fn(10.0) - 362880.0) < 1e-6);
}

TEST_CASE("pdf spot values", "[weightfns]") {
    using WK = cdd::WeightKind;
    const auto landau = cdd::make_weighting(WK::landau, {});
    CHECK(cdd::pdf(landau, 0.0) == Catch::Approx(0.24197072451914337).margin(1e-15));
    const auto logistic = cdd::make_weighting(WK::logistic, {1.0});
    CHECK(cdd::pdf(logistic, 0.0) == Catch::Approx(0.25).margin(1e-15));
    const auto normal = cdd::make_weighting(WK::normal, {1.4});
    CHECK(cdd::pdf(normal, 0.0) == Catch::Approx(0.2849587717153091).margin(1e-15));
    const auto gamma = cdd::make_weighting(WK::gamma, {2.0, 2.5});
    CHECK(cdd::pdf(gamma, 2.5) == Catch::Approx(0.14715177646857694).margin(1e-12));
}

TEST_CASE("closed-form modes", "[weightfns]") {
    using WK = cdd::WeightKind;
    CHECK(cdd::mode(cdd::make_weighting(WK::chi_squared, {3.0})) == 1.0);
    CHECK(cdd::mode(cdd::make_weighting(WK::chi_squared, {1.0})) == 0.0);  // max(k-2, 0)
    CHECK(cdd::mode(cdd::make_weighting(WK::weibull, {2.0, 5.0})) ==
          Catch::Approx(3.5355339059327378).margin(1e-14));
    CHECK(cdd::mode(cdd::make_weighting(WK::log_logistic, {5.0, 2.0})) ==
          Catch::Approx(2.8867513459481287).margin(1e-14));
    CHECK(cdd::mode(cdd::make_weighting(WK::gamma, {2.0, 2.5})) == 2.5);
    CHECK(cdd::mode(cdd::make_weighting(WK::extreme_value, {1.4})) == 0.0);
    CHECK(cdd::mode(cdd::make_weighting(WK::logistic, {1.0})) == 0.0);
    CHECK(cdd::mode(cdd::make_weighting(WK::normal, {1.4})) == 0.0);
    CHECK(cdd::mode(cdd::make_weighting(WK::landau, {})) == 0.0);
}

TEST_CASE("pdf is nonnegative and normalized at every reference point", "[weightfns]") {
    for (cdd::WeightKind kind : cdd::all_weight_kinds()) {
        const auto f = cdd::reference_point(kind);
        double lo = 0.0, hi = 0.0;
        mass_range(f, lo, hi);
        const int probes = 2000;
        for (int i = 0; i <= probes; ++i) {
            const double x = lo + (hi - lo) * i / probes;
            REQUIRE(cdd::pdf(f, x) >= 0.0);
        }
        const double mass = simpson(f, lo, hi, 200000);
        INFO("kind: " << cdd::kind_name(kind));
        CHECK(std::abs(mass - 1.0) < 1e-3);
    }
}

TEST_CASE("closed-form mode matches the numerical argmax", "[weightfns]") {
    for (cdd::WeightKind kind : cdd::all_weight_kinds()) {
        const auto f = cdd::reference_point(kind);
        const double m = cdd::mode(f);
        const double lo = cdd::positive_support(kind) ? 1e-3 : m - 5.0;
        const double hi = m + 5.0;
        double best_x = lo, best_v = -1.0;
        for (double x = lo; x <= hi; x += 1e-3) {
            const double v = cdd::pdf(f, x);
            if (v > best_v) {
                best_v = v;
                best_x = x;
            }
        }
        INFO("kind: " << cdd::kind_name(kind));
        CHECK(std::abs(best_x - m) < 2e-3);
    }
}

TEST_CASE("analytic derivative matches central finite differences", "[weightfns]") {
    const double h = 1e-6;
    for (cdd::WeightKind kind : cdd::all_weight_kinds()) {
        const auto f = cdd::reference_point(kind);
        const double m = cdd::mode(f);
        const double offsets[] = {-1.5, -0.75, -0.3, 0.15, 0.4, 0.8, 1.6, 3.0};
        for (double off : offsets) {
            double x = m + off;
            if (cdd::positive_support(kind) && x < 1e-2) x = 1e-2;
            const double analytic = cdd::pdf_prime(f, x);
            const double fd = (cdd::pdf(f, x + h) - cdd::pdf(f, x - h)) / (2.0 * h);
            const double denom = std::max({std::abs(analytic), std::abs(fd), 1e-6});
            INFO("kind: " << cdd::kind_name(kind) << " x: " << x);
            CHECK(std::abs(analytic - fd) / denom < 1e-5);
        }
    }
}

TEST_CASE("derivative vanishes at interior modes", "[weightfns]") {
    for (cdd::WeightKind kind : cdd::all_weight_kinds()) {
        const auto f = cdd::reference_point(kind);
        const double m = cdd::mode(f);
        if (cdd::positive_support(kind) && m == 0.0) continue;  // boundary mode
        INFO("kind: " << cdd::kind_name(kind));
        CHECK(std::abs(cdd::pdf_prime(f, m)) < 1e-6);
    }
}

TEST_CASE("support boundaries behave", "[weightfns]") {
    using WK = cdd::WeightKind;
    const auto chi = cdd::make_weighting(WK::chi_squared, {1.5});
    CHECK(cdd::pdf(chi, -1.0) == 0.0);
    CHECK(cdd::pdf(chi, 0.0) == 0.0);
    REQUIRE_THROWS_AS(cdd::pdf_prime(chi, 0.0), std::domain_error);
    CHECK(cdd::pdf_prime(chi, -1.0) == 0.0);
    const auto chi2exact = cdd::make_weighting(WK::chi_squared, {2.0});
    CHECK(cdd::pdf(chi2exact, 0.0) == 0.5);  // continuous limit
    const auto wei = cdd::make_weighting(WK::weibull, {1.0, 4.0});
    CHECK(cdd::pdf(wei, 0.0) == 0.25);
    const auto llog = cdd::make_weighting(WK::log_logistic, {5.0, 2.0});
    CHECK(cdd::pdf(llog, 0.0) == 0.0);
    CHECK(cdd::pdf(llog, -3.0) == 0.0);
}

TEST_CASE("parameter validation", "[weightfns]") {
    using WK = cdd::WeightKind;
    REQUIRE_THROWS_AS(cdd::make_weighting(WK::normal, {0.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(cdd::make_weighting(WK::normal, {-1.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(cdd::make_weighting(WK::normal, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(cdd::make_weighting(WK::weibull, {2.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(cdd::make_weighting(WK::landau, {1.0}), std::invalid_argument);
    REQUIRE_NOTHROW(cdd::make_weighting(WK::gamma, {2.0, 2.5}));
}

TEST_CASE("default grids contain the reference parameter points exactly", "[weightfns]") {
    for (cdd::WeightKind kind : cdd::all_weight_kinds()) {
        const auto grid = cdd::default_grid(kind);
        const auto ref = cdd::reference_point(kind);
        const auto points = cdd::grid_points(grid);
        bool found = false;
        for (const auto& p : points) {
            if (p == ref.params) {
                found = true;
                break;
            }
        }
        INFO("kind: " << cdd::kind_name(kind));
        CHECK(found);
    }
}

TEST_CASE("default grid shapes", "[weightfns]") {
    using WK = cdd::WeightKind;
    CHECK(cdd::grid_points(cdd::default_grid(WK::chi_squared)).size() == 20);
    CHECK(cdd::grid_points(cdd::default_grid(WK::extreme_value)).size() == 25);
    CHECK(cdd::grid_points(cdd::default_grid(WK::weibull)).size() == 9 * 20);
    CHECK(cdd::grid_points(cdd::default_grid(WK::log_logistic)).size() == 10 * 9);
    CHECK(cdd::grid_points(cdd::default_grid(WK::gamma)).size() == 9 * 10);
    CHECK(cdd::grid_points(cdd::default_grid(WK::logistic)).size() == 25);
    CHECK(cdd::grid_points(cdd::default_grid(WK::normal)).size() == 25);
    CHECK(cdd::grid_points(cdd::default_grid(WK::landau)).size() == 1);
    // exact membership of awkward decimals
    const auto normal_axis = cdd::default_grid(WK::normal).axes[0];
    CHECK(std::find(normal_axis.begin(), normal_axis.end(), 1.4) != normal_axis.end());
    const auto gamma_axes = cdd::default_grid(WK::gamma).axes;
    CHECK(std::find(gamma_axes[0].begin(), gamma_axes[0].end(), 2.0) != gamma_axes[0].end());
    CHECK(std::find(gamma_axes[1].begin(), gamma_axes[1].end(), 2.5) != gamma_axes[1].end());
}

TEST_CASE("kind names round trip", "[weightfns]") {
    for (cdd::WeightKind kind : cdd::all_weight_kinds()) {
        CHECK(cdd::kind_from_name(cdd::kind_name(kind)) == kind);
    }
    REQUIRE_THROWS_AS(cdd::kind_from_name("bogus"), std::invalid_argument);
    try {
        cdd::kind_from_name("bogus");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        for (cdd::WeightKind kind : cdd::all_weight_kinds()) {
            CHECK(msg.find(cdd::kind_name(kind)) != std::string::npos);
        }
    }
}
