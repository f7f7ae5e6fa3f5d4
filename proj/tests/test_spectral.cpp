#include "conegeo/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "catalog.hpp"
#include "conegeo/metrics.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace conegeo;
using support::mat;
using support::packed;
using support::vec;

namespace {

const Cone o2 = Cone::orthant(2);
const Map A = Map::linear(o2, mat(2, 2, {2, 1, 0, 2}));
const Map B = Map::linear(o2, mat(2, 2, {1, 1, 1, 1}));

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("power radius") {
    const double pa = power_radius(A, vec({1, 1}), 50);
    CHECK(pa >= 2.0);
    CHECK(pa <= 2.16);
    CHECK(power_radius(A, vec({1, 1}), 10) >= pa);
    CHECK(power_radius(B, vec({1, 1}), 1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(power_radius(Map::identity(Cone::psd(2)), packed(Matrix::Identity(2, 2)), 5) ==
          doctest::Approx(1.0));
  }

  TEST_CASE("approximate eigenpairs") {
    EigenSolveResult r = approx_eigenpair(B, 0.5, vec({1, 1}), 1e-12, 1000);
    CHECK(r.converged);
    CHECK(r.v_eps.isApprox(vec({1, 1}), 1e-12));
    CHECK(r.r_eps == doctest::Approx(2.5).epsilon(1e-12));

    // Shear congruence, eps = 1: f_eps(v) = r_eps v at the returned pair.
    const Map f = support::shear_congruence();
    const Vector u = f.cone().unit();
    r = approx_eigenpair(f, 1.0, u, 1e-12, 100000);
    CHECK(r.converged);
    CHECK(r.r_eps > 1.0);
    const Vector fe = Map::perturbed(f, 1.0).apply(r.v_eps);
    CHECK(order_unit_norm(f.cone(), fe - r.r_eps * r.v_eps) <= 1e-10 * r.r_eps);

    // diag(3,1), eps = 0.01: v = (1, d) with d solving d = (d + eps)/(3 + eps).
    const Map d31 = Map::linear(o2, mat(2, 2, {3, 0, 0, 1}));
    r = approx_eigenpair(d31, 0.01, vec({1, 1}), 1e-13, 10000);
    CHECK(r.converged);
    const double delta = support::bisect(
        [](double d) {
          const double r_of = std::max(3.0 + 0.01, d + 0.01);
          return (d + 0.01) / r_of - d;
        },
        0.0, 1.0);
    CHECK(r.v_eps(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.v_eps(1) == doctest::Approx(delta).epsilon(1e-10));
    CHECK(r.r_eps == doctest::Approx(3.01).epsilon(1e-12));

    CHECK_THROWS_AS(approx_eigenpair(B, 0.0, vec({1, 1}), 1e-10, 10), DomainError);
    CHECK_THROWS_AS(approx_eigenpair(B, 0.1, vec({1, 0}), 1e-10, 10), DomainError);
  }

  TEST_CASE("spectral radius with an interior eigenvector") {
    const SpectralReport rep = spectral_radius(B, vec({1, 1}));
    CHECK(rep.r_hat == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(rep.interior_eigenvector_found);
    CHECK_FALSE(rep.truncated);
  }

  TEST_CASE("spectral radius with a boundary eigenvector") {
    const SpectralReport rep = spectral_radius(A, vec({1, 1}));
    CHECK(std::abs(rep.r_hat - 2.0) <= 1e-6);
    CHECK_FALSE(rep.interior_eigenvector_found);
    CHECK(rep.boundary_drift < 1e-3);
    // Drift shrinks along the trace.
    CHECK(relative_gap(o2, rep.eps_trace.back().v_eps) <
          relative_gap(o2, rep.eps_trace.front().v_eps));
  }

  TEST_CASE("spectral radius of the shear congruence") {
    const Map f = support::shear_congruence();
    const SpectralReport rep = spectral_radius(f, f.cone().unit());
    CHECK(std::abs(rep.r_hat - 1.0) <= 1e-6);
    CHECK_FALSE(rep.interior_eigenvector_found);
  }

  TEST_CASE("Collatz-Wielandt bounds") {
    CHECK(cw_upper(A, vec({1, 1}), 1) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(cw_upper(B, vec({1, 1}), 1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(cw_upper(Map::identity(Cone::lorentz(3)), vec({2, 1, 0}), 7) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cw_lower(A, vec({1, 0})) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(cw_lower(B, vec({1, 1})) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(cw_lower(A, vec({1, 1})) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(cw_lower(A, vec({0, 0})), DomainError);
    CHECK_THROWS_AS(cw_upper(A, vec({1, 0}), 1), DomainError);
  }

  TEST_CASE("escape rate") {
    // B^k (1,2) = 3 2^(k-1) (1,1), so M(B^k x / x) = 3 2^(k-1): rate log 2 + log(3/2)/k.
    CHECK(escape_rate(B, vec({1, 2}), 100) ==
          doctest::Approx(std::log(2.0) + std::log(1.5) / 100).epsilon(1e-13));
    CHECK(escape_rate(B, vec({1, 1}), 100) == doctest::Approx(std::log(2.0)).epsilon(1e-13));
    CHECK(std::abs(escape_rate(A.scaled(0.5), vec({1, 1}), 1000)) <= 1e-2);
    CHECK(escape_rate(Map::identity(Cone::psd(2)), packed(mat(2, 2, {2, 1, 1, 3})), 10) ==
          doctest::Approx(0.0));
  }

  TEST_CASE("contraction bound") {
    for (double m1 : {0.5, 1.0, 2.0, 10.0}) {
      for (double eps : {1.0, 1e-2, 1e-4, 1e-8}) {
        const double r = std::log((m1 + eps) / eps);
        const double want = 1.0 - eps / (m1 + eps) * (1.0 - std::exp(-2 * r)) / (2 * r);
        CHECK(contraction_bound(m1, eps) == doctest::Approx(want).epsilon(1e-14));
        CHECK(contraction_bound(m1, eps) < 1.0);
      }
    }
    CHECK_THROWS(contraction_bound(0.0, 1.0));
  }

  TEST_CASE("catalog: sandwich, monotone trace, positivity") {
    for (const auto& m : support::map_catalog()) {
      if (m.name == "shear congruence") continue;  // covered above; slow
      CAPTURE(m.name);
      const Cone& c = m.f.cone();
      const SpectralReport rep = spectral_radius(m.f, c.unit());
      CHECK(rep.r_hat > 0.0);
      CHECK(std::abs(rep.r_hat - m.r) <= 1e-6 * m.r);
      CHECK(rep.interior_eigenvector_found == m.interior_eigenvector);
      for (const auto& e : rep.cw_upper) CHECK(rep.r_hat <= e.bound + 1e-6);
      for (const auto& e : rep.cw_lower) CHECK(e.bound <= rep.r_hat + 1e-6);
      for (std::size_t i = 1; i < rep.eps_trace.size(); ++i) {
        CHECK(rep.eps_trace[i].r_eps <= rep.eps_trace[i - 1].r_eps + 1e-9);
      }
      // Residual of every converged solve.
      for (const auto& e : rep.eps_trace) {
        const Vector fe = Map::perturbed(m.f, e.eps).apply_extended(e.v_eps);
        CHECK(order_unit_norm(c, fe - e.r_eps * e.v_eps) <= 1e-8 * e.r_eps);
      }
    }
  }

  TEST_CASE("rescaled orbits stay away from zero") {
    support::Gen g(51);
    for (const auto& m : support::map_catalog()) {
      CAPTURE(m.name);
      const Map f = m.f.scaled(1.0 / m.r);
      Vector x = support::interior_point(f.cone(), g);
      x /= order_unit_norm(f.cone(), x);
      double lowest = 1.0;
      for (int k = 0; k < 1000; ++k) {
        x = f.apply(x);
        lowest = std::min(lowest, order_unit_norm(f.cone(), x));
      }
      CHECK(lowest > 1e-6);
    }
  }
}
