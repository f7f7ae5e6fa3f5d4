#include "conegeo/horo.hpp"

#include <cmath>

#include "doctest.h"
#include "support.hpp"

using namespace conegeo;
using support::mat;
using support::packed;
using support::vec;

namespace {

const Cone p2 = Cone::psd(2);
const Vector e11 = packed(mat(2, 2, {1, 0, 0, 0}));
const Vector e22 = packed(mat(2, 2, {0, 0, 0, 1}));

}  // namespace

TEST_SUITE("horo") {
  TEST_CASE("closed forms on 2x2 PSD matrices") {
    const Horofunction hf = Horofunction::funk_sym(p2, e22);
    const Horofunction hr = Horofunction::rfunk(p2, e11, p2.unit());
    const Horofunction hh = Horofunction::hilbert_sym(p2, e11, e22);
    support::Gen g(61);
    for (int t = 0; t < 50; ++t) {
      const Vector x = support::interior_point(p2, g);
      const Matrix m = support::sym_matrix(x);
      const double c = m(1, 1), det = m.determinant();
      CHECK(hf(x) == doctest::Approx(std::log(c)).epsilon(1e-12).scale(1));
      CHECK(hr(x) == doctest::Approx(std::log(c / det)).epsilon(1e-12).scale(1));
      CHECK(hh(x) == doctest::Approx(std::log(c) + std::log(c / det)).epsilon(1e-12).scale(1));
      CHECK(eval_horofunction(hh, x) == hh(x));
    }
  }

  TEST_CASE("base point normalization and parameter rescaling") {
    std::mt19937_64 rng(62);
    for (const Cone& c : {Cone::orthant(3), Cone::lorentz(3), Cone::psd(3)}) {
      for (int t = 0; t < 10; ++t) {
        const Vector y = 3.0 * sample_boundary(c, rng);
        CHECK(Horofunction::rfunk(c, y)(c.unit()) == doctest::Approx(0.0).scale(1));
        const Vector b = sample_interior(c, rng);
        CHECK(Horofunction::rfunk(c, y, b)(b) == doctest::Approx(0.0).scale(1));
        const Horofunction hf = Horofunction::funk_sym(c, y);
        CHECK(hf(c.unit()) == doctest::Approx(0.0).scale(1));
        CHECK(order_unit_norm(c, hf.z()) == doctest::Approx(1.0));
      }
    }
    const Cone sq = support::square_cone();
    const Horofunction h = Horofunction::rfunk(sq, vec({1, 1, 0.5}));
    CHECK(h(sq.unit()) == doctest::Approx(0.0).scale(1));
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(Horofunction::rfunk(p2, p2.unit()), DomainError);
    CHECK_THROWS_AS(Horofunction::rfunk(p2, Vector::Zero(3)), DomainError);
    CHECK_THROWS_AS(Horofunction::funk_sym(support::square_cone(), vec({1, 1, 0})), DomainError);
    // y o z != 0.
    CHECK_THROWS_AS(Horofunction::hilbert_sym(p2, e11, packed(mat(2, 2, {0.5, 0.5, 0.5, 0.5}))),
                    DomainError);
    const Horofunction hf = Horofunction::funk_sym(p2, e22);
    CHECK_THROWS_AS(hf(e11), DomainError);
  }

  TEST_CASE("limit oracle on the orthant") {
    const Cone o2 = Cone::orthant(2);
    std::vector<Vector> seq;
    for (double n : {1e6, 1e8, 1e9, 1e10}) seq.push_back(vec({1, 1 / n}));
    const Horofunction h = Horofunction::rfunk(o2, vec({1, 0}), vec({1, 1}));
    for (const Vector& x : {vec({1, 2}), vec({0.3, 5}), vec({7, 0.1})}) {
      const double lim = horo_limit_oracle(MetricKind::RFunk, o2, seq, vec({1, 1}), x);
      CHECK(lim == doctest::Approx(h(x)).epsilon(1e-8).scale(1));
    }
    // A constant interior sequence never reaches the boundary.
    const std::vector<Vector> flat(4, vec({1, 1}));
    CHECK_THROWS_AS(horo_limit_oracle(MetricKind::RFunk, o2, flat, vec({1, 1}), vec({1, 2})),
                    ConvergenceError);
    CHECK_THROWS_AS(horo_limit_oracle(MetricKind::Thompson, o2, seq, vec({1, 1}), vec({1, 2})),
                    DomainError);
  }

  TEST_CASE("limit oracle along a Jordan-frame sequence on 2x2 PSD") {
    // y = diag(1, 0), z = diag(0, 1): y_n = diag(1, 1/n^2).
    std::vector<Vector> seq;
    for (double n : {1e3, 1e4, 3e4, 1e5}) seq.push_back(packed(mat(2, 2, {1, 0, 0, 1 / (n * n)})));
    const Horofunction hf = Horofunction::funk_sym(p2, e22);
    const Horofunction hh = Horofunction::hilbert_sym(p2, e11, e22);
    support::Gen g(63);
    for (int t = 0; t < 10; ++t) {
      const Vector x = support::interior_point(p2, g);
      CHECK(horo_limit_oracle(MetricKind::Funk, p2, seq, p2.unit(), x) ==
            doctest::Approx(hf(x)).epsilon(1e-8).scale(1));
      CHECK(horo_limit_oracle(MetricKind::Hilbert, p2, seq, p2.unit(), x) ==
            doctest::Approx(hh(x)).epsilon(1e-8).scale(1));
    }
  }

  TEST_CASE("subgradient functionals") {
    const Horofunction hf = Horofunction::funk_sym(p2, e22);
    const DualFunctional phi = subgradient_functional(hf);
    CHECK((phi.coords - e22).norm() < 1e-14);
    support::Gen g(64);
    for (int t = 0; t < 20; ++t) {
      const Vector x = support::interior_point(p2, g);
      CHECK(std::log(phi(x)) == doctest::Approx(hf(x)).epsilon(1e-12).scale(1));
    }
    const Cone o3 = Cone::orthant(3);
    const DualFunctional p = subgradient_functional(Horofunction::funk_sym(o3, vec({1, 0, 0})));
    CHECK(p.coords.isApprox(vec({1, 0, 0})));
    CHECK_THROWS_AS(subgradient_functional(Horofunction::rfunk(o3, vec({1, 0, 0}))), DomainError);

    // log phi <= h_F everywhere for a rank-two parameter.
    const Cone p3 = Cone::psd(3);
    const Horofunction h3 = Horofunction::funk_sym(p3, packed(Eigen::Vector3d(1, 0.5, 0).asDiagonal().toDenseMatrix()));
    const DualFunctional q = subgradient_functional(h3);
    for (int t = 0; t < 50; ++t) {
      const Vector x = support::interior_point(p3, g);
      CHECK(std::log(q(x)) <= h3(x) + 1e-12);
    }
  }

  TEST_CASE("Wolff inequalities") {
    const Map f = Map::congruence(p2, support::shear());
    const Horofunction hf = Horofunction::funk_sym(p2, e22);
    const Horofunction hr = Horofunction::rfunk(p2, e11);
    const Horofunction hh = Horofunction::hilbert_sym(p2, e11, e22);
    support::Gen g(65);
    std::vector<Vector> samples;
    for (int t = 0; t < 100; ++t) samples.push_back(support::interior_point(p2, g));
    WolffReport w = check_wolff(f, hf, hr, hh, samples, 1.0);
    CHECK(w.samples == 100);
    CHECK(w.max_violation <= 1e-10);
    CHECK(w.max_abs_gap <= 1e-10);

    const Cone o2 = Cone::orthant(2);
    const Map half = Map::linear(o2, mat(2, 2, {1, 0.5, 0, 1}));
    const Horofunction r1 = Horofunction::rfunk(o2, vec({1, 0}), vec({1, 1}));
    std::vector<Vector> pts;
    for (int t = 0; t < 100; ++t) pts.push_back(support::interior_point(o2, g));
    for (const Vector& x : pts) CHECK(r1(x) == doctest::Approx(-std::log(x(0))).scale(1));
    w = check_wolff(half, std::nullopt, r1, std::nullopt, pts, 1.0);
    CHECK(w.rfunk_max_slack <= 0.0);
    CHECK(w.max_violation == 0.0);
    CHECK(std::isinf(w.funk_max_slack));

    w = check_wolff(Map::identity(p2), hf, hr, hh, samples, 1.0);
    CHECK(w.funk_max_slack == 0.0);
    CHECK(w.rfunk_max_slack == 0.0);
    CHECK(w.hilbert_max_slack == 0.0);
  }

  TEST_CASE("Lipschitz constants against the Thompson metric") {
    std::mt19937_64 rng(66);
    support::Gen g(66);
    for (const Cone& c : {Cone::orthant(3), Cone::lorentz(3), Cone::psd(2), Cone::psd(3)}) {
      const Vector y = sample_boundary(c, rng);
      const Horofunction hr = Horofunction::rfunk(c, y);
      const Horofunction hf = Horofunction::funk_sym(c, y);
      for (int t = 0; t < 100; ++t) {
        const Vector a = support::interior_point(c, g);
        const Vector b = support::interior_point(c, g);
        const double d = thompson(c, a, b);
        CHECK(std::abs(hr(a) - hr(b)) <= d + 1e-9);
        CHECK(std::abs(hf(a) - hf(b)) <= d + 1e-9);
      }
    }
    const Horofunction hh = Horofunction::hilbert_sym(p2, e11, e22);
    for (int t = 0; t < 100; ++t) {
      const Vector a = support::interior_point(p2, g);
      const Vector b = support::interior_point(p2, g);
      CHECK(std::abs(hh(a) - hh(b)) <= 2 * thompson(p2, a, b) + 1e-9);
    }
  }
}
