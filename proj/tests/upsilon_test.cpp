#include <doctest.h>

#include <cmath>
#include <complex>

#include "ris/model.hpp"
#include "ris/rng.hpp"
#include "ris/upsilon.hpp"

using namespace ris;
using namespace ris::upsilon;

namespace {

model::RisBlockConfig make_block(int m_prime, const std::vector<double>& corr, double d_u,
                                 double d_b, double delta) {
  model::RisBlockConfig b;
  b.m_prime = m_prime;
  b.correlation = corr;
  b.phases_psi.assign(m_prime, 0.0);
  b.phases_theta.assign(m_prime, 0.0);
  b.phases_phi.assign(m_prime, 0.0);
  b.dist_user_m = d_u;
  b.dist_bs_m = d_b;
  b.pathloss_exp = delta;
  return b;
}

model::RisBlockConfig random_block(rng::SplitMix64& gen, int m_prime) {
  // random uniform(a) or exponential-decay(c) correlation, random phases,
  // random geometry
  const bool uni = gen.next() & 1;
  const auto kind = uni ? model::CorrelationKind::uniform : model::CorrelationKind::exponential_decay;
  const double param = uni ? gen.next_unit() : gen.next_unit() * 2.0;
  auto b = make_block(m_prime, model::make_correlation(kind, param, m_prime),
                      0.5 + 8.0 * gen.next_unit(), 0.5 + 8.0 * gen.next_unit(),
                      1.5 + 2.0 * gen.next_unit());
  for (int e = 0; e < m_prime; ++e) {
    b.phases_psi[e] = gen.next_angle();
    b.phases_theta[e] = gen.next_angle();
    b.phases_phi[e] = gen.next_angle();
  }
  return b;
}

std::vector<int> random_subset(rng::SplitMix64& gen, int m_prime) {
  std::vector<int> s;
  for (int e = 0; e < m_prime; ++e) {
    if (gen.next_unit() < 0.75) s.push_back(e);
  }
  return s;
}

}  // namespace

TEST_CASE("zeta term values") {
  const model::LinearBudget omega{100.0};
  (void)omega;
  {
    // identity correlation, unit distances, zero phases: the l=s=m term is 1
    auto b = make_block(2, model::make_correlation(model::CorrelationKind::identity, 0, 2), 1, 1, 2);
    CHECK(zeta(b, 0, 0, 0) == std::complex<double>(1.0, 0.0));
    // off-diagonal correlation kills the term
    CHECK(std::abs(zeta(b, 0, 1, 0)) == 0.0);
  }
  {
    // uniform(0.25), l=0 s=1 m=1, d_U=d_B=2, delta=2, psi_1=pi:
    // magnitude sqrt(0.25*0.25)*(4)^-1 = 0.0625 at phase pi
    auto b = make_block(2, model::make_correlation(model::CorrelationKind::uniform, 0.25, 2), 2, 2, 2);
    b.phases_psi[1] = 3.14159265358979323846;
    const auto z = zeta(b, 0, 1, 1);
    CHECK(z.real() == doctest::Approx(-0.0625).epsilon(1e-12));
    CHECK(z.imag() == doctest::Approx(0.0).epsilon(1e-12));
  }
  {
    auto b = make_block(2, model::make_correlation(model::CorrelationKind::identity, 0, 2), 1, 1, 2);
    CHECK_THROWS_AS(zeta(b, 0, 2, 0), std::out_of_range);
    CHECK_THROWS_AS(zeta(b, -1, 0, 0), std::out_of_range);
  }
}

TEST_CASE("upsilon_direct trivial cases") {
  const model::LinearBudget omega{100.0};
  {
    // M' = 1: single unit-magnitude term regardless of phases
    auto b = make_block(1, {1.0}, 1, 1, 3.7);
    b.phases_psi[0] = 1.234;
    const auto u = upsilon_direct(b, omega);
    CHECK(u.total == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(u.active_elements == 1);
  }
  {
    // M' = 2, identity, aligned, unit distances: coherent |2|^2
    auto b = make_block(2, model::make_correlation(model::CorrelationKind::identity, 0, 2), 1, 1, 2);
    CHECK(upsilon_direct(b, omega).total == doctest::Approx(400.0).epsilon(1e-12));
  }
  {
    // empty active set carries no signal
    auto b = make_block(3, model::make_correlation(model::CorrelationKind::identity, 0, 3), 1, 1, 2);
    const std::vector<int> none;
    const auto u = upsilon_direct(b, omega, none);
    CHECK(u.total == 0.0);
    CHECK(u.active_elements == 0);
  }
}

TEST_CASE("upsilon_expanded trivial cases and the M'=1 decomposition") {
  const model::LinearBudget omega{50.0};
  auto b = make_block(1, {1.0}, 2, 3, 2);
  const auto u = upsilon_expanded(b, omega);
  const double dist = std::pow(2.0 * 3.0, -2.0);
  CHECK(u.diag_sum == doctest::Approx(dist).epsilon(1e-12));
  CHECK(u.cross_sum == 0.0);
  CHECK(u.total == doctest::Approx(50.0 * dist).epsilon(1e-12));

  auto b2 = make_block(2, model::make_correlation(model::CorrelationKind::identity, 0, 2), 1, 1, 2);
  CHECK(upsilon_expanded(b2, omega).total ==
        doctest::Approx(upsilon_direct(b2, omega).total).epsilon(1e-12));
}

TEST_CASE("upsilon_expanded refuses oversized blocks") {
  const int n = kExpandedMaxMPrime + 1;
  auto b = make_block(n, model::make_correlation(model::CorrelationKind::identity, 0, n), 1, 1, 2);
  CHECK_THROWS_AS(upsilon_expanded(b, model::LinearBudget{1.0}), std::domain_error);
}

TEST_CASE("direct and expanded routes agree on 100 random blocks") {
  rng::SplitMix64 gen(0xA11CEull);
  const model::LinearBudget omega{100.0};
  for (int i = 0; i < 100; ++i) {
    const int m_prime = 2 + static_cast<int>(gen.next() % 7);  // up to 8
    const auto b = random_block(gen, m_prime);
    const auto sub = random_subset(gen, m_prime);
    const auto d = upsilon_direct(b, omega, sub);
    const auto e = upsilon_expanded(b, omega, sub);
    if (d.total == 0.0) {
      CHECK(std::abs(e.total) < 1e-9);
    } else {
      CHECK(std::abs(d.total - e.total) / d.total < 1e-9);
    }
    // decomposition invariant: total = omega * (diag + cross)
    CHECK(e.total == doctest::Approx(omega.omega * (e.diag_sum + e.cross_sum)).epsilon(1e-12));
    CHECK(d.total == doctest::Approx(omega.omega * (d.diag_sum + d.cross_sum)).epsilon(1e-9));
  }
}

TEST_CASE("distance scaling is exact: total(c*d)/total(d) = c^-delta") {
  rng::SplitMix64 gen(0xD157ull);
  const model::LinearBudget omega{100.0};
  for (int i = 0; i < 25; ++i) {
    const int m_prime = 2 + static_cast<int>(gen.next() % 7);
    auto b = random_block(gen, m_prime);
    const double c = 1.0 + 3.0 * gen.next_unit();
    auto scaled = b;
    scaled.dist_user_m *= c;
    const double t0 = upsilon_direct(b, omega).total;
    const double t1 = upsilon_direct(scaled, omega).total;
    if (t0 == 0.0) continue;
    const double want = std::pow(c, -b.pathloss_exp);
    CHECK(std::abs(t1 / t0 - want) / want < 1e-12);
  }
}

TEST_CASE("aligned phases maximize the aggregate") {
  rng::SplitMix64 gen(0xF00Dull);
  const model::LinearBudget omega{100.0};
  auto aligned = make_block(6, model::make_correlation(model::CorrelationKind::uniform, 0.4, 6), 2, 2, 2);
  const double best = upsilon_direct(aligned, omega).total;
  for (int i = 0; i < 50; ++i) {
    auto b = aligned;
    for (int e = 0; e < 6; ++e) {
      b.phases_psi[e] = gen.next_angle();
      b.phases_theta[e] = gen.next_angle();
      b.phases_phi[e] = gen.next_angle();
    }
    CHECK(upsilon_direct(b, omega).total <= best * (1.0 + 1e-12));
  }
}

TEST_CASE("failure monotonicity under identity correlation and aligned phases") {
  const model::LinearBudget omega{100.0};
  auto b = make_block(8, model::make_correlation(model::CorrelationKind::identity, 0, 8), 1, 1, 2);
  double prev = -1.0;
  std::vector<int> active;
  for (int n = 0; n <= 8; ++n) {
    if (n > 0) active.push_back(n - 1);
    const double t = upsilon_direct(b, omega, active).total;
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("BlockEvaluator matches upsilon_direct on random failure sets") {
  rng::SplitMix64 gen(0xB10CEEull);
  for (int i = 0; i < 60; ++i) {
    const int m_prime = 2 + static_cast<int>(gen.next() % 11);  // up to 12
    const model::LinearBudget omega{0.1 + 200.0 * gen.next_unit()};
    const auto b = random_block(gen, m_prime);
    const BlockEvaluator ev(b, omega);

    std::vector<int> failed;
    for (int e = 0; e < m_prime; ++e) {
      if (gen.next_unit() < 0.3) failed.push_back(e);
    }
    const auto active = active_from_failed(m_prime, failed);
    const double want = upsilon_direct(b, omega, active).total;
    const double got = ev.total(failed);
    if (want == 0.0) {
      CHECK(std::abs(got) < 1e-9);
    } else {
      CHECK(std::abs(got - want) / want < 1e-9);
    }
    CHECK(ev.total_all_active() ==
          doctest::Approx(upsilon_direct(b, omega).total).epsilon(1e-9));
    const auto all_failed = all_active(m_prime);  // every index failed
    CHECK(ev.total(all_failed) == 0.0);
  }
}
