#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qepi/inequalities.hpp"

using namespace qepi;

TEST_CASE("subset collections and r") {
  auto s = SubsetCollection::singletons(3);
  CHECK(s.elements.size() == 3);
  CHECK(s.r() == 1);
  auto p = SubsetCollection::all_pairs(3);
  CHECK(p.elements.size() == 3);
  CHECK(p.r() == 2);
  auto f = SubsetCollection::full_set(4);
  CHECK(f.elements.size() == 1);
  CHECK(f.r() == 1);
  // Ratio constraint |w| n = |v| n' enforced literally.
  CHECK_THROWS_AS(SubsetCollection::paired(2, 2, {{{1}, {}}}), Error);
  auto ok = SubsetCollection::paired(2, 2, {{{1}, {1}}, {{2}, {2}}});
  CHECK(ok.r() == 1);
}

TEST_CASE("epi_basic margins") {
  const int N = 40;
  auto th = thermal_state(1.0, N);
  SUBCASE("thermal fixed point is tight") {
    auto ms = epi_basic(th, th, 0.5);
    REQUIRE(ms.size() == 2);
    CHECK(std::abs(ms[0].margin) < 1e-8);
    CHECK(std::abs(ms[1].margin) < 1e-8);
    CHECK(ms[0].pass);
    CHECK(ms[1].pass);
  }
  SUBCASE("fock pair strictly improves in the exponential form") {
    auto f1 = fock_state(1, N);
    auto ms = epi_basic(f1, f1, 0.5);
    // S(f1 boxplus f1) = ln 2, so the margin is e^{ln2} - 1 = 1.
    CHECK(ms[1].margin == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(ms[0].margin == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  }
  SUBCASE("eta boundary is exact") {
    auto f1 = fock_state(1, N);
    auto ms = epi_basic(th, f1, 1.0);
    CHECK(std::abs(ms[0].margin) < 1e-10);
    CHECK(std::abs(ms[1].margin) < 1e-10);
  }
}

TEST_CASE("guha monotonicity margins") {
  const int N = 30;
  SUBCASE("thermal is flat") {
    auto ms = guha_monotonicity(truncate(thermal_state(1.0, 60), N), 4);
    REQUIRE(ms.size() == 3);
    for (const auto& m : ms) CHECK(std::abs(m.margin) < 1e-7);
  }
  SUBCASE("fock(1) increases strictly") {
    auto ms = guha_monotonicity(fock_state(1, N), 5);
    REQUIRE(ms.size() == 4);
    for (const auto& m : ms) CHECK(m.margin > 1e-3);
    // First step is exactly ln 2 (Hong-Ou-Mandel mixture).
    CHECK(ms[0].lhs == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  }
  SUBCASE("cat state increases") {
    auto ms = guha_monotonicity(cat_state(Complex(1.5, 0), N), 4);
    for (const auto& m : ms) CHECK(m.margin > 0.0);
  }
}

TEST_CASE("generalized EPI margins over collections") {
  const int N = 34;
  SUBCASE("iid thermal singleton equality") {
    std::vector<DensityMatrix> st(2, thermal_state(1.0, N));
    auto m = subset_epi_check(st, SubsetCollection::singletons(2));
    CHECK(std::abs(m.margin) < 1e-6);
    CHECK(m.lhs == doctest::Approx(std::exp(oracles::g_thermal(1.0))).epsilon(1e-6));
  }
  SUBCASE("full-set collection is an identity") {
    std::vector<DensityMatrix> st = {thermal_state(0.5, N), fock_state(1, N),
                                     fock_mixture_state({0.4, 0.6}, N)};
    auto m = subset_epi_check(st, SubsetCollection::full_set(3));
    CHECK(std::abs(m.margin) < 1e-12);
  }
  SUBCASE("iid fock(1), pairs collection") {
    std::vector<DensityMatrix> st(3, fock_state(1, N));
    auto m = subset_epi_check(st, SubsetCollection::all_pairs(3));
    CHECK(m.pass);
    CHECK(m.margin > 0.0);
  }
  SUBCASE("non-iid mixture across collections") {
    std::vector<DensityMatrix> st = {thermal_state(1.0, N), fock_state(1, N),
                                     fock_mixture_state({0.3, 0.4, 0.3}, N)};
    for (auto C : {SubsetCollection::singletons(3), SubsetCollection::all_pairs(3)}) {
      auto m = subset_epi_check(st, C);
      CHECK(m.pass);
    }
  }
}

TEST_CASE("size-(n-1) collection reproduces the monotonicity margin") {
  const int N = 30;
  auto f1 = fock_state(1, N);
  std::vector<DensityMatrix> st(3, f1);
  auto m = subset_epi_check(st, SubsetCollection::size_k(3, 2));
  auto guha = guha_monotonicity(f1, 3);
  double expect = std::exp(guha[1].lhs) - std::exp(guha[1].rhs);
  CHECK(m.margin == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("Fisher-Stam margins") {
  const int N = 40;
  SUBCASE("iid thermal singleton equality at ln 2") {
    std::vector<DensityMatrix> st(2, thermal_state(1.0, N));
    auto m = fisher_stam_check(st, SubsetCollection::singletons(2), std::nullopt);
    CHECK(m.lhs == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    CHECK(m.rhs == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    CHECK(std::abs(m.margin) < 1e-6);
  }
  SUBCASE("a lopsided mu is strictly worse") {
    std::vector<DensityMatrix> st(2, thermal_state(1.0, N));
    WeightDistribution mu;
    mu.mu = {1.0, 0.0};
    auto m = fisher_stam_check(st, SubsetCollection::singletons(2), mu);
    // rhs = 2 ln 2 > lhs = ln 2.
    CHECK(m.rhs == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-6));
    CHECK(m.margin == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  }
  SUBCASE("optimal mu dominates explicit choices") {
    std::vector<DensityMatrix> st = {thermal_state(1.0, N),
                                     truncate(thermal_state(2.0, 80), N)};
    auto opt = fisher_stam_check(st, SubsetCollection::singletons(2), std::nullopt);
    CHECK(opt.pass);
    for (double w : {0.2, 0.5, 0.8}) {
      WeightDistribution mu;
      mu.mu = {w, 1.0 - w};
      auto m = fisher_stam_check(st, SubsetCollection::singletons(2), mu);
      CHECK(m.rhs >= opt.rhs - 1e-12);
    }
  }
  SUBCASE("pure-state components are flagged") {
    std::vector<DensityMatrix> st = {fock_state(1, 20), thermal_state(0.4, 20)};
    CHECK_THROWS_AS(
        fisher_stam_check(st, SubsetCollection::singletons(2), std::nullopt), Error);
  }
}

TEST_CASE("quantum-classical EPI margins") {
  const int N = 40;
  SUBCASE("thermal + gaussian equality") {
    std::vector<DensityMatrix> st(2, thermal_state(1.0, N));
    std::vector<ClassicalRV> rvs(2, gaussian_rv(1.0));
    auto C = SubsetCollection::paired(2, 2, {{{1}, {1}}, {{2}, {2}}});
    auto m = qc_subset_epi_check(st, rvs, C);
    // Every convolved state is thermal(2).
    CHECK(m.lhs == doctest::Approx(std::exp(oracles::g_thermal(2.0))).epsilon(1e-5));
    CHECK(std::abs(m.margin) < 1e-5);
  }
  SUBCASE("two-point classical registers") {
    std::vector<DensityMatrix> st(2, thermal_state(1.0, N));
    std::vector<ClassicalRV> rvs(2, two_point_rv(Complex(0.5, 0)));
    auto C = SubsetCollection::paired(2, 2, {{{1}, {1}}, {{2}, {2}}});
    auto m = qc_subset_epi_check(st, rvs, C);
    CHECK(m.pass);
  }
  SUBCASE("scaled classical registers, t != 1") {
    // rho *_{t} gaussian(h) = rho *_1 gaussian(t h): the margin machinery
    // must respect the scale carried by the convolution.
    std::vector<DensityMatrix> st(2, thermal_state(1.0, N));
    std::vector<ClassicalRV> rvs(2, gaussian_rv(1.0));
    auto Ct = SubsetCollection::paired(2, 2, {{{1}, {1}}, {{2}, {2}}});
    auto m = qc_subset_epi_check(st, rvs, Ct, 1e-5, {}, 0.5);
    // Every convolved state is thermal(1.5).
    CHECK(m.lhs == doctest::Approx(std::exp(oracles::g_thermal(1.5))).epsilon(1e-5));
    CHECK(std::abs(m.margin) < 1e-5);
  }
  SUBCASE("singleton n = n' = 1 is an identity") {
    std::vector<DensityMatrix> st = {thermal_state(0.5, N)};
    std::vector<ClassicalRV> rvs = {gaussian_rv(0.5)};
    auto C = SubsetCollection::paired(1, 1, {{{1}, {1}}});
    auto m = qc_subset_epi_check(st, rvs, C);
    CHECK(std::abs(m.margin) < 1e-12);
  }
}

TEST_CASE("quantum-classical Fisher-Stam margins") {
  const int N = 40;
  SUBCASE("thermal + gaussian equality at ln(3/2)") {
    std::vector<DensityMatrix> st(2, thermal_state(1.0, N));
    std::vector<ClassicalRV> rvs(2, gaussian_rv(1.0));
    auto C = SubsetCollection::paired(2, 2, {{{1}, {1}}, {{2}, {2}}});
    auto m = qc_fisher_stam_check(st, rvs, C, std::nullopt);
    CHECK(m.lhs == doctest::Approx(std::log(1.5)).epsilon(1e-5));
    CHECK(std::abs(m.margin) < 1e-5);
  }
  SUBCASE("degenerate n' = 0 reduces to the quantum-only bound") {
    std::vector<DensityMatrix> st(2, thermal_state(1.0, N));
    auto C0 = SubsetCollection::singletons(2);
    auto m4 = qc_fisher_stam_check(st, {}, C0, std::nullopt);
    auto m2 = fisher_stam_check(st, C0, std::nullopt);
    CHECK(m4.lhs == doctest::Approx(m2.lhs).epsilon(1e-12));
    CHECK(m4.rhs == doctest::Approx(m2.rhs).epsilon(1e-12));
  }
  SUBCASE("two-point classical registers") {
    std::vector<DensityMatrix> st(2, thermal_state(1.0, N));
    std::vector<ClassicalRV> rvs(2, two_point_rv(Complex(0.5, 0)));
    auto C = SubsetCollection::paired(2, 2, {{{1}, {1}}, {{2}, {2}}});
    auto m = qc_fisher_stam_check(st, rvs, C, std::nullopt);
    CHECK(m.pass);
  }
}

TEST_CASE("entropy sum form") {
  const int N = 36;
  SUBCASE("single full set is an identity") {
    std::vector<DensityMatrix> st = {thermal_state(0.5, N), fock_state(1, N)};
    WeightDistribution mu;
    mu.mu = {1.0};
    auto m = entropy_sum_form_check(st, SubsetCollection::full_set(2), mu);
    CHECK(std::abs(m.margin) < 1e-12);
  }
  SUBCASE("iid thermal uniform singletons sits at zero") {
    std::vector<DensityMatrix> st(2, thermal_state(1.0, N));
    WeightDistribution mu;
    mu.mu = {0.5, 0.5};
    auto m = entropy_sum_form_check(st, SubsetCollection::singletons(2), mu);
    // ln(|v|/(r mu n)) = ln(1/(1*0.5*2)) = 0 termwise.
    CHECK(std::abs(m.margin) < 1e-7);
  }
  SUBCASE("fock(1) pair has margin S(rho boxplus rho)") {
    std::vector<DensityMatrix> st(2, fock_state(1, N));
    WeightDistribution mu;
    mu.mu = {0.5, 0.5};
    auto m = entropy_sum_form_check(st, SubsetCollection::singletons(2), mu);
    CHECK(m.margin == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  }
  SUBCASE("weight bound is enforced") {
    std::vector<DensityMatrix> st(3, thermal_state(0.4, 20));
    WeightDistribution mu;
    mu.mu = {0.9, 0.05, 0.05};
    CHECK_THROWS_AS(
        entropy_sum_form_check(st, SubsetCollection::all_pairs(3), mu), Error);
  }
}

TEST_CASE("gamma distribution") {
  const int N = 40;
  SUBCASE("identical entropies give uniform weights") {
    std::vector<DensityMatrix> st(2, thermal_state(1.0, N));
    auto g = gamma_distribution(st, SubsetCollection::singletons(2));
    CHECK(g.mu[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(g.mu[1] == doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("thermal(1) vs thermal(2) weights are 4 : 27/4") {
    std::vector<DensityMatrix> st = {thermal_state(1.0, N),
                                     truncate(thermal_state(2.0, 80), N)};
    auto g = gamma_distribution(st, SubsetCollection::singletons(2));
    CHECK(g.mu[0] == doctest::Approx(4.0 / 10.75).epsilon(1e-6));
    CHECK(g.mu[1] == doctest::Approx(6.75 / 10.75).epsilon(1e-6));
  }
}

TEST_CASE("gaussian register construction") {
  SUBCASE("uniform singleton weights at n = 2") {
    auto C = SubsetCollection::singletons(2);
    WeightDistribution mu;
    mu.mu = {0.5, 0.5};
    auto g = gaussian_register_construction(C, mu);
    REQUIRE(g.feasible);
    // Covariance identities the construction must satisfy.
    double total = 0.0;
    for (double h : g.h) {
      CHECK(h > 0.0);
      total += h;
    }
    CHECK(total == doctest::Approx(double(g.n_aux)).epsilon(1e-9));
    for (size_t i = 0; i < g.w_subsets.size(); ++i) {
      double sum = 0.0;
      for (int l : g.w_subsets[i]) sum += g.h[l - 1];
      CHECK(sum / total == doctest::Approx(C.r() * mu.mu[i]).epsilon(1e-9));
      CHECK(static_cast<long long>(g.w_subsets[i].size()) * C.n ==
            static_cast<long long>(C.elements[i].first.size()) * g.n_aux);
    }
  }
  SUBCASE("nonuniform weights at n = 2") {
    auto C = SubsetCollection::singletons(2);
    WeightDistribution mu;
    mu.mu = {0.75, 0.25};
    auto g = gaussian_register_construction(C, mu);
    REQUIRE(g.feasible);
    double total = 0.0;
    for (double h : g.h) total += h;
    for (size_t i = 0; i < g.w_subsets.size(); ++i) {
      double sum = 0.0;
      for (int l : g.w_subsets[i]) sum += g.h[l - 1];
      CHECK(sum / total == doctest::Approx(mu.mu[i]).epsilon(1e-9));
    }
  }
  SUBCASE("weight bound rejected") {
    auto C = SubsetCollection::all_pairs(3);
    WeightDistribution mu;
    mu.mu = {0.8, 0.1, 0.1};
    CHECK_THROWS_AS(gaussian_register_construction(C, mu), Error);
  }
}

TEST_CASE("Fisher-Stam margins across mixed full-support families") {
  const int N = 36;
  std::vector<DensityMatrix> st = {
      thermal_state(1.0, N),
      mix(fock_mixture_state({0.4, 0.6}, N), thermal_state(0.8, N), 0.85),
      mix(fock_mixture_state({0.2, 0.5, 0.3}, N), thermal_state(0.5, N), 0.8)};
  for (auto C : {SubsetCollection::singletons(3), SubsetCollection::all_pairs(3)}) {
    auto m = fisher_stam_check(st, C, std::nullopt);
    CHECK(m.pass);
  }
}
