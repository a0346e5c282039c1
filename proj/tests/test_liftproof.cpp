#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "oracles.hpp"
#include "qepi/liftproof.hpp"

using namespace qepi;

namespace {

DensityMatrix small_thermal(double nbar, int cutoff) {
  return truncate(thermal_state(nbar, 40), cutoff);
}

DensityMatrix small_thermal_unit(double nbar, int cutoff) {
  return normalized(truncate(thermal_state(nbar, 40), cutoff));
}

Mat random_low_support(int support, int cutoff, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Mat m = Mat::Zero(cutoff + 1, cutoff + 1);
  for (int i = 0; i <= support; ++i)
    for (int j = 0; j <= support; ++j) m(i, j) = Complex(g(rng), g(rng));
  m /= m.cwiseAbs().maxCoeff();
  return m;
}

}  // namespace

TEST_CASE("exact displacement entries match the truncated exponential where trustworthy") {
  const int N = 28;
  for (Complex z : {Complex(0.4, 0.2), Complex(-0.9, 0.7), Complex(1.3, -0.5)}) {
    Mat exact = displacement_entries(N, z);
    Mat viaExp = displacement(z, N).entries;
    CHECK((exact - viaExp).topLeftCorner(8, 8).cwiseAbs().maxCoeff() < 1e-9);
    // Independent oracle recurrence.
    for (int m = 0; m <= 5; ++m)
      for (int n = 0; n <= 5; ++n)
        CHECK(std::abs(exact(m, n) - oracles::displacement_entry_exact(m, n, z)) < 1e-13);
  }
}

TEST_CASE("char_exact tracks the analytic thermal characteristic function") {
  const int N = 12;
  auto th = small_thermal(1.0, N);
  // Inside the truncation-faithful region the truncated state's chi is close
  // to the infinite-dimensional closed form; far out it still decays.
  CHECK(std::abs(char_exact(th.entries, Complex(1.0, 0)) -
                 oracles::chi_thermal(1.0, Complex(1.0, 0))) < 5e-4);
  CHECK(std::abs(char_exact(th.entries, Complex(0, 2.0))) < 1e-2);
  // Far out the truncated state's chi is tail-dominated but still decays.
  CHECK(std::abs(char_exact(th.entries, Complex(5.0, 0))) < 1e-4);
  CHECK(std::abs(char_exact(th.entries, Complex(12.0, 0))) < 1e-12);
}

TEST_CASE("lift radius selection") {
  const int N = 12;
  auto th = small_thermal(1.0, N);
  auto rc = choose_lift_radius(th.entries);
  CHECK(rc.radius > 3.0);
  CHECK(rc.radius < 13.0);
  CHECK(rc.boundary_value < 1e-12);

  // An identity-proportional input decays far too slowly for a bounded
  // radius budget and is rejected.
  Mat I = Mat::Identity(N + 1, N + 1);
  LiftBudget tight;
  tight.r_max = 6.0;
  CHECK_THROWS_AS(choose_lift_radius(I, tight), Error);
}

TEST_CASE("lift of a single-register state is rho (x) I") {
  const int N = 12;
  auto th = small_thermal(1.0, N);
  auto L = lift(th.entries, {1});
  Mat expect = Eigen::kroneckerProduct(th.entries, Mat::Identity(N + 1, N + 1)).eval();
  CHECK((L.entries - expect).cwiseAbs().maxCoeff() < 1e-4);
  auto L2 = lift(th.entries, {2});
  Mat expect2 = Eigen::kroneckerProduct(Mat::Identity(N + 1, N + 1), th.entries).eval();
  CHECK((L2.entries - expect2).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("lift is linear in its operator argument") {
  const int N = 8;
  Mat A = random_low_support(3, N, 41);
  Mat B = random_low_support(3, N, 42);
  auto LA = lift(A, {1, 2});
  auto LB = lift(B, {1, 2});
  auto LAB = lift((0.6 * A + 0.4 * B).eval(), {1, 2});
  CHECK((LAB.entries - 0.6 * LA.entries - 0.4 * LB.entries).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("two-register lift against a brute-force grid oracle") {
  // Independent oracle: plain Riemann sum on a uniform grid with the exact
  // kernel, cutoff 8 to keep it fast.
  const int N = 8;
  auto th = small_thermal(1.0, N);
  auto L = lift(th.entries, {1, 2});

  const double R = L.radius;
  const int steps = 180;
  const double hstep = 2 * R / steps;
  const int d = N + 1, d2 = d * d;
  Mat oracle = Mat::Zero(d2, d2);
  for (int i = 0; i < steps; ++i)
    for (int j = 0; j < steps; ++j) {
      Complex z(-R + (i + 0.5) * hstep, -R + (j + 0.5) * hstep);
      Complex chi = oracles::char_with_exact_kernel(th.entries, z);
      if (std::abs(chi) < 1e-17) continue;
      Mat D(d, d);
      for (int mm = 0; mm < d; ++mm)
        for (int nn = 0; nn < d; ++nn)
          D(mm, nn) = oracles::displacement_entry_exact(mm, nn, -z / std::sqrt(2.0));
      oracle += (hstep * hstep / M_PI) * chi *
                Eigen::kroneckerProduct(D, D).eval();
    }
  CHECK((L.entries - oracle).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("classical lift factor obeys the product structure") {
  std::vector<Complex> xs = {Complex(0.3, -0.2), Complex(-0.1, 0.5)};
  Complex z(0.4, 0.7);
  // Empty w: unit factor.
  CHECK(classical_lift_factor(xs, {}, z) == Complex(1.0, 0.0));
  // Singleton w: the symplectic displacement phase itself.
  Complex f1 = classical_lift_factor(xs, {1}, z);
  Complex expect1 = std::exp(z * std::conj(xs[0]) - std::conj(z) * xs[0]);
  CHECK(std::abs(f1 - expect1) < 1e-14);
  CHECK(std::abs(std::abs(f1) - 1.0) < 1e-14);
  // Two registers: product with the 1/sqrt(2) scale.
  Complex f12 = classical_lift_factor(xs, {1, 2}, z);
  Complex w = z / std::sqrt(2.0);
  Complex expect12 = std::exp(w * std::conj(xs[0]) - std::conj(w) * xs[0]) *
                     std::exp(w * std::conj(xs[1]) - std::conj(w) * xs[1]);
  CHECK(std::abs(f12 - expect12) < 1e-14);
}

TEST_CASE("lift pairing identity: closed-form anchor") {
  // T = R = |0><0|, thermal(nbar) states, v = {1}: both sides equal
  // (1/(nbar+1)) / (1 + nbar/2) (Gaussian integrals).
  const int N = 12;
  auto th = small_thermal(1.0, N);
  Mat P0 = vacuum_state(N).entries;
  for (auto spec : {linear_spec(1, 0.0), linear_spec(2, 0.0), linear_spec(1, 0.5)}) {
    auto res = lift_pairing_check(P0, P0, th, th, {1}, spec);
    CHECK(std::abs(res.lhs - Complex(1.0 / 3.0, 0)) < 2e-4);
    CHECK(std::abs(res.rhs - Complex(1.0 / 3.0, 0)) < 2e-4);
    CHECK(res.residual_rel < 1e-3);
  }
}

TEST_CASE("lift pairing identity: two-path agreement across subsets") {
  const int N = 12;
  auto r1 = small_thermal(0.5, N);
  auto r2 = small_thermal(1.0, N);
  Mat T = random_low_support(4, N, 7);
  Mat R = random_low_support(4, N, 8);
  auto spec = linear_spec(1, 0.3);
  for (const std::vector<int>& v : {std::vector<int>{1}, std::vector<int>{2},
                                    std::vector<int>{1, 2}}) {
    auto res = lift_pairing_check(T, R, r1, r2, v, spec);
    CHECK(res.residual_rel < 1e-3);
  }
  // v = [2] degenerates to the single-mode inner-product identity.
  auto res = lift_pairing_check(T, R, r1, r2, {1, 2}, spec);
  DensityMatrix conv = qconv(r1, r2, 0.5);
  Complex direct = linear_inner(conv.entries, spec, T, R);
  CHECK(std::abs(res.rhs - direct) < 1e-12);
}

TEST_CASE("lift pairing identity on mixed-fock inputs") {
  const int N = 12;
  auto r1 = fock_mixture_state({0.5, 0.3, 0.2}, N);
  auto r2 = fock_mixture_state({0.4, 0.6}, N);
  Mat T = random_low_support(3, N, 17);
  Mat R = random_low_support(3, N, 18);
  for (auto spec : {linear_spec(1, 0.0), linear_spec(2, 0.6)}) {
    for (const std::vector<int>& v : {std::vector<int>{1}, std::vector<int>{1, 2}}) {
      auto res = lift_pairing_check(T, R, r1, r2, v, spec);
      CHECK(res.residual_rel < 1e-3);
    }
  }
}

TEST_CASE("score lifting identity: thermal closed-form anchor") {
  // rho1 = rho2 = thermal(1), v = {1}, R = a, spec (1,0): both sides are
  // -sqrt(1/2) tr(a^dag rho a)/(nbar+1) = -sqrt(1/2) in infinite dimension.
  const int N = 12;
  auto th = small_thermal(1.0, N);
  Mat a = annihilation_matrix(N);
  auto res = score_lift_check(th, th, a, {1}, linear_spec(1, 0.0));
  CHECK(res.residual_rel < 1e-3);
  CHECK(std::abs(res.rhs - Complex(-std::sqrt(0.5), 0)) < 5e-3);
  CHECK(std::abs(res.lhs - Complex(-std::sqrt(0.5), 0)) < 5e-3);
}

TEST_CASE("score lifting identity: v = [2] is pure self-consistency") {
  const int N = 10;
  auto r1 = small_thermal(0.5, N);
  auto r2 = fock_mixture_state({0.5, 0.35, 0.15}, N);
  auto res = score_lift_check(r1, r2, random_low_support(3, N, 5), {1, 2},
                          linear_spec(1, 0.4));
  CHECK(res.residual_rel < 1e-3);
}

TEST_CASE("score lifting identity: non-identical thermal inputs") {
  const int N = 12;
  auto r1 = small_thermal(1.0, N);
  auto r2 = small_thermal(0.5, N);
  Mat a = annihilation_matrix(N);
  auto res = score_lift_check(r1, r2, a, {2}, linear_spec(1, 0.0));
  CHECK(res.residual_rel < 1e-3);
}

TEST_CASE("score lifting scaling factor is sqrt(|v|/n)") {
  // The ratio lhs/<S_full, R> across v must follow sqrt(|v|/2), for several R.
  const int N = 10;
  auto th = small_thermal(0.5, N);
  auto spec = linear_spec(1, 0.0);
  DensityMatrix full = qconv(th, th, 0.5);
  ScoreOperator Sfull = score(full, 0, spec);
  for (std::uint64_t seed : {99, 100}) {
    Mat R = random_low_support(3, N, seed);
    Complex base = linear_inner(full.entries, spec, Sfull.entries, R);
    for (const std::vector<int>& v : {std::vector<int>{1}, std::vector<int>{1, 2}}) {
      auto res = score_lift_check(th, th, R, v, spec);
      double expect = std::sqrt(v.size() / 2.0);
      CHECK(std::abs(res.lhs - expect * base) < 1e-3 * std::abs(base));
    }
  }
}

TEST_CASE("multi-register helpers") {
  const int dim = 3;
  Mat A = random_low_support(2, 2, 1);
  Mat B = random_low_support(2, 2, 2);
  Mat C = random_low_support(2, 2, 3);
  Mat big = kron_all({A, B, C});
  // Partial trace over each slot picks out the right factor traces.
  Mat t0 = partial_trace_slot(big, 0, 3, dim);
  CHECK((t0 - A.trace() * kron_all({B, C})).cwiseAbs().maxCoeff() < 1e-12);
  Mat t1 = partial_trace_slot(big, 1, 3, dim);
  CHECK((t1 - B.trace() * kron_all({A, C})).cwiseAbs().maxCoeff() < 1e-12);
  Mat t2 = partial_trace_slot(big, 2, 3, dim);
  CHECK((t2 - C.trace() * kron_all({A, B})).cwiseAbs().maxCoeff() < 1e-12);
  // op_on_slot embeds in the right place.
  Mat on1 = op_on_slot(B, 1, 3, dim);
  Mat expect = kron_all({Mat::Identity(dim, dim), B, Mat::Identity(dim, dim)});
  CHECK((on1 - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("projector decomposition at n = 2") {
  const int N = 5;
  std::vector<DensityMatrix> states = {small_thermal_unit(0.4, N),
                                       fock_mixture_state({0.5, 0.3, 0.2}, N)};
  std::vector<Mat> ops;
  Mat a = annihilation_matrix(N);
  ops.push_back(op_on_slot(a, 0, 2, N + 1) + 0.5 * op_on_slot(a.adjoint(), 1, 2, N + 1));
  ops.push_back(kron_all({random_low_support(4, N, 31), random_low_support(4, N, 32)}));
  auto rep = projector_decomposition_check(states, ops, linear_spec(1, 0.25));
  CHECK(rep.identity_residual < 1e-10);
  CHECK(rep.orthogonality_residual < 1e-10);
  CHECK(rep.idempotent_residual < 1e-10);
  CHECK(rep.selfadjoint_residual < 1e-10);
  CHECK(rep.pythagoras_residual < 1e-9);
}

TEST_CASE("projector decomposition at n = 3") {
  const int N = 3;
  std::vector<DensityMatrix> states = {small_thermal_unit(0.3, N),
                                       fock_mixture_state({0.6, 0.4}, N),
                                       small_thermal_unit(0.5, N)};
  std::vector<Mat> ops;
  ops.push_back(kron_all({random_low_support(2, N, 51), random_low_support(2, N, 52),
                          random_low_support(2, N, 53)}));
  ops.push_back(op_on_slot(annihilation_matrix(N), 1, 3, N + 1));
  auto rep = projector_decomposition_check(states, ops, linear_spec(2, 0.5));
  CHECK(rep.identity_residual < 1e-10);
  CHECK(rep.orthogonality_residual < 1e-10);
  CHECK(rep.pythagoras_residual < 1e-9);
}

TEST_CASE("E_k on the identity and commutation") {
  const int N = 4;
  const int dim = N + 1;
  Mat rho1 = small_thermal_unit(0.4, N).entries;
  Mat rho2 = small_thermal_unit(0.8, N).entries;
  Mat I = Mat::Identity(dim * dim, dim * dim);
  // E_k I = I, so P_v I = 0 for v != {} and P_{} I = I.
  Mat e0 = project_Ek(I, rho1, 0, 2, dim);
  CHECK((e0 - I).cwiseAbs().maxCoeff() < 1e-12);
  std::vector<Mat> rhos = {rho1, rho2};
  Mat p_empty = project_Pv(I, rhos, {}, dim);
  CHECK((p_empty - I).cwiseAbs().maxCoeff() < 1e-12);
  Mat p_0 = project_Pv(I, rhos, {0}, dim);
  CHECK(p_0.cwiseAbs().maxCoeff() < 1e-12);
  // E_1 E_2 = E_2 E_1 on a random operator.
  Mat A = kron_all({random_low_support(3, N, 61), random_low_support(3, N, 62)});
  Mat e12 = project_Ek(project_Ek(A, rho2, 1, 2, dim), rho1, 0, 2, dim);
  Mat e21 = project_Ek(project_Ek(A, rho1, 0, 2, dim), rho2, 1, 2, dim);
  CHECK((e12 - e21).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("lift rejects bad inputs") {
  Mat good = small_thermal(0.5, 8).entries;
  CHECK_THROWS_AS(lift(good, {}), Error);
  CHECK_THROWS_AS(lift(good, {3}), Error);
  LiftBudget overload;
  overload.nodes = 4096;
  CHECK_THROWS_AS(lift(good, {1}, overload), Error);
}
