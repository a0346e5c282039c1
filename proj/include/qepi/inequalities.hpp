#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qepi/information.hpp"

namespace qepi {

// A collection of (v, w) pairs, v a nonempty subset of [n] (1-based),
// w a subset of [n'] with |w| n = |v| n' (as integers).
struct SubsetCollection {
  int n = 0;
  int nprime = 0;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> elements;

  int r() const;  // max index multiplicity across elements, quantum + classical
  void validate() const;

  static SubsetCollection singletons(int n);
  static SubsetCollection all_pairs(int n);
  static SubsetCollection size_k(int n, int k);
  static SubsetCollection full_set(int n);
  // Pairs (v, w) with matched ratio; builder for the quantum-classical case.
  static SubsetCollection paired(int n, int nprime,
                                 std::vector<std::pair<std::vector<int>,
                                                       std::vector<int>>> els);
};

struct WeightDistribution {
  std::vector<double> mu;
  void validate(size_t expected_size) const;
};

struct InequalityMargin {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // oriented so margin >= 0 means the statement holds
  double tolerance = 0.0;
  bool pass = false;
  double trace_deficit = 0.0;
  double quad_error = 0.0;
};

InequalityMargin make_margin(std::string name, double lhs, double rhs,
                             double margin, double tolerance,
                             double trace_deficit = 0.0,
                             double quad_error = 0.0);

inline constexpr double kEntropyTol = 1e-6;
inline constexpr double kFisherTol = 1e-5;

// S(rho boxplus_eta sigma) >= eta S(rho) + (1-eta) S(sigma), and the
// exponential form. Two margins.
std::vector<InequalityMargin> epi_basic(const DensityMatrix& rho,
                                        const DensityMatrix& sigma, double eta,
                                        double tolerance = kEntropyTol);

// Consecutive differences S(rho^{boxplus (k+1)}) - S(rho^{boxplus k}),
// k = 1..n_max-1.
std::vector<InequalityMargin> guha_monotonicity(const DensityMatrix& rho,
                                                int n_max,
                                                double tolerance = kEntropyTol);

// Symmetric convolutions of a sub-multiset of states, with memoization keyed
// by the sorted index list.
class SymmetricConvolutionTable {
 public:
  explicit SymmetricConvolutionTable(std::vector<DensityMatrix> states);
  const DensityMatrix& get(std::vector<int> subset);  // 1-based indices
  const std::vector<DensityMatrix>& states() const { return states_; }

 private:
  std::vector<DensityMatrix> states_;
  std::vector<std::pair<std::vector<int>, DensityMatrix>> cache_;
};

InequalityMargin subset_epi_check(std::vector<DensityMatrix> states,
                                const SubsetCollection& C,
                                double tolerance = kEntropyTol);

// mu empty => the closed-form optimal mu_v ~ |v| / I_KMB(rho^{boxplus v}).
InequalityMargin fisher_stam_check(std::vector<DensityMatrix> states,
                                const SubsetCollection& C,
                                std::optional<WeightDistribution> mu,
                                double tolerance = kFisherTol);

InequalityMargin qc_subset_epi_check(std::vector<DensityMatrix> states,
                                std::vector<ClassicalRV> rvs,
                                const SubsetCollection& C,
                                double tolerance = kEntropyTol,
                                const QuadratureBudget& budget = {},
                                double t = 1.0);

InequalityMargin qc_fisher_stam_check(std::vector<DensityMatrix> states,
                                std::vector<ClassicalRV> rvs,
                                const SubsetCollection& C,
                                std::optional<WeightDistribution> mu,
                                double tolerance = kFisherTol,
                                const QuadratureBudget& budget = {},
                                double t = 1.0);

// S(rho^{boxplus [n]}) >= sum mu_v S(rho^{boxplus v}) + m sum mu_v ln(|v|/(r mu_v n)),
// requires r mu_v <= 1.
InequalityMargin entropy_sum_form_check(std::vector<DensityMatrix> states,
                                        const SubsetCollection& C,
                                        const WeightDistribution& mu,
                                        double tolerance = kEntropyTol);

// gamma_v ~ |v| exp(S(rho^{boxplus v})/m), normalized.
WeightDistribution gamma_distribution(std::vector<DensityMatrix> states,
                                      const SubsetCollection& C);

// Feasibility solver for the auxiliary Gaussian register construction: find
// n'' <= n_max_aux, subsets w_v of [n''] with |w_v|/n'' = |v|/n and index
// multiplicity <= r, and positive h_l with
// sum_{l in w_v} h_l / sum_l h_l = r mu_v. Test-configuration generator.
struct GaussianRegisterConstruction {
  bool feasible = false;
  int n_aux = 0;
  std::vector<std::vector<int>> w_subsets;  // per collection element, 1-based
  std::vector<double> h;                    // per auxiliary register
};

GaussianRegisterConstruction gaussian_register_construction(
    const SubsetCollection& C, const WeightDistribution& mu,
    int n_aux_max = 24);

}  // namespace qepi
