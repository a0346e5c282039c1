#include "qepi/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>

namespace qepi {

int SubsetCollection::r() const {
  std::map<int, int> quantum, classical;
  for (const auto& [v, w] : elements) {
    for (int k : v) ++quantum[k];
    for (int l : w) ++classical[l];
  }
  int r = 1;
  for (auto& [k, c] : quantum) r = std::max(r, c);
  for (auto& [l, c] : classical) r = std::max(r, c);
  return r;
}

void SubsetCollection::validate() const {
  if (elements.empty())
    throw Error(ErrorCode::EmptySubset, "SubsetCollection: no elements");
  for (const auto& [v, w] : elements) {
    if (v.empty())
      throw Error(ErrorCode::EmptySubset, "SubsetCollection: empty v");
    for (int k : v)
      if (k < 1 || k > n)
        throw Error(ErrorCode::InvalidParameter, "SubsetCollection: v index");
    for (int l : w)
      if (l < 1 || l > nprime)
        throw Error(ErrorCode::InvalidParameter, "SubsetCollection: w index");
    // |w|/|v| = n'/n as an exact rational identity.
    if (static_cast<long long>(w.size()) * n !=
        static_cast<long long>(v.size()) * nprime)
      throw Error(ErrorCode::InvalidParameter,
                  "SubsetCollection: |w|/|v| != n'/n");
  }
}

SubsetCollection SubsetCollection::singletons(int n) {
  SubsetCollection c;
  c.n = n;
  for (int k = 1; k <= n; ++k) c.elements.push_back({{k}, {}});
  return c;
}

SubsetCollection SubsetCollection::all_pairs(int n) { return size_k(n, 2); }

SubsetCollection SubsetCollection::size_k(int n, int k) {
  SubsetCollection c;
  c.n = n;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 1);
  while (true) {
    c.elements.push_back({idx, {}});
    int i = k - 1;
    while (i >= 0 && idx[i] == n - (k - 1 - i)) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return c;
}

SubsetCollection SubsetCollection::full_set(int n) {
  SubsetCollection c;
  c.n = n;
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 1);
  c.elements.push_back({all, {}});
  return c;
}

SubsetCollection SubsetCollection::paired(
    int n, int nprime,
    std::vector<std::pair<std::vector<int>, std::vector<int>>> els) {
  SubsetCollection c;
  c.n = n;
  c.nprime = nprime;
  c.elements = std::move(els);
  c.validate();
  return c;
}

void WeightDistribution::validate(size_t expected_size) const {
  if (mu.size() != expected_size)
    throw Error(ErrorCode::InvalidParameter,
                "WeightDistribution: size does not match collection");
  double s = 0.0;
  for (double m : mu) {
    if (m < 0)
      throw Error(ErrorCode::InvalidParameter, "WeightDistribution: negative");
    s += m;
  }
  if (std::abs(s - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidParameter,
                "WeightDistribution: does not sum to 1");
}

InequalityMargin make_margin(std::string name, double lhs, double rhs,
                             double margin, double tolerance,
                             double trace_deficit, double quad_error) {
  InequalityMargin m;
  m.name = std::move(name);
  m.lhs = lhs;
  m.rhs = rhs;
  m.margin = margin;
  m.tolerance = tolerance;
  m.pass = margin >= -tolerance;
  m.trace_deficit = trace_deficit;
  m.quad_error = quad_error;
  return m;
}

std::vector<InequalityMargin> epi_basic(const DensityMatrix& rho,
                                        const DensityMatrix& sigma, double eta,
                                        double tolerance) {
  check_eta(eta);
  DensityMatrix conv = qconv(rho, sigma, eta);
  const double s_conv = entropy(conv);
  const double s_rho = entropy(rho), s_sigma = entropy(sigma);
  const double deficit = conv.trace_deficit;
  std::vector<InequalityMargin> out;
  double rhs_lin = eta * s_rho + (1.0 - eta) * s_sigma;
  out.push_back(make_margin("epi_entropy", s_conv, rhs_lin, s_conv - rhs_lin,
                            tolerance, deficit));
  double lhs_exp = std::exp(s_conv);
  double rhs_exp = eta * std::exp(s_rho) + (1.0 - eta) * std::exp(s_sigma);
  out.push_back(make_margin("epi_exp", lhs_exp, rhs_exp, lhs_exp - rhs_exp,
                            tolerance, deficit));
  return out;
}

std::vector<InequalityMargin> guha_monotonicity(const DensityMatrix& rho,
                                                int n_max, double tolerance) {
  if (n_max < 2)
    throw Error(ErrorCode::InvalidParameter, "guha_monotonicity: n_max < 2");
  std::vector<InequalityMargin> out;
  DensityMatrix cur = rho;
  double prev = entropy(rho);
  for (int k = 2; k <= n_max; ++k) {
    cur = qconv(cur, rho, 1.0 - 1.0 / double(k));
    if (cur.trace_deficit > 1e-6)
      throw Error(ErrorCode::CutoffTooSmall,
                  "guha_monotonicity: convolution lost too much trace");
    double s = entropy(cur);
    out.push_back(make_margin("guha_n" + std::to_string(k), s, prev, s - prev,
                              tolerance, cur.trace_deficit));
    prev = s;
  }
  return out;
}

SymmetricConvolutionTable::SymmetricConvolutionTable(
    std::vector<DensityMatrix> states)
    : states_(std::move(states)) {
  if (states_.empty())
    throw Error(ErrorCode::EmptySubset, "SymmetricConvolutionTable: no states");
  for (const auto& s : states_)
    if (s.cutoff != states_[0].cutoff)
      throw Error(ErrorCode::DimensionMismatch,
                  "SymmetricConvolutionTable: cutoffs differ");
}

const DensityMatrix& SymmetricConvolutionTable::get(std::vector<int> subset) {
  if (subset.empty())
    throw Error(ErrorCode::EmptySubset, "SymmetricConvolutionTable: empty v");
  std::sort(subset.begin(), subset.end());
  for (const auto& [key, val] : cache_)
    if (key == subset) return val;
  std::vector<DensityMatrix> sel;
  for (int k : subset) sel.push_back(states_.at(k - 1));
  cache_.emplace_back(subset, symmetric_qconv(sel));
  return cache_.back().second;
}

namespace {

std::vector<int> full_indices(int n) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 1);
  return all;
}

double max_deficit(const SymmetricConvolutionTable&, const DensityMatrix& s) {
  return s.trace_deficit;
}

}  // namespace

InequalityMargin subset_epi_check(std::vector<DensityMatrix> states,
                                const SubsetCollection& C, double tolerance) {
  C.validate();
  if (C.nprime != 0)
    throw Error(ErrorCode::InvalidParameter, "subset_epi_check: nprime must be 0");
  SymmetricConvolutionTable table(std::move(states));
  const int n = C.n;
  const int r = C.r();
  const DensityMatrix& full = table.get(full_indices(n));
  double lhs = std::exp(entropy(full));
  double rhs = 0.0;
  double deficit = max_deficit(table, full);
  for (const auto& [v, w] : C.elements) {
    const DensityMatrix& sv = table.get(v);
    rhs += double(v.size()) * std::exp(entropy(sv));
    deficit = std::max(deficit, sv.trace_deficit);
  }
  rhs /= double(r) * double(n);
  return make_margin("subset_epi", lhs, rhs, lhs - rhs, tolerance, deficit);
}

InequalityMargin fisher_stam_check(std::vector<DensityMatrix> states,
                                const SubsetCollection& C,
                                std::optional<WeightDistribution> mu,
                                double tolerance) {
  C.validate();
  if (C.nprime != 0)
    throw Error(ErrorCode::InvalidParameter, "fisher_stam_check: nprime must be 0");
  SymmetricConvolutionTable table(std::move(states));
  const int n = C.n;
  const int r = C.r();
  const size_t ne = C.elements.size();

  std::vector<double> fisher_v(ne);
  double deficit = 0.0;
  for (size_t i = 0; i < ne; ++i) {
    const DensityMatrix& sv = table.get(C.elements[i].first);
    FisherValue f = fisher(sv, kmb_spec());
    if (f.divergent)
      throw Error(ErrorCode::SupportDeficient,
                  "fisher_stam_check: divergent Fisher information (pure-state component)");
    fisher_v[i] = f.value;
    deficit = std::max(deficit, sv.trace_deficit);
  }
  if (mu) {
    mu->validate(ne);
  } else {
    // Minimizer of rn sum mu_v^2 I_v / |v| over the simplex:
    // mu_v ~ |v| / I_v (Lagrange closed form).
    WeightDistribution opt;
    opt.mu.resize(ne);
    double s = 0.0;
    int zero_at = -1;
    for (size_t i = 0; i < ne; ++i)
      if (fisher_v[i] <= 1e-300) zero_at = static_cast<int>(i);
    if (zero_at >= 0) {
      // Degenerate vertex of the simplex.
      std::fill(opt.mu.begin(), opt.mu.end(), 0.0);
      opt.mu[zero_at] = 1.0;
    } else {
      for (size_t i = 0; i < ne; ++i) {
        opt.mu[i] = double(C.elements[i].first.size()) / fisher_v[i];
        s += opt.mu[i];
      }
      for (double& m : opt.mu) m /= s;
    }
    mu = std::move(opt);
  }

  const DensityMatrix& full = table.get(full_indices(n));
  FisherValue f_full = fisher(full, kmb_spec());
  if (f_full.divergent)
    throw Error(ErrorCode::SupportDeficient,
                "fisher_stam_check: divergent Fisher information of the full convolution");
  deficit = std::max(deficit, full.trace_deficit);

  double rhs = 0.0;
  for (size_t i = 0; i < ne; ++i)
    rhs += mu->mu[i] * mu->mu[i] / double(C.elements[i].first.size()) *
           fisher_v[i];
  rhs *= double(r) * double(n);
  double lhs = f_full.value;
  // Oriented so that >= 0 means the bound holds (lhs <= rhs).
  return make_margin("fisher_stam", lhs, rhs, rhs - lhs, tolerance, deficit);
}

namespace {

struct QcStateTable {
  SymmetricConvolutionTable* quantum;
  const std::vector<ClassicalRV>* rvs;
  const QuadratureBudget* budget;
  double t = 1.0;

  DensityMatrix get(const std::vector<int>& v, const std::vector<int>& w) {
    const DensityMatrix& base = quantum->get(v);
    if (w.empty()) return base;
    std::vector<ClassicalRV> sel;
    for (int l : w) sel.push_back(rvs->at(l - 1));
    ClassicalRV conv = symmetric_cconv(sel);
    return qcconv(base, conv, t, *budget);
  }
};

}  // namespace

InequalityMargin qc_subset_epi_check(std::vector<DensityMatrix> states,
                                std::vector<ClassicalRV> rvs,
                                const SubsetCollection& C, double tolerance,
                                const QuadratureBudget& budget, double t) {
  C.validate();
  if (C.nprime != static_cast<int>(rvs.size()))
    throw Error(ErrorCode::InvalidParameter,
                "qc_subset_epi_check: nprime does not match the classical registers");
  if (t < 0)
    throw Error(ErrorCode::InvalidParameter, "qc_subset_epi_check: t < 0");
  SymmetricConvolutionTable table(std::move(states));
  QcStateTable qc{&table, &rvs, &budget, t};
  const int n = C.n;
  const int r = C.r();

  DensityMatrix full = qc.get(full_indices(n), full_indices(C.nprime));
  double lhs = std::exp(entropy(full));
  double deficit = full.trace_deficit;
  double rhs = 0.0;
  for (const auto& [v, w] : C.elements) {
    DensityMatrix sv = qc.get(v, w);
    rhs += double(v.size()) * std::exp(entropy(sv));
    deficit = std::max(deficit, sv.trace_deficit);
  }
  rhs /= double(r) * double(n);
  return make_margin("qc_subset_epi", lhs, rhs, lhs - rhs, tolerance, deficit);
}

InequalityMargin qc_fisher_stam_check(std::vector<DensityMatrix> states,
                                std::vector<ClassicalRV> rvs,
                                const SubsetCollection& C,
                                std::optional<WeightDistribution> mu,
                                double tolerance,
                                const QuadratureBudget& budget, double t) {
  C.validate();
  if (C.nprime != static_cast<int>(rvs.size()))
    throw Error(ErrorCode::InvalidParameter,
                "qc_fisher_stam_check: nprime does not match the classical registers");
  if (t < 0)
    throw Error(ErrorCode::InvalidParameter, "qc_fisher_stam_check: t < 0");
  SymmetricConvolutionTable table(std::move(states));
  QcStateTable qc{&table, &rvs, &budget, t};
  const int n = C.n;
  const int r = C.r();
  const size_t ne = C.elements.size();

  std::vector<double> fisher_v(ne);
  double deficit = 0.0;
  for (size_t i = 0; i < ne; ++i) {
    DensityMatrix sv = qc.get(C.elements[i].first, C.elements[i].second);
    FisherValue f = fisher(sv, kmb_spec());
    if (f.divergent)
      throw Error(ErrorCode::SupportDeficient,
                  "qc_fisher_stam_check: divergent Fisher information");
    fisher_v[i] = f.value;
    deficit = std::max(deficit, sv.trace_deficit);
  }
  if (mu) {
    mu->validate(ne);
  } else {
    WeightDistribution opt;
    opt.mu.resize(ne);
    double s = 0.0;
    for (size_t i = 0; i < ne; ++i) {
      opt.mu[i] = double(C.elements[i].first.size()) / fisher_v[i];
      s += opt.mu[i];
    }
    for (double& m : opt.mu) m /= s;
    mu = std::move(opt);
  }

  DensityMatrix full = qc.get(full_indices(n), full_indices(C.nprime));
  FisherValue f_full = fisher(full, kmb_spec());
  deficit = std::max(deficit, full.trace_deficit);
  double rhs = 0.0;
  for (size_t i = 0; i < ne; ++i)
    rhs += mu->mu[i] * mu->mu[i] / double(C.elements[i].first.size()) *
           fisher_v[i];
  rhs *= double(r) * double(n);
  return make_margin("qc_fisher_stam", f_full.value, rhs, rhs - f_full.value,
                     tolerance, deficit);
}

InequalityMargin entropy_sum_form_check(std::vector<DensityMatrix> states,
                                        const SubsetCollection& C,
                                        const WeightDistribution& mu,
                                        double tolerance) {
  C.validate();
  mu.validate(C.elements.size());
  SymmetricConvolutionTable table(std::move(states));
  const int n = C.n;
  const int r = C.r();
  for (double m : mu.mu)
    if (r * m > 1.0 + 1e-12)
      throw Error(ErrorCode::InvalidParameter,
                  "entropy_sum_form_check: requires r mu_v <= 1");
  const DensityMatrix& full = table.get(full_indices(n));
  double lhs = entropy(full);
  double rhs = 0.0;
  double deficit = full.trace_deficit;
  for (size_t i = 0; i < C.elements.size(); ++i) {
    const double m = mu.mu[i];
    if (m == 0.0) continue;
    const auto& v = C.elements[i].first;
    const DensityMatrix& sv = table.get(v);
    deficit = std::max(deficit, sv.trace_deficit);
    rhs += m * entropy(sv) +
           m * std::log(double(v.size()) / (double(r) * m * double(n)));
  }
  return make_margin("entropy_sum_form", lhs, rhs, lhs - rhs, tolerance,
                     deficit);
}

WeightDistribution gamma_distribution(std::vector<DensityMatrix> states,
                                      const SubsetCollection& C) {
  C.validate();
  SymmetricConvolutionTable table(std::move(states));
  WeightDistribution g;
  g.mu.resize(C.elements.size());
  double s = 0.0;
  for (size_t i = 0; i < C.elements.size(); ++i) {
    const auto& v = C.elements[i].first;
    g.mu[i] = double(v.size()) * std::exp(entropy(table.get(v)));
    s += g.mu[i];
  }
  for (double& m : g.mu) m /= s;
  return g;
}

GaussianRegisterConstruction gaussian_register_construction(
    const SubsetCollection& C, const WeightDistribution& mu, int n_aux_max) {
  C.validate();
  mu.validate(C.elements.size());
  const int n = C.n;
  const int r = C.r();
  for (double m : mu.mu)
    if (r * m > 1.0 + 1e-12)
      throw Error(ErrorCode::InvalidParameter,
                  "gaussian_register_construction: requires r mu_v <= 1");

  GaussianRegisterConstruction out;
  for (int n_aux = 1; n_aux <= n_aux_max; ++n_aux) {
    // |w_v| = n_aux |v| / n must be a positive integer for every element.
    bool sizes_ok = true;
    std::vector<int> wsize(C.elements.size());
    for (size_t i = 0; i < C.elements.size(); ++i) {
      long long num = static_cast<long long>(n_aux) * C.elements[i].first.size();
      if (num % n != 0 || num / n == 0) {
        sizes_ok = false;
        break;
      }
      wsize[i] = static_cast<int>(num / n);
    }
    if (!sizes_ok) continue;

    // Greedy assignment: give each element the least-used registers.
    std::vector<int> usage(n_aux, 0);
    std::vector<std::vector<int>> subsets;
    bool assign_ok = true;
    for (size_t i = 0; i < C.elements.size() && assign_ok; ++i) {
      std::vector<int> order(n_aux);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return usage[a] < usage[b]; });
      std::vector<int> w;
      for (int j = 0; j < wsize[i]; ++j) {
        int reg = order[j];
        if (usage[reg] >= r) {
          assign_ok = false;
          break;
        }
        ++usage[reg];
        w.push_back(reg + 1);
      }
      std::sort(w.begin(), w.end());
      subsets.push_back(std::move(w));
    }
    if (!assign_ok) continue;

    // Least squares for h subject to sum_{l in w_v} h_l = r mu_v n_aux and
    // sum_l h_l = n_aux (mean 1 normalization).
    const int rows = static_cast<int>(C.elements.size()) + 1;
    RealMat A = RealMat::Zero(rows, n_aux);
    RealVec b(rows);
    for (size_t i = 0; i < subsets.size(); ++i) {
      for (int l : subsets[i]) A(static_cast<int>(i), l - 1) = 1.0;
      b[static_cast<int>(i)] = r * mu.mu[i] * n_aux;
    }
    A.row(rows - 1).setOnes();
    b[rows - 1] = n_aux;
    RealVec h = A.colPivHouseholderQr().solve(b);
    if ((A * h - b).cwiseAbs().maxCoeff() > 1e-9) continue;
    if (h.minCoeff() <= 1e-9) continue;

    out.feasible = true;
    out.n_aux = n_aux;
    out.w_subsets = std::move(subsets);
    out.h.assign(h.data(), h.data() + n_aux);
    return out;
  }
  return out;
}

}  // namespace qepi
