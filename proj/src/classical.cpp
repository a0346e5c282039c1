#include "qepi/classical.hpp"

#include <cmath>

namespace qepi {

namespace {

void check_probs(const std::vector<double>& p, const char* who) {
  double s = 0;
  for (double v : p) {
    if (v < 0)
      throw Error(ErrorCode::InvalidParameter,
                  std::string(who) + ": negative probability");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidParameter,
                std::string(who) + ": probabilities do not sum to 1");
}

}  // namespace

ClassicalRV gaussian_rv(double h, Complex mean) {
  if (h < 0) throw Error(ErrorCode::InvalidParameter, "gaussian_rv: h < 0");
  ClassicalRV x;
  x.kind = ClassicalRV::Kind::gaussian;
  x.h = h;
  x.mean = mean;
  return x;
}

ClassicalRV point_mass_rv(Complex x0) {
  return finite_rv({x0}, {1.0});
}

ClassicalRV finite_rv(std::vector<Complex> points, std::vector<double> probs) {
  if (points.empty() || points.size() != probs.size())
    throw Error(ErrorCode::InvalidParameter, "finite_rv: bad support");
  check_probs(probs, "finite_rv");
  ClassicalRV x;
  x.kind = ClassicalRV::Kind::finite;
  x.points = std::move(points);
  x.probs = std::move(probs);
  return x;
}

ClassicalRV two_point_rv(Complex x) { return finite_rv({x, -x}, {0.5, 0.5}); }

Complex classical_char(const ClassicalRV& X, Complex z) {
  if (X.kind == ClassicalRV::Kind::gaussian) {
    Complex phase = z * std::conj(X.mean) - std::conj(z) * X.mean;
    return std::exp(phase - X.h * std::norm(z));
  }
  Complex acc = 0.0;
  for (size_t i = 0; i < X.points.size(); ++i)
    acc += X.probs[i] *
           std::exp(z * std::conj(X.points[i]) - std::conj(z) * X.points[i]);
  return acc;
}

ClassicalRV cconv(const ClassicalRV& X, const ClassicalRV& Y, double lambda) {
  if (lambda < 0 || lambda > 1)
    throw Error(ErrorCode::InvalidParameter, "cconv: lambda outside [0,1]");
  const double sl = std::sqrt(lambda), sc = std::sqrt(1.0 - lambda);
  using K = ClassicalRV::Kind;
  if (X.kind == K::gaussian && Y.kind == K::gaussian) {
    return gaussian_rv(lambda * X.h + (1.0 - lambda) * Y.h,
                       sl * X.mean + sc * Y.mean);
  }
  if (X.kind == K::finite && Y.kind == K::finite) {
    std::vector<Complex> pts;
    std::vector<double> pr;
    pts.reserve(X.points.size() * Y.points.size());
    for (size_t i = 0; i < X.points.size(); ++i)
      for (size_t j = 0; j < Y.points.size(); ++j) {
        pts.push_back(sl * X.points[i] + sc * Y.points[j]);
        pr.push_back(X.probs[i] * Y.probs[j]);
      }
    return finite_rv(std::move(pts), std::move(pr));
  }
  // Gaussian + point mass: the point shifts the mean.
  const ClassicalRV& g = (X.kind == K::gaussian) ? X : Y;
  const ClassicalRV& f = (X.kind == K::gaussian) ? Y : X;
  if (f.points.size() == 1) {
    double sg = (X.kind == K::gaussian) ? sl : sc;
    double sf = (X.kind == K::gaussian) ? sc : sl;
    return gaussian_rv(sg * sg * g.h, sg * g.mean + sf * f.points[0]);
  }
  throw Error(ErrorCode::UnsupportedMix,
              "cconv: Gaussian + general finite support is not supported");
}

ClassicalRV symmetric_cconv(const std::vector<ClassicalRV>& xs) {
  if (xs.empty())
    throw Error(ErrorCode::EmptySubset, "symmetric_cconv: empty input");
  ClassicalRV cur = xs[0];
  for (size_t k = 1; k < xs.size(); ++k)
    cur = cconv(cur, xs[k], 1.0 - 1.0 / double(k + 1));
  return cur;
}

ClassicalRV scale_rv(const ClassicalRV& X, double c) {
  if (c < 0) throw Error(ErrorCode::InvalidParameter, "scale_rv: c < 0");
  ClassicalRV out = X;
  if (X.kind == ClassicalRV::Kind::gaussian) {
    out.h = c * c * X.h;
    out.mean = c * X.mean;
  } else {
    for (auto& p : out.points) p *= c;
  }
  return out;
}

}  // namespace qepi
