#include "hrtlab/gram.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "hrtlab/errors.hpp"
#include "hrtlab/stft.hpp"

namespace hrtlab {

HermitianGram gram_matrix(const Window& g, const Configuration& lambda,
                          const QuadratureSpec& q) {
  const auto& pts = lambda.points;
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  HermitianGram G;
  G.entries.resize(n, n);
  G.window_id = g.describe();
  G.points = pts;
  G.build_tol = q.abs_tol;
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = k; l < n; ++l) {
      const double da = pts[l].a - pts[k].a;
      const double db = pts[l].b - pts[k].b;
      const double phase = -kTwoPi * pts[k].a * db;
      const Complex v = Complex{std::cos(phase), std::sin(phase)} *
                        stft(g, g, da, db, q);
      G.entries(k, l) = v;
      G.entries(l, k) = std::conj(v);
    }
  }
  return G;
}

double min_eigenvalue(const HermitianGram& G) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G.entries,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

IndependenceVerdict independence_test(const Window& g,
                                      const Configuration& lambda, double tol,
                                      const QuadratureSpec& q) {
  if (!(tol > 0.0)) throw InvalidSpec("independence tol must be positive");
  const HermitianGram G = gram_matrix(g, lambda, q);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G.entries);
  IndependenceVerdict v;
  v.tol = tol;
  v.min_eig = es.eigenvalues().minCoeff();
  if (v.min_eig > tol) {
    v.status = IndependenceVerdict::Status::Independent;
    v.margin = v.min_eig;
  } else if (v.min_eig < tol / 10.0) {
    v.status = IndependenceVerdict::Status::Dependent;
    Eigen::Index which = 0;
    es.eigenvalues().minCoeff(&which);
    Eigen::VectorXcd null = es.eigenvectors().col(which);
    // canonical witness: first nonzero coordinate real positive
    for (Eigen::Index i = 0; i < null.size(); ++i) {
      if (std::abs(null(i)) > 1e-12) {
        null *= std::conj(null(i)) / std::abs(null(i));
        break;
      }
    }
    v.null_coeffs = null / null.norm();
  } else {
    v.status = IndependenceVerdict::Status::Inconclusive;
  }
  return v;
}

Complex bochner_phi(const Window& g, double x, const QuadratureSpec& q) {
  return stft(g, g, x, 0.0, q);
}

CollinearGramCheck collinear_gram_check(const Window& g,
                                        const std::vector<double>& shifts,
                                        const QuadratureSpec& q) {
  if (shifts.empty()) throw InvalidSpec("collinear check needs shifts");
  std::vector<TFPoint> pts;
  pts.reserve(shifts.size());
  for (double a : shifts) pts.push_back({a, 0.0});
  const Configuration lambda = validate(pts, 1e-12);
  const HermitianGram G = gram_matrix(g, lambda, q);

  // Phi's argument orientation: match against V_gg at 3 probe shifts.
  const double probes[3] = {0.25, 0.75, 1.5};
  double dev_pos = 0.0, dev_neg = 0.0;
  for (double s : probes) {
    const Complex v = stft(g, g, s, 0.0, q);
    dev_pos += std::abs(bochner_phi(g, s, q) - v);
    dev_neg += std::abs(bochner_phi(g, -s, q) - v);
  }
  CollinearGramCheck out;
  out.phi_sign = dev_pos <= dev_neg ? +1 : -1;

  const Eigen::Index n = G.size();
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l) {
      const Complex phi =
          bochner_phi(g, out.phi_sign * (shifts[k] - shifts[l]), q);
      out.residual = std::max(out.residual, std::abs(G.entries(k, l) - phi));
    }
  return out;
}

double collinear_gram_residual(const Window& g, const std::vector<double>& shifts,
                               const QuadratureSpec& q) {
  return collinear_gram_check(g, shifts, q).residual;
}

}  // namespace hrtlab
