#include "hrtlab/extension.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hrtlab/errors.hpp"
#include "hrtlab/stft.hpp"

namespace hrtlab {

namespace {

Complex cis(double theta) { return {std::cos(theta), std::sin(theta)}; }

constexpr double kImagGuard = 1e-11;
constexpr double kIntegralTailTol = 1e-6;

struct ArgKey {
  std::uint64_t x, y;
  bool operator==(const ArgKey&) const = default;
};

struct ArgKeyHash {
  std::size_t operator()(const ArgKey& k) const {
    std::uint64_t h = k.x * 0x9e3779b97f4a7c15ull;
    h ^= k.y + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

std::uint64_t bits_of(double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, sizeof(b));
  return b;
}

}  // namespace

struct ExtensionEvaluator::VggCache {
  std::mutex mu;
  std::unordered_map<ArgKey, Complex, ArgKeyHash> map;
};

Complex ExtensionEvaluator::vgg(double x, double y,
                                const QuadratureSpec& q) const {
  const bool cacheable = cache_ && q.abs_tol == build_q_.abs_tol &&
                         q.max_panels == build_q_.max_panels &&
                         q.oscillation_guard == build_q_.oscillation_guard;
  if (!cacheable) return stft(window_, window_, x, y, q);
  const ArgKey key{bits_of(x), bits_of(y)};
  {
    std::lock_guard lock(cache_->mu);
    if (auto it = cache_->map.find(key); it != cache_->map.end())
      return it->second;
  }
  const Complex v = stft(window_, window_, x, y, q);
  std::lock_guard lock(cache_->mu);
  cache_->map.emplace(key, v);
  return v;
}

ExtensionEvaluator build_extension(const Window& g, const Configuration& lambda,
                                   const QuadratureSpec& q) {
  ExtensionEvaluator e;
  e.window_ = g;
  e.base_ = lambda;
  e.gram_ = gram_matrix(g, lambda, q);

  e.llt_.compute(e.gram_.entries);
  if (e.llt_.info() != Eigen::Success)
    throw SingularBase("base Gramian is not positive definite at tolerance");

  const Eigen::MatrixXcd L = e.llt_.matrixL();
  double det = 1.0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) det *= std::norm(L(i, i));
  e.det_base_ = det;
  if (!(det > 0.0))
    throw SingularBase("base Gramian has nonpositive determinant");

  e.refactor_error_ =
      (L * L.adjoint() - e.gram_.entries).cwiseAbs().maxCoeff();

  const Eigen::Index n = e.gram_.size();
  e.inverse_ = e.llt_.solve(Eigen::MatrixXcd::Identity(n, n));
  e.inv_abs_sum_ = e.inverse_.cwiseAbs().sum();
  e.base_min_eig_ = min_eigenvalue(e.gram_);

  for (const TFPoint& p : lambda.points)
    e.base_radius_ = std::max(e.base_radius_, norm2(p));
  e.build_q_ = q;
  e.cache_ = std::make_shared<ExtensionEvaluator::VggCache>();
  return e;
}

Eigen::VectorXcd extension_vector(const ExtensionEvaluator& e, double a,
                                  double b, const QuadratureSpec& q) {
  const auto& pts = e.base().points;
  Eigen::VectorXcd u(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double da = a - pts[k].a;
    const double db = b - pts[k].b;
    u(static_cast<Eigen::Index>(k)) =
        cis(-kTwoPi * pts[k].a * db) * e.vgg(da, db, q);
  }
  return u;
}

ExtensionValue eval_F(const ExtensionEvaluator& e, double a, double b,
                      const QuadratureSpec& q) {
  ExtensionValue out;
  out.u = extension_vector(e, a, b, q);
  const Eigen::VectorXcd x = e.solve(out.u);
  out.solve_residual = (e.gram().entries * x - out.u).norm();
  const Complex form = out.u.dot(x);  // <G^{-1} u, u>
  if (std::abs(form.imag()) > kImagGuard)
    throw Error("Hermitian form returned non-real value: imag = " +
                std::to_string(form.imag()));
  out.F = form.real();
  return out;
}

double det_identity_residual(const ExtensionEvaluator& e, double a, double b,
                             const QuadratureSpec& q) {
  std::vector<TFPoint> pts = e.base().points;
  pts.push_back({a, b});
  Configuration extended;
  extended.points = std::move(pts);
  extended.geom_tol = e.base().geom_tol;
  const HermitianGram big = gram_matrix(e.window(), extended, q);
  const Complex det_big = big.entries.determinant();
  const double F = eval_F(e, a, b, q).F;
  return std::abs(det_big - Complex{(1.0 - F) * e.det_base(), 0.0});
}

IntegralEstimate integral_F(const ExtensionEvaluator& e, double L, double step,
                            const QuadratureSpec& q, int threads) {
  if (!(L > 0.0) || !(step > 0.0))
    throw InvalidSpec("integral_F needs positive L and step");

  // Certified tail: F <= inv_abs_sum * D(d)^2 with d the distance to the
  // nearest base point, integrated over the outside of the square.
  const double margin = L - e.base_radius();
  double tail = std::numeric_limits<double>::infinity();
  if (margin > 0.0) tail = e.inv_abs_sum() * e.window().vgg_tail_mass(margin);
  const bool certified = tail <= kIntegralTailTol;

  const auto n = static_cast<std::size_t>(std::ceil(2.0 * L / step - 1e-12));
  const double h = 2.0 * L / static_cast<double>(n);
  IntegralEstimate out;
  out.tail_bound = tail;
  out.nodes = n * n;

  std::vector<double> row_sums(n, 0.0);
  const int n_workers = std::max(1, threads);
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      const double a = -L + h * (static_cast<double>(i) + 0.5);
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double b = -L + h * (static_cast<double>(j) + 0.5);
        acc += eval_F(e, a, b, q).F;
      }
      row_sums[i] = acc;
    }
  };
  if (n_workers == 1) {
    work();
  } else {
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  double total = 0.0;
  for (double r : row_sums) total += r;  // fixed-order reduction
  out.value = total * h * h;
  if (!certified)
    throw TailBoundTooLarge(
        "window decay cannot certify the F-integral tail below 1e-6 at L=" +
        std::to_string(L) + "; raw truncated integral = " +
        std::to_string(out.value));
  return out;
}

Complex fhat(const ExtensionEvaluator& e, double xi, double eta,
             const QuadratureSpec& q) {
  const auto& pts = e.base().points;
  const Eigen::MatrixXcd& B = e.inverse();
  const Complex v0 = std::conj(e.vgg(-eta, xi, q));
  Complex acc{0.0, 0.0};
  for (std::size_t k = 0; k < pts.size(); ++k) {
    for (std::size_t l = 0; l < pts.size(); ++l) {
      const double al = pts[l].a, bl = pts[l].b;
      const double ak = pts[k].a, bk = pts[k].b;
      const Complex phase = cis(kTwoPi * al * (bl - bk));
      const Complex mod = cis(-kTwoPi * (al * xi + bk * eta));
      const Complex v = e.vgg(-eta - al + ak, xi - bl + bk, q);
      acc += B(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) *
             phase * mod * v * v0;
    }
  }
  return acc;
}

double symmetry_residual(const ExtensionEvaluator& e, double a, double b,
                         const QuadratureSpec& q) {
  if (!e.window().is_real())
    throw NotApplicable("symmetry check needs a real-valued window");
  const auto& pts = e.base().points;
  const bool base_ok = pts.size() == 2 && pts[0] == TFPoint{0.0, 0.0} &&
                       pts[1] == TFPoint{0.0, 1.0};
  if (!base_ok)
    throw NotApplicable("symmetry check needs the base {(0,0),(0,1)}");
  if (std::abs(a - std::round(a)) > 1e-12)
    throw NotApplicable("symmetry check needs integer a");
  if (b == 0.5)
    return std::abs(eval_F(e, -a, 0.5, q).F - eval_F(e, a, 0.5, q).F);
  return std::abs(eval_F(e, a, b, q).F - eval_F(e, a, 1.0 - b, q).F);
}

}  // namespace hrtlab
