#include "stairloc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/SparseLU>

#include "stairloc/errors.hpp"

namespace stairloc {

namespace {

using ColSparse = Eigen::SparseMatrix<double, Eigen::ColMajor>;

struct RitzPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
};

struct Tolerance {
  double absolute = 0.0;
  double relative = 0.0;
  double at(double theta) const { return absolute + relative * std::abs(theta); }
};

void orthogonalise(Eigen::VectorXd& w, const Eigen::MatrixXd& basis, Eigen::Index cols) {
  if (cols <= 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd c = basis.leftCols(cols).transpose() * w;
    w.noalias() -= basis.leftCols(cols) * c;
  }
}

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

// One restarted Lanczos solve for the lowest `want` eigenpairs of `apply`
// restricted to the orthogonal complement of the columns of `locked`.
std::vector<RitzPair> lanczos_run(const LinearMap& apply, Eigen::Index n, const Eigen::MatrixXd& locked,
                                  std::size_t want, const Tolerance& tol, const LanczosOptions& options,
                                  std::mt19937_64& rng) {
  const Eigen::Index n_locked = locked.cols();
  const Eigen::Index complement = n - n_locked;
  if (complement <= 0 || want == 0) return {};
  const Eigen::Index m_max = std::min<Eigen::Index>(static_cast<Eigen::Index>(options.max_krylov), complement);

  auto fresh_start = [&](const Eigen::MatrixXd* basis, Eigen::Index cols) -> Eigen::VectorXd {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::VectorXd v = random_vector(n, rng);
      orthogonalise(v, locked, n_locked);
      if (basis != nullptr) orthogonalise(v, *basis, cols);
      const double norm = v.norm();
      if (norm > 1e-8) return v / norm;
    }
    return Eigen::VectorXd();
  };

  Eigen::VectorXd start = fresh_start(nullptr, 0);
  if (start.size() == 0) return {};
  Eigen::MatrixXd basis(n, m_max);
  Eigen::VectorXd w(n);
  double best_residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    std::vector<double> alpha;
    std::vector<double> beta;
    basis.col(0) = start;
    Eigen::Index m = 0;
    double scale = 1.0;
    for (Eigen::Index i = 0; i < m_max; ++i) {
      const Eigen::VectorXd v = basis.col(i);
      apply(v, w);
      const double a = v.dot(w);
      alpha.push_back(a);
      scale = std::max(scale, std::abs(a));
      m = i + 1;
      if (m == m_max) break;
      orthogonalise(w, basis, m);
      orthogonalise(w, locked, n_locked);
      const double b = w.norm();
      if (b <= 1e-12 * scale) {
        Eigen::VectorXd next = fresh_start(&basis, m);
        if (next.size() == 0) break;
        beta.push_back(0.0);
        basis.col(m) = next;
      } else {
        scale = std::max(scale, b);
        beta.push_back(b);
        basis.col(m) = w / b;
      }
    }

    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (tri.info() != Eigen::Success) throw ConvergenceError("lanczos: tridiagonal eigensolver failed", best_residual);

    const Eigen::Index candidates = std::min<Eigen::Index>(m, static_cast<Eigen::Index>(want) + 2);
    std::vector<RitzPair> ritz;
    for (Eigen::Index j = 0; j < candidates; ++j) {
      RitzPair p;
      p.value = tri.eigenvalues()(j);
      p.vector = basis.leftCols(m) * tri.eigenvectors().col(j);
      p.vector.normalize();
      Eigen::VectorXd hy(n);
      apply(p.vector, hy);
      p.residual = (hy - p.value * p.vector).norm();
      ritz.push_back(std::move(p));
    }
    std::vector<RitzPair> converged;
    for (auto& p : ritz) {
      if (converged.size() >= want || p.residual > tol.at(p.value)) break;
      converged.push_back(std::move(p));
    }
    if (!converged.empty()) return converged;
    best_residual = std::min(best_residual, ritz.front().residual);
    start = ritz.front().vector;
    orthogonalise(start, locked, n_locked);
    start.normalize();
  }
  throw ConvergenceError("lanczos: no eigenpair converged within " + std::to_string(options.max_restarts) +
                             " restarts (best residual " + std::to_string(best_residual) + ")",
                         best_residual);
}

Eigen::MatrixXd stack(const std::vector<Eigen::VectorXd>& cols, Eigen::Index n) {
  Eigen::MatrixXd m(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = cols[i];
  return m;
}

SpectrumResult lowest_pairs_impl(const LinearMap& apply, Eigen::Index n, std::size_t k, const Tolerance& tol,
                                 const LanczosOptions& options) {
  if (k > static_cast<std::size_t>(n)) throw Error(ErrorKind::kDomain, "lowest_eigenpairs: k exceeds dimension");
  std::mt19937_64 rng(options.seed);
  std::vector<double> values;
  std::vector<Eigen::VectorXd> vectors;
  double max_residual = 0.0;

  auto lock = [&](RitzPair& p) {
    const Eigen::MatrixXd current = stack(vectors, n);
    orthogonalise(p.vector, current, current.cols());
    p.vector.normalize();
    values.push_back(p.value);
    vectors.push_back(std::move(p.vector));
    max_residual = std::max(max_residual, p.residual);
  };

  while (values.size() < k) {
    auto pairs = lanczos_run(apply, n, stack(vectors, n), k - values.size(), tol, options, rng);
    if (pairs.empty()) break;
    for (auto& p : pairs) lock(p);
  }

  // Confirm nothing in the complement lies below the current k-th value.
  for (std::size_t round = 0; round < 2 * k + 8 && values.size() < static_cast<std::size_t>(n) && k > 0; ++round) {
    auto pairs = lanczos_run(apply, n, stack(vectors, n), 1, tol, options, rng);
    if (pairs.empty()) break;
    const double top = *std::max_element(values.begin(), values.end());
    if (!(pairs.front().value < top - tol.at(top))) break;
    lock(pairs.front());
    const auto worst = std::max_element(values.begin(), values.end()) - values.begin();
    values.erase(values.begin() + worst);
    vectors.erase(vectors.begin() + worst);
  }

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  SpectrumResult out;
  out.method = SolverMethod::kIterative;
  out.has_vectors = true;
  out.eigenvectors.resize(n, static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    out.eigenvalues.push_back(values[order[i]]);
    out.eigenvectors.col(static_cast<Eigen::Index>(i)) = vectors[order[i]];
  }
  out.max_residual = max_residual;
  return out;
}

struct NearestPair {
  double distance = std::numeric_limits<double>::infinity();
  double error = 0.0;
};

}  // namespace

const char* to_string(SolverMethod method) { return method == SolverMethod::kDense ? "dense" : "iterative"; }

double residual_tolerance(double norm1) { return 1e-10 * std::max(1.0, norm1); }

double norm1(const SparseMatrix& h) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < h.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(h, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

SpectrumResult full_spectrum(const SparseMatrix& h, bool want_vectors, std::size_t dense_threshold) {
  const auto n = static_cast<std::size_t>(h.rows());
  if (n > dense_threshold) {
    throw Error(ErrorKind::kTooLarge, "full_spectrum: dimension " + std::to_string(n) + " above dense threshold " +
                                          std::to_string(dense_threshold));
  }
  SpectrumResult out;
  out.method = SolverMethod::kDense;
  if (n == 0) return out;
  const Eigen::MatrixXd dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      dense, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("full_spectrum: dense eigensolver failed", INFINITY);
  out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  if (want_vectors) {
    out.eigenvectors = solver.eigenvectors();
    out.has_vectors = true;
    const Eigen::MatrixXd hv = h * out.eigenvectors;
    const Eigen::MatrixXd r = hv - out.eigenvectors * solver.eigenvalues().asDiagonal();
    out.max_residual = r.colwise().norm().maxCoeff();
    const double tol = residual_tolerance(norm1(h));
    if (out.max_residual > tol) {
      throw ConvergenceError("full_spectrum: residual " + std::to_string(out.max_residual) + " above bound",
                             out.max_residual);
    }
  }
  return out;
}

SpectrumResult full_spectrum(const FiniteVolumeOperator& op, bool want_vectors, std::size_t dense_threshold) {
  return full_spectrum(op.matrix(), want_vectors, dense_threshold);
}

SpectrumResult lowest_eigenpairs(const SparseMatrix& h, std::size_t k, const LanczosOptions& options) {
  const LinearMap apply = [&h](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = h * x; };
  // Converge a decade below the contract so locked pairs meet it with margin.
  const Tolerance tol{0.1 * residual_tolerance(norm1(h)), 0.0};
  return lowest_pairs_impl(apply, h.rows(), k, tol, options);
}

SpectrumResult lowest_eigenpairs(const LinearMap& apply, Eigen::Index n, std::size_t k, double tolerance,
                                 const LanczosOptions& options) {
  return lowest_pairs_impl(apply, n, k, Tolerance{tolerance, 0.0}, options);
}

struct Resolvent::SparseFactor {
  Eigen::SparseLU<ColSparse> lu;
  bool ok = false;
};

namespace {

std::unique_ptr<Resolvent::SparseFactor> factor_shifted(const SparseMatrix& h, double energy);

}  // namespace

namespace {

// Nearest eigenvalue to E via Lanczos on (H - E)^{-1}: both spectral ends of
// the inverse are resolved and the larger |mu| wins. The error bar is the
// explicit residual ||H y - theta y||, which bounds the distance from theta
// to the spectrum.
NearestPair shift_invert_nearest(const SparseMatrix& h, double energy, const Resolvent::SparseFactor& f) {
  const Eigen::Index n = h.rows();
  const LinearMap inverse = [&f](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = f.lu.solve(x); };
  const LinearMap negated = [&f](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = -f.lu.solve(x); };
  const Tolerance tol{0.0, 1e-11};
  LanczosOptions options;
  NearestPair best;
  auto consider = [&](double mu, const Eigen::VectorXd& y) {
    if (mu == 0.0) return;
    const double theta = energy + 1.0 / mu;
    const double d = std::abs(1.0 / mu);
    if (d < best.distance) {
      const Eigen::VectorXd hy = h * y;
      best.distance = d;
      best.error = (hy - theta * y).norm();
    }
  };
  const auto low = lowest_pairs_impl(inverse, n, 1, tol, options);
  if (low.eigenvalues.front() < 0.0) consider(low.eigenvalues.front(), low.eigenvectors.col(0));
  const auto high = lowest_pairs_impl(negated, n, 1, tol, options);
  if (-high.eigenvalues.front() > 0.0) consider(-high.eigenvalues.front(), high.eigenvectors.col(0));
  return best;
}

std::unique_ptr<Resolvent::SparseFactor> factor_shifted(const SparseMatrix& h, double energy) {
  auto f = std::make_unique<Resolvent::SparseFactor>();
  ColSparse shifted(h);
  ColSparse identity(h.rows(), h.cols());
  identity.setIdentity();
  shifted -= energy * identity;
  shifted.makeCompressed();
  f->lu.analyzePattern(shifted);
  f->lu.factorize(shifted);
  f->ok = f->lu.info() == Eigen::Success;
  return f;
}

}  // namespace

double dist_to_spectrum(std::span<const double> eigenvalues, double energy) {
  double best = std::numeric_limits<double>::infinity();
  for (double l : eigenvalues) best = std::min(best, std::abs(l - energy));
  return best;
}

DistanceEstimate distance_estimate(const SparseMatrix& h, double energy, std::size_t dense_threshold) {
  if (static_cast<std::size_t>(h.rows()) <= dense_threshold) {
    const auto s = full_spectrum(h, false, dense_threshold);
    return {dist_to_spectrum(s.eigenvalues, energy), 0.0, SolverMethod::kDense};
  }
  const auto f = factor_shifted(h, energy);
  if (!f->ok) return {0.0, 0.0, SolverMethod::kIterative};
  const auto nearest = shift_invert_nearest(h, energy, *f);
  return {nearest.distance, nearest.error, SolverMethod::kIterative};
}

double dist_to_spectrum(const SparseMatrix& h, double energy, std::size_t dense_threshold) {
  return distance_estimate(h, energy, dense_threshold).value;
}

bool distance_at_least(const SparseMatrix& h, double energy, double eps, std::size_t dense_threshold) {
  const auto d = distance_estimate(h, energy, dense_threshold);
  if (d.value - d.error >= eps) return true;
  if (d.value + d.error < eps) return false;
  throw Error(ErrorKind::kUncertainty, "distance_at_least: error bar straddles the requested threshold");
}

Resolvent::Resolvent(const SparseMatrix& h, std::shared_ptr<const SpectrumResult> eigensystem, double energy)
    : h_(h), energy_(energy), eig_(std::move(eigensystem)) {
  if (!eig_ || !eig_->has_vectors) throw Error(ErrorKind::kDomain, "Resolvent: eigensystem without vectors");
  distance_ = dist_to_spectrum(eig_->eigenvalues, energy);
  const double h_norm = norm1(h_);
  shifted_norm_ = h_norm + std::abs(energy);
  if (distance_ <= 1e-12 * h_norm) {
    throw ResonantEnergyError("Resolvent: energy within the resonance floor of the spectrum", distance_);
  }
}

Resolvent::Resolvent(const SparseMatrix& h, double energy, std::size_t dense_threshold) : h_(h), energy_(energy) {
  const double h_norm = norm1(h_);
  shifted_norm_ = h_norm + std::abs(energy);
  if (static_cast<std::size_t>(h.rows()) <= dense_threshold) {
    eig_ = std::make_shared<const SpectrumResult>(full_spectrum(h_, true, dense_threshold));
    distance_ = dist_to_spectrum(eig_->eigenvalues, energy);
  } else {
    lu_ = factor_shifted(h_, energy);
    distance_ = lu_->ok ? shift_invert_nearest(h_, energy, *lu_).distance : 0.0;
  }
  if (distance_ <= 1e-12 * h_norm) {
    throw ResonantEnergyError("Resolvent: energy within the resonance floor of the spectrum", distance_);
  }
}

Resolvent::~Resolvent() = default;
Resolvent::Resolvent(Resolvent&&) noexcept = default;
Resolvent& Resolvent::operator=(Resolvent&&) noexcept = default;

Eigen::VectorXd Resolvent::column(Eigen::Index y) const {
  const Eigen::Index n = h_.rows();
  auto apply_g = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
    if (eig_) {
      const auto& v = eig_->eigenvectors;
      Eigen::VectorXd c = v.transpose() * rhs;
      for (Eigen::Index i = 0; i < c.size(); ++i) c(i) /= (eig_->eigenvalues[static_cast<std::size_t>(i)] - energy_);
      return v * c;
    }
    return lu_->lu.solve(rhs);
  };
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
  delta(y) = 1.0;
  Eigen::VectorXd g = apply_g(delta);
  for (int pass = 0; pass < 3; ++pass) {
    const Eigen::VectorXd r = h_ * g - energy_ * g - delta;
    const double bound = 1e-10 * std::max(1.0, shifted_norm_ * g.norm());
    if (r.norm() <= bound) return g;
    g -= apply_g(r);
  }
  const double res = (h_ * g - energy_ * g - delta).norm();
  throw ConvergenceError("Resolvent: solve residual " + std::to_string(res) + " above bound", res);
}

Eigen::MatrixXd Resolvent::block(std::span<const Eigen::Index> rows, std::span<const Eigen::Index> cols) const {
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXd out(nr, nc);
  if (eig_) {
    const auto& v = eig_->eigenvectors;
    Eigen::MatrixXd left(nr, v.cols());
    Eigen::MatrixXd right(nc, v.cols());
    for (Eigen::Index i = 0; i < nr; ++i) left.row(i) = v.row(rows[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < nc; ++j) right.row(j) = v.row(cols[static_cast<std::size_t>(j)]);
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
      left.col(k) /= (eig_->eigenvalues[static_cast<std::size_t>(k)] - energy_);
    }
    out.noalias() = left * right.transpose();
    return out;
  }
  for (Eigen::Index j = 0; j < nc; ++j) {
    const auto g = column(cols[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < nr; ++i) out(i, j) = g(rows[static_cast<std::size_t>(i)]);
  }
  return out;
}

double green_entry(const SparseMatrix& h, double energy, Eigen::Index x, Eigen::Index y) {
  return Resolvent(h, energy).entry(x, y);
}

double ef_correlator(const SpectrumResult& spectrum, const EnergyInterval& interval, Eigen::Index x, Eigen::Index y) {
  if (!spectrum.has_vectors) throw Error(ErrorKind::kDomain, "ef_correlator: eigenvectors required");
  if (interval.empty()) return 0.0;
  const auto& lambda = spectrum.eigenvalues;
  const auto& v = spectrum.eigenvectors;
  double total = 0.0;
  std::size_t i = 0;
  while (i < lambda.size()) {
    std::size_t j = i + 1;
    while (j < lambda.size() && lambda[j] - lambda[j - 1] <= 1e-10 * std::max(1.0, std::abs(lambda[j]))) ++j;
    double px = 0.0;
    double py = 0.0;
    bool inside = false;
    for (std::size_t a = i; a < j; ++a) {
      if (!interval.contains(lambda[a])) continue;
      inside = true;
      const auto col = static_cast<Eigen::Index>(a);
      px += v(x, col) * v(x, col);
      py += v(y, col) * v(y, col);
    }
    if (inside) total += std::sqrt(px) * std::sqrt(py);
    i = j;
  }
  return total;
}

double min_spectral_gap(std::span<const double> a, std::span<const double> b) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    best = std::min(best, std::abs(a[i] - b[j]));
    if (a[i] < b[j]) ++i;
    else ++j;
  }
  return best;
}

}  // namespace stairloc
