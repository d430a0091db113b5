#include "schrolab/operators.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace schrolab {

namespace {

constexpr std::size_t dense_budget = 4096;

// |xi|^m at a row-major flat frequency index; m is even so this is an
// exact integer power of |xi|^2
double lattice_eigenvalue(const Grid& g, std::size_t flat, int m) {
  double r2 = 0.0;
  for (int a = g.dim() - 1; a >= 0; --a) {
    const double xi = lattice_frequency(g, flat % g.points_per_axis());
    flat /= g.points_per_axis();
    r2 += xi * xi;
  }
  double lam = 1.0;
  for (int e = 0; e < m / 2; ++e) lam *= r2;
  return lam;
}

void eigendecompose(OperatorModel& model, Eigen::MatrixXd A,
                    Eigen::VectorXd& evals, Eigen::MatrixXd& evecs) {
  (void)model;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  evals = solver.eigenvalues();
  evecs = solver.eigenvectors();
  const double scale = std::max(std::abs(evals(0)), std::abs(evals(evals.size() - 1)));
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (evals(i) < -1e-8 * std::max(1.0, scale))
      throw std::runtime_error(
          "eigendecomposition: unexpected negative eigenvalue " +
          std::to_string(evals(i)));
    if (evals(i) < 0.0) evals(i) = 0.0;  // clamp rounding noise
  }
}

std::size_t wrap_neighbor(const Grid& g, std::size_t flat, int axis, int dir) {
  MultiIndex idx = unflatten(g, flat);
  const auto N = static_cast<std::int64_t>(g.points_per_axis());
  idx[axis] = (idx[axis] + dir + N) % N;
  return flat_index(g, idx);
}

void check_compatible(const OperatorModel& model, const Field& f,
                      const char* who) {
  if (!model.grid().same_as(f.grid()))
    throw std::invalid_argument(std::string(who) + ": field grid mismatch");
  if (model.masked() != f.has_mask() ||
      (model.masked() && *model.mask() != *f.mask()))
    throw std::invalid_argument(std::string(who) + ": field mask mismatch");
}

void check_finite(const cplx& v, double lam, const char* who) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw std::invalid_argument(std::string(who) +
                                ": symbol non-finite at eigenvalue " +
                                std::to_string(lam));
}

}  // namespace

OperatorModel make_free_model(const Grid& g, int m) {
  if (m < 2 || (m > 2 && m % 2 != 0))
    throw std::invalid_argument(
        "make_free_model: order must be 2 or an even integer > 2");
  OperatorModel model;
  model.kind_ = ModelKind::fourier_diagonal;
  model.grid_ = g;
  model.order_m_ = m;
  const double xi_max = std::numbers::pi *
                        static_cast<double>(g.points_per_axis()) /
                        g.box_length() * std::sqrt(g.dim());
  model.spectral_bound_ = std::pow(xi_max, m);
  return model;
}

OperatorModel make_potential_model(const Grid& g, const Field& V) {
  const std::size_t M = g.total_points();
  if (M > dense_budget)
    throw std::invalid_argument(
        "make_potential_model: grid exceeds the dense budget of 4096 points");
  if (!g.same_as(V.grid()))
    throw std::invalid_argument("make_potential_model: potential grid mismatch");
  if (V.has_mask())
    throw std::invalid_argument("make_potential_model: potential must be unmasked");
  for (const cplx& v : V.values()) {
    if (v.imag() != 0.0)
      throw std::invalid_argument("make_potential_model: potential must be real");
    if (v.real() < 0.0)
      throw std::invalid_argument(
          "make_potential_model: potential must be non-negative");
  }

  const double w = 1.0 / (g.spacing() * g.spacing());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, M);
  for (std::size_t i = 0; i < M; ++i) {
    A(i, i) = 2.0 * g.dim() * w + V[i].real();
    for (int a = 0; a < g.dim(); ++a)
      for (int dir : {-1, 1}) A(i, wrap_neighbor(g, i, a, dir)) -= w;
  }

  OperatorModel model;
  model.kind_ = ModelKind::matrix_eig;
  model.grid_ = g;
  model.domain_.resize(M);
  for (std::size_t i = 0; i < M; ++i) model.domain_[i] = i;
  eigendecompose(model, std::move(A), model.evals_, model.evecs_);
  model.spectral_bound_ = model.evals_(model.evals_.size() - 1);
  return model;
}

OperatorModel make_dirichlet_model(const Grid& g,
                                   std::shared_ptr<const Mask> mask) {
  if (!mask || mask->size() != g.total_points())
    throw std::invalid_argument("make_dirichlet_model: mask size mismatch");
  std::vector<std::size_t> domain;
  for (std::size_t i = 0; i < mask->size(); ++i)
    if ((*mask)[i]) domain.push_back(i);
  if (domain.empty())
    throw std::invalid_argument("make_dirichlet_model: empty mask");
  if (domain.size() > dense_budget)
    throw std::invalid_argument(
        "make_dirichlet_model: mask exceeds the dense budget of 4096 points");

  std::vector<std::size_t> row_of(g.total_points(), SIZE_MAX);
  for (std::size_t r = 0; r < domain.size(); ++r) row_of[domain[r]] = r;

  // exterior values pinned to zero: neighbor couplings leave the domain
  // silently, the diagonal keeps the full stencil weight
  const double w = 1.0 / (g.spacing() * g.spacing());
  const std::size_t M = domain.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, M);
  for (std::size_t r = 0; r < M; ++r) {
    A(r, r) = 2.0 * g.dim() * w;
    for (int a = 0; a < g.dim(); ++a)
      for (int dir : {-1, 1}) {
        const std::size_t nb = row_of[wrap_neighbor(g, domain[r], a, dir)];
        if (nb != SIZE_MAX) A(r, nb) -= w;
      }
  }

  OperatorModel model;
  model.kind_ = ModelKind::matrix_eig;
  model.grid_ = g;
  model.mask_ = std::move(mask);
  model.domain_ = std::move(domain);
  eigendecompose(model, std::move(A), model.evals_, model.evecs_);
  model.spectral_bound_ = model.evals_(model.evals_.size() - 1);
  return model;
}

Field apply_function(const OperatorModel& model, const SymbolFn& F,
                     const Field& f, Exec ex) {
  check_compatible(model, f, "apply_function");
  const Grid& g = model.grid();

  if (model.kind() == ModelKind::fourier_diagonal) {
    Field out = f;
    fft_nd(out.values(), g.dim(), g.points_per_axis(), false, ex);
    const double inv_M = 1.0 / static_cast<double>(g.total_points());
    const int m = model.order();
    // exceptions must not unwind out of the parallel region: flag first,
    // then rediagnose serially for the precise message
    std::atomic<bool> bad{false};
    parallel_for(g.total_points(), ex, [&](std::size_t i) {
      const double lam = lattice_eigenvalue(g, i, m);
      const cplx v = F(lam);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        bad.store(true, std::memory_order_relaxed);
        return;
      }
      out[i] *= v * inv_M;
    });
    if (bad.load()) {
      for (std::size_t i = 0; i < g.total_points(); ++i) {
        const double lam = lattice_eigenvalue(g, i, m);
        check_finite(F(lam), lam, "apply_function");
      }
    }
    fft_nd(out.values(), g.dim(), g.points_per_axis(), true, ex);
    return out;
  }

  const auto M = static_cast<Eigen::Index>(model.domain().size());
  Eigen::VectorXd fr(M), fi(M);
  for (Eigen::Index r = 0; r < M; ++r) {
    const cplx v = f[model.domain()[r]];
    fr(r) = v.real();
    fi(r) = v.imag();
  }
  Eigen::VectorXd cr = model.eigenvectors().transpose() * fr;
  Eigen::VectorXd ci = model.eigenvectors().transpose() * fi;
  for (Eigen::Index j = 0; j < M; ++j) {
    const double lam = model.eigenvalues()(j);
    const cplx v = F(lam);
    check_finite(v, lam, "apply_function");
    const cplx c = v * cplx(cr(j), ci(j));
    cr(j) = c.real();
    ci(j) = c.imag();
  }
  Eigen::VectorXd or_ = model.eigenvectors() * cr;
  Eigen::VectorXd oi = model.eigenvectors() * ci;
  Field out(g);
  for (Eigen::Index r = 0; r < M; ++r)
    out[model.domain()[r]] = cplx(or_(r), oi(r));
  if (model.masked()) out = restrict_to(out, model.mask());
  return out;
}

KernelColumn kernel_column(const OperatorModel& model, const SymbolFn& F,
                           const MultiIndex& y, Exec ex) {
  const Grid& g = model.grid();
  const std::size_t flat = flat_index(g, y);
  if (model.masked() && !(*model.mask())[flat])
    throw std::invalid_argument("kernel_column: source point outside the mask");
  Field delta(g);
  delta[flat] = std::pow(g.spacing(), -g.dim());
  if (model.masked()) delta = restrict_to(delta, model.mask());
  return KernelColumn{flat, apply_function(model, F, delta, ex)};
}

Eigen::MatrixXd dense_real_calculus(const OperatorModel& model,
                                    const SymbolFn& F) {
  if (model.kind() != ModelKind::matrix_eig)
    throw std::invalid_argument("dense_real_calculus: needs a matrix model");
  const auto M = static_cast<Eigen::Index>(model.domain().size());
  Eigen::MatrixXd scaled = model.eigenvectors();
  for (Eigen::Index j = 0; j < M; ++j) {
    const double lam = model.eigenvalues()(j);
    const cplx v = F(lam);
    check_finite(v, lam, "dense_real_calculus");
    if (v.imag() != 0.0)
      throw std::invalid_argument(
          "dense_real_calculus: symbol must be real on the spectrum");
    scaled.col(j) *= v.real();
  }
  return scaled * model.eigenvectors().transpose();
}

std::vector<double> stencil_heat_profile(const Grid& g, double t) {
  if (t < 0.0)
    throw std::invalid_argument("stencil_heat_profile: t must be >= 0");
  const std::size_t N = g.points_per_axis();
  const double w = 4.0 / (g.spacing() * g.spacing());
  std::vector<cplx> q(N);
  for (std::size_t k = 0; k < N; ++k) {
    const double s =
        std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(N));
    q[k] = std::exp(-t * w * s * s);
  }
  fft_pow2(q.data(), N, true, Exec::serial);
  std::vector<double> profile(N);
  for (std::size_t j = 0; j < N; ++j)
    profile[j] = q[j].real() / static_cast<double>(N);
  return profile;
}

}  // namespace schrolab
