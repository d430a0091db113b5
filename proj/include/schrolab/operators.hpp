#pragma once
#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "schrolab/field.hpp"
#include "schrolab/fft.hpp"
#include "schrolab/symbols.hpp"

namespace schrolab {

enum class ModelKind { fourier_diagonal, matrix_eig };

// A non-negative self-adjoint operator with exact functional calculus.
// Two realizations:
//  - fourier_diagonal: eigenvalue symbol |xi|^m on the frequency lattice,
//    diagonalized by the FFT;
//  - matrix_eig: dense symmetric matrix (finite-difference Laplacian plus
//    potential, optionally restricted to a masked subdomain with the
//    exterior pinned to zero), fully eigendecomposed.
class OperatorModel {
 public:
  ModelKind kind() const { return kind_; }
  const Grid& grid() const { return grid_; }
  int order() const { return order_m_; }
  double spectral_bound() const { return spectral_bound_; }

  bool masked() const { return mask_ != nullptr; }
  const std::shared_ptr<const Mask>& mask() const { return mask_; }
  // flat grid indices backing matrix rows (all points when unmasked)
  const std::vector<std::size_t>& domain() const { return domain_; }

  const Eigen::VectorXd& eigenvalues() const { return evals_; }
  const Eigen::MatrixXd& eigenvectors() const { return evecs_; }

 private:
  friend OperatorModel make_free_model(const Grid&, int);
  friend OperatorModel make_potential_model(const Grid&, const Field&);
  friend OperatorModel make_dirichlet_model(const Grid&,
                                            std::shared_ptr<const Mask>);

  ModelKind kind_ = ModelKind::fourier_diagonal;
  Grid grid_;
  int order_m_ = 2;
  double spectral_bound_ = 0.0;
  std::shared_ptr<const Mask> mask_;
  std::vector<std::size_t> domain_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXd evecs_;
};

// |xi|^m free model; m = 2 is the Laplacian, higher orders must be even.
OperatorModel make_free_model(const Grid& g, int m);

// Dense periodic finite-difference Laplacian plus diag(V); V must be real
// and non-negative, and the grid within the dense budget (N^n <= 4096).
OperatorModel make_potential_model(const Grid& g, const Field& V);

// Finite-difference Laplacian on the masked subdomain with Dirichlet
// (zero) exterior.
OperatorModel make_dirichlet_model(const Grid& g,
                                   std::shared_ptr<const Mask> mask);

// F(L) f by exact spectral calculus.  The field must live on the model's
// grid and carry the model's mask (if any).
Field apply_function(const OperatorModel& model, const SymbolFn& F,
                     const Field& f, Exec ex = Exec::parallel);

// Column K(., y) of the kernel of F(L), normalized so that discrete sums
// with weight h^n approximate integrals dmu: the input is the unit-mass
// delta with value h^{-n} at y.
struct KernelColumn {
  std::size_t source = 0;  // flat index of y
  Field column;
};

KernelColumn kernel_column(const OperatorModel& model, const SymbolFn& F,
                           const MultiIndex& y, Exec ex = Exec::parallel);

// F(L) as a dense real matrix (matrix_eig models only; F must be real on
// the spectrum).  Used for entrywise kernel comparisons.
Eigen::MatrixXd dense_real_calculus(const OperatorModel& model,
                                    const SymbolFn& F);

// 1-D profile c of the periodic stencil heat matrix: the entries of
// exp(-t A) for the finite-difference Laplacian factorize across axes as
// prod_a c[(x_a - y_a) mod N].
std::vector<double> stencil_heat_profile(const Grid& g, double t);

}  // namespace schrolab
