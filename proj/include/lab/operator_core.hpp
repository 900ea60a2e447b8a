#pragma once

// Dense complex operator algebra on finite chains: tensor embedding, norms,
// partial trace, vectorization and superoperator plumbing.
//
// Conventions, fixed project-wide:
//   * column-stacking vectorization: vec(A) stacks the columns of A, so
//     vec(X A Y) = (Y^T (x) X) vec(A)
//   * site 0 is the leftmost tensor factor of the chain

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class Picture { heisenberg, schrodinger };

/// Ordered set of chain sites carrying a local operator.
struct Support {
  std::vector<int> sites;

  Support() = default;
  explicit Support(std::vector<int> s);

  int size() const { return static_cast<int>(sites.size()); }
  bool empty() const { return sites.empty(); }
  int diameter() const { return sites.empty() ? 0 : sites.back() - sites.front(); }
  bool contains(int site) const;
  bool intersects(const Support& other) const;
  /// Minimal site distance between two supports (0 if they intersect).
  int distance(const Support& other) const;
  Support united(const Support& other) const;
  /// Position of `site` within this support; throws if absent.
  int index_of(int site) const;
  std::string str() const;
};

/// Matrix representation of a linear map on the operator space of a
/// `dim`-dimensional Hilbert space, in the column-stacking convention.
struct Superoperator {
  ComplexMatrix mat;  // (dim^2) x (dim^2)
  int dim = 0;        // Hilbert-space dimension
  Picture picture = Picture::heisenberg;

  Superoperator() = default;
  Superoperator(ComplexMatrix m, int hilbert_dim, Picture pic);

  int op_dim() const { return dim * dim; }
};

// -- Pauli and elementary matrices -------------------------------------------

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix identity_matrix(int d);
ComplexMatrix basis_matrix(int i, int j, int d);  // |i><j|

// -- vectorization ------------------------------------------------------------

ComplexVector vec(const ComplexMatrix& A);
ComplexMatrix devec(const ComplexVector& v, int d);

ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix dag(const ComplexMatrix& A);

// -- core operations ----------------------------------------------------------

/// Embed a local operator into the n-site chain (identity elsewhere).
ComplexMatrix embed(const ComplexMatrix& local, const Support& support,
                    int n_sites, int local_dim);

ComplexMatrix commutator(const ComplexMatrix& A, const ComplexMatrix& B);

/// Largest singular value, relative accuracy ~1e-12.
double spectral_norm(const ComplexMatrix& A);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& A);

/// Trace out the given sites; the result lives on the remaining sites.
ComplexMatrix partial_trace(const ComplexMatrix& A, const Support& traced,
                            int n_sites, int local_dim);

ComplexMatrix apply_super(const Superoperator& S, const ComplexMatrix& A);

/// Adjoint with respect to the Hilbert-Schmidt scalar product; flips picture.
Superoperator hs_adjoint(const Superoperator& S);

/// Composition a after b (apply b first).
Superoperator compose(const Superoperator& a, const Superoperator& b);

Superoperator identity_super(int dim, Picture pic);
/// A -> U A U^dag
Superoperator conjugation_super(const ComplexMatrix& U, Picture pic);
/// A -> H A
Superoperator left_mult_super(const ComplexMatrix& H, Picture pic);
/// A -> A H
Superoperator right_mult_super(const ComplexMatrix& H, Picture pic);
/// A -> Tr(A)/d * 1
Superoperator trace_projector_super(int dim, Picture pic);

/// Max-abs residual of S(B) - S(B)^dag over a Hermitian operator basis.
double hermiticity_preservation_residual(const Superoperator& S);

}  // namespace lab
