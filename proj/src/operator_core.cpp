#include "lab/operator_core.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lab {

namespace {

long ipow(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool is_hermitian(const ComplexMatrix& A, double tol) {
  return (A - A.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_skew_hermitian(const ComplexMatrix& A, double tol) {
  return (A + A.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Power iteration on A^dag A for dimensions past the dense-SVD limit.
double spectral_norm_power(const ComplexMatrix& A) {
  const int n = static_cast<int>(A.cols());
  ComplexVector x = ComplexVector::Ones(n);
  for (int i = 0; i < n; ++i) x(i) += Complex(0.0, 1.0) * (0.5 + i % 7);
  x.normalize();
  double sigma2 = 0.0;
  for (int it = 0; it < 1000; ++it) {
    ComplexVector y = A.adjoint() * (A * x);
    double next = y.norm();
    if (next == 0.0) return 0.0;
    y /= next;
    if (std::abs(next - sigma2) <= 1e-14 * next && it > 4) {
      sigma2 = next;
      break;
    }
    sigma2 = next;
    x = y;
  }
  return std::sqrt(sigma2);
}

constexpr int kDenseSvdLimit = 4096;

}  // namespace

Support::Support(std::vector<int> s) : sites(std::move(s)) {
  for (std::size_t i = 0; i + 1 < sites.size(); ++i)
    require(sites[i] < sites[i + 1], "Support sites must be strictly increasing");
  if (!sites.empty()) require(sites.front() >= 0, "Support sites must be non-negative");
}

bool Support::contains(int site) const {
  return std::binary_search(sites.begin(), sites.end(), site);
}

bool Support::intersects(const Support& other) const {
  for (int s : sites)
    if (other.contains(s)) return true;
  return false;
}

int Support::distance(const Support& other) const {
  require(!sites.empty() && !other.sites.empty(), "distance of empty support");
  int best = std::numeric_limits<int>::max();
  for (int a : sites)
    for (int b : other.sites) best = std::min(best, std::abs(a - b));
  return best;
}

Support Support::united(const Support& other) const {
  std::vector<int> merged = sites;
  merged.insert(merged.end(), other.sites.begin(), other.sites.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  return Support(std::move(merged));
}

int Support::index_of(int site) const {
  auto it = std::lower_bound(sites.begin(), sites.end(), site);
  require(it != sites.end() && *it == site, "site not in support");
  return static_cast<int>(it - sites.begin());
}

std::string Support::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(sites[i]);
  }
  return out + "}";
}

Superoperator::Superoperator(ComplexMatrix m, int hilbert_dim, Picture pic)
    : mat(std::move(m)), dim(hilbert_dim), picture(pic) {
  require(mat.rows() == mat.cols(), "superoperator matrix must be square");
  require(mat.rows() == static_cast<long>(hilbert_dim) * hilbert_dim,
          "superoperator matrix size must be dim^2");
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix identity_matrix(int d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix basis_matrix(int i, int j, int d) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

ComplexVector vec(const ComplexMatrix& A) {
  // Eigen is column-major: a flat view is already column stacking.
  return Eigen::Map<const ComplexVector>(A.data(), A.size());
}

ComplexMatrix devec(const ComplexVector& v, int d) {
  require(v.size() == static_cast<long>(d) * d, "devec: size mismatch");
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B) {
  ComplexMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (long i = 0; i < A.rows(); ++i)
    for (long j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

ComplexMatrix dag(const ComplexMatrix& A) { return A.adjoint(); }

ComplexMatrix embed(const ComplexMatrix& local, const Support& support,
                    int n_sites, int local_dim) {
  const int m = support.size();
  require(m > 0, "embed: empty support");
  require(support.sites.back() < n_sites, "embed: support out of range");
  const long d_loc = ipow(local_dim, m);
  require(local.rows() == d_loc && local.cols() == d_loc,
          "embed: local dimension mismatch");
  const long d_all = ipow(local_dim, n_sites);
  const long d_rest = d_all / d_loc;

  // stride of each site's digit in the global basis index (site 0 leftmost)
  std::vector<long> site_stride(n_sites);
  for (int s = 0; s < n_sites; ++s) site_stride[s] = ipow(local_dim, n_sites - 1 - s);
  std::vector<int> rest_sites;
  for (int s = 0; s < n_sites; ++s)
    if (!support.contains(s)) rest_sites.push_back(s);

  // base address for every assignment of the untouched sites
  std::vector<long> rest_base(d_rest, 0);
  for (long r = 0; r < d_rest; ++r) {
    long rr = r;
    for (int k = static_cast<int>(rest_sites.size()) - 1; k >= 0; --k) {
      rest_base[r] += (rr % local_dim) * site_stride[rest_sites[k]];
      rr /= local_dim;
    }
  }
  // address contribution of every local basis index (support order, MSB first)
  std::vector<long> loc_addr(d_loc, 0);
  for (long l = 0; l < d_loc; ++l) {
    long ll = l;
    for (int k = m - 1; k >= 0; --k) {
      loc_addr[l] += (ll % local_dim) * site_stride[support.sites[k]];
      ll /= local_dim;
    }
  }

  ComplexMatrix out = ComplexMatrix::Zero(d_all, d_all);
  for (long rl = 0; rl < d_loc; ++rl)
    for (long cl = 0; cl < d_loc; ++cl) {
      const Complex val = local(rl, cl);
      if (val == Complex(0, 0)) continue;
      for (long r = 0; r < d_rest; ++r)
        out(loc_addr[rl] + rest_base[r], loc_addr[cl] + rest_base[r]) += val;
    }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& A, const ComplexMatrix& B) {
  require(A.rows() == A.cols() && B.rows() == B.cols() && A.rows() == B.rows(),
          "commutator: dimension mismatch");
  return A * B - B * A;
}

double spectral_norm(const ComplexMatrix& A) {
  if (A.size() == 0) return 0.0;
  const double scale = A.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const double tol = 1e-13 * scale;
  if (A.rows() == A.cols()) {
    if (is_hermitian(A, tol)) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(A, Eigen::EigenvaluesOnly);
      return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    if (is_skew_hermitian(A, tol)) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(Complex(0, 1) * A,
                                                      Eigen::EigenvaluesOnly);
      return es.eigenvalues().cwiseAbs().maxCoeff();
    }
  }
  if (std::max(A.rows(), A.cols()) <= kDenseSvdLimit) {
    Eigen::BDCSVD<ComplexMatrix> svd(A);
    return svd.singularValues()(0);
  }
  return spectral_norm_power(A);
}

double trace_norm(const ComplexMatrix& A) {
  if (A.size() == 0) return 0.0;
  const double scale = A.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  if (A.rows() == A.cols() && is_hermitian(A, 1e-13 * scale)) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<ComplexMatrix> svd(A);
  return svd.singularValues().sum();
}

ComplexMatrix partial_trace(const ComplexMatrix& A, const Support& traced,
                            int n_sites, int local_dim) {
  const long d_all = ipow(local_dim, n_sites);
  require(A.rows() == d_all && A.cols() == d_all, "partial_trace: dimension mismatch");
  if (traced.empty()) return A;
  require(traced.sites.back() < n_sites, "partial_trace: site out of range");

  std::vector<int> kept;
  for (int s = 0; s < n_sites; ++s)
    if (!traced.contains(s)) kept.push_back(s);
  const int mk = static_cast<int>(kept.size());
  const long d_keep = ipow(local_dim, mk);
  const long d_tr = d_all / d_keep;

  std::vector<long> site_stride(n_sites);
  for (int s = 0; s < n_sites; ++s) site_stride[s] = ipow(local_dim, n_sites - 1 - s);

  std::vector<long> keep_addr(d_keep, 0);
  for (long l = 0; l < d_keep; ++l) {
    long ll = l;
    for (int k = mk - 1; k >= 0; --k) {
      keep_addr[l] += (ll % local_dim) * site_stride[kept[k]];
      ll /= local_dim;
    }
  }
  std::vector<long> tr_addr(d_tr, 0);
  for (long l = 0; l < d_tr; ++l) {
    long ll = l;
    for (int k = traced.size() - 1; k >= 0; --k) {
      tr_addr[l] += (ll % local_dim) * site_stride[traced.sites[k]];
      ll /= local_dim;
    }
  }

  ComplexMatrix out = ComplexMatrix::Zero(d_keep, d_keep);
  for (long r = 0; r < d_keep; ++r)
    for (long c = 0; c < d_keep; ++c) {
      Complex acc = 0.0;
      for (long t = 0; t < d_tr; ++t)
        acc += A(keep_addr[r] + tr_addr[t], keep_addr[c] + tr_addr[t]);
      out(r, c) = acc;
    }
  return out;
}

ComplexMatrix apply_super(const Superoperator& S, const ComplexMatrix& A) {
  require(A.rows() == S.dim && A.cols() == S.dim, "apply_super: dimension mismatch");
  return devec(S.mat * vec(A), S.dim);
}

Superoperator hs_adjoint(const Superoperator& S) {
  Picture flipped =
      S.picture == Picture::heisenberg ? Picture::schrodinger : Picture::heisenberg;
  return Superoperator(S.mat.adjoint(), S.dim, flipped);
}

Superoperator compose(const Superoperator& a, const Superoperator& b) {
  require(a.dim == b.dim, "compose: dimension mismatch");
  require(a.picture == b.picture, "compose: picture mismatch");
  return Superoperator(a.mat * b.mat, a.dim, a.picture);
}

Superoperator identity_super(int dim, Picture pic) {
  return Superoperator(ComplexMatrix::Identity(dim * dim, dim * dim), dim, pic);
}

Superoperator conjugation_super(const ComplexMatrix& U, Picture pic) {
  const int d = static_cast<int>(U.rows());
  return Superoperator(kron(U.conjugate(), U), d, pic);
}

Superoperator left_mult_super(const ComplexMatrix& H, Picture pic) {
  const int d = static_cast<int>(H.rows());
  return Superoperator(kron(identity_matrix(d), H), d, pic);
}

Superoperator right_mult_super(const ComplexMatrix& H, Picture pic) {
  const int d = static_cast<int>(H.rows());
  return Superoperator(kron(H.transpose(), identity_matrix(d)), d, pic);
}

Superoperator trace_projector_super(int dim, Picture pic) {
  ComplexVector one = vec(identity_matrix(dim));
  ComplexMatrix m = (one * one.adjoint()) / static_cast<double>(dim);
  return Superoperator(std::move(m), dim, pic);
}

double hermiticity_preservation_residual(const Superoperator& S) {
  const int d = S.dim;
  double worst = 0.0;
  auto probe = [&](const ComplexMatrix& B) {
    ComplexMatrix out = apply_super(S, B);
    worst = std::max(worst, (out - out.adjoint()).cwiseAbs().maxCoeff());
  };
  for (int i = 0; i < d; ++i) {
    probe(basis_matrix(i, i, d));
    for (int j = i + 1; j < d; ++j) {
      probe(basis_matrix(i, j, d) + basis_matrix(j, i, d));
      probe(Complex(0, 1) * (basis_matrix(i, j, d) - basis_matrix(j, i, d)));
    }
  }
  return worst;
}

}  // namespace lab
