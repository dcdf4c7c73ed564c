#include "qaoamps/mps.hpp"

#include <algorithm>
#include <cmath>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace qaoamps {

namespace {

constexpr double kZeroProbabilityThreshold = 1e-14;
constexpr double kUnitaryTolerance = 1e-10;

struct FullSvd {
  Matrix u;
  Eigen::VectorXd s;
  Matrix vt;
};

// zgesdd with zgesvd fallback; Jacobi for small blocks where LAPACK call
// overhead dominates.
FullSvd full_svd(const Matrix& m) {
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  FullSvd out;

  if (std::max(rows, cols) <= 8) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = svd.matrixU();
    out.s = svd.singularValues();
    out.vt = svd.matrixV().adjoint();
    return out;
  }

  Matrix a = m;
  out.u.resize(rows, k);
  out.s.resize(k);
  out.vt.resize(k, cols);
  lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', rows, cols, a.data(), rows,
                     out.s.data(), out.u.data(), rows, out.vt.data(), k);
  if (info != 0) {
    a = m;
    Eigen::VectorXd superb(std::max<lapack_int>(1, k - 1));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', rows, cols, a.data(),
                          rows, out.s.data(), out.u.data(), rows,
                          out.vt.data(), k, superb.data());
  }
  if (info != 0) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = svd.matrixU();
    out.s = svd.singularValues();
    out.vt = svd.matrixV().adjoint();
  }
  return out;
}

Eigen::VectorXd singular_values_only(const Matrix& m) {
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  Matrix a = m;
  Eigen::VectorXd s(k);
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, a.data(),
                                   rows, s.data(), nullptr, rows, nullptr, k);
  if (info != 0) {
    Eigen::JacobiSVD<Matrix> svd(m);
    s = svd.singularValues();
  }
  return s;
}

// Thin QR; q gets orthonormal columns, r is upper trapezoidal.
void thin_qr(const Matrix& m, Matrix& q, Matrix& r) {
  const Eigen::Index k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Matrix> qr(m);
  q = qr.householderQ() * Matrix::Identity(m.rows(), k);
  r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
}

bool is_unitary(const Matrix& u, double tol) {
  return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols()))
             .cwiseAbs()
             .maxCoeff() <= tol;
}

Matrix transfer_identity(const Matrix& env, const SiteTensor& a) {
  return a.m[0].adjoint() * env * a.m[0] + a.m[1].adjoint() * env * a.m[1];
}

// Spin observable diag(-1,+1): z(0) = -1, z(1) = +1.
Matrix transfer_z(const Matrix& env, const SiteTensor& a) {
  return a.m[1].adjoint() * env * a.m[1] - a.m[0].adjoint() * env * a.m[0];
}

Matrix right_env_step(const Matrix& env, const SiteTensor& a) {
  return a.m[0].conjugate() * env * a.m[0].transpose() +
         a.m[1].conjugate() * env * a.m[1].transpose();
}

Complex close_envs(const Matrix& left, const Matrix& right) {
  return left.cwiseProduct(right).sum();
}

}  // namespace

TruncatedSvd truncated_svd(const Matrix& m, int bond_cap, double sv_cutoff) {
  if (bond_cap < 1) throw std::invalid_argument("bond cap must be >= 1");
  if (sv_cutoff < 0.0) throw std::invalid_argument("cutoff must be >= 0");
  if (!m.allFinite())
    throw std::invalid_argument("truncated_svd requires a finite matrix");

  FullSvd svd = full_svd(m);
  const double total = svd.s.squaredNorm();
  if (total <= 0.0)
    throw ZeroMatrixError("truncated_svd on an all-zero matrix");

  const Eigen::Index available = svd.s.size();
  Eigen::Index kept = 0;
  for (Eigen::Index i = 0; i < available; ++i) {
    if (svd.s[i] * svd.s[i] > sv_cutoff * total) ++kept;
  }
  kept = std::min<Eigen::Index>(kept, bond_cap);
  if (kept < 1) kept = 1;

  TruncatedSvd out;
  out.u = svd.u.leftCols(kept);
  out.singular_values = svd.s.head(kept);
  out.v_adjoint = svd.vt.topRows(kept);
  out.discarded_weight =
      1.0 - out.singular_values.squaredNorm() / total;
  if (out.discarded_weight < 0.0) out.discarded_weight = 0.0;
  return out;
}

MpsState MpsState::plus_state(int n, int bond_cap, double sv_cutoff,
                              NormMode mode) {
  if (n < 1) throw std::invalid_argument("plus_state requires n >= 1");
  if (bond_cap < 1) throw std::invalid_argument("bond cap must be >= 1");
  MpsState state;
  state.bond_cap_ = bond_cap;
  state.sv_cutoff_ = sv_cutoff;
  state.mode_ = mode;
  const double amp = 1.0 / std::sqrt(2.0);
  SiteTensor site;
  site.m[0] = Matrix::Constant(1, 1, amp);
  site.m[1] = Matrix::Constant(1, 1, amp);
  state.sites_.assign(n, site);
  state.center_ = 0;
  return state;
}

MpsState MpsState::basis_state(const Bitstring& bits, int bond_cap,
                               double sv_cutoff, NormMode mode) {
  if (bits.empty()) throw std::invalid_argument("basis_state requires n >= 1");
  MpsState state;
  state.bond_cap_ = bond_cap;
  state.sv_cutoff_ = sv_cutoff;
  state.mode_ = mode;
  state.sites_.resize(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    state.sites_[k].m[0] = Matrix::Constant(1, 1, bits[k] ? 0.0 : 1.0);
    state.sites_[k].m[1] = Matrix::Constant(1, 1, bits[k] ? 1.0 : 0.0);
  }
  state.center_ = 0;
  return state;
}

MpsState MpsState::from_site_matrices(std::vector<SiteTensor> sites,
                                      int bond_cap, double sv_cutoff,
                                      NormMode mode) {
  if (sites.empty())
    throw std::invalid_argument("from_site_matrices requires n >= 1");
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const auto& s = sites[k];
    if (s.m[0].rows() != s.m[1].rows() || s.m[0].cols() != s.m[1].cols())
      throw std::invalid_argument("physical slices must share dimensions");
    if (k == 0 && s.m[0].rows() != 1)
      throw std::invalid_argument("first site must have left dimension 1");
    if (k + 1 == sites.size() && s.m[0].cols() != 1)
      throw std::invalid_argument("last site must have right dimension 1");
    if (k > 0 && sites[k - 1].m[0].cols() != s.m[0].rows())
      throw std::invalid_argument("bond dimensions must chain consistently");
  }
  MpsState state;
  state.sites_ = std::move(sites);
  state.bond_cap_ = bond_cap;
  state.sv_cutoff_ = sv_cutoff;
  state.mode_ = mode;
  state.center_ = state.n() - 1;
  state.canonicalize(0);
  return state;
}

int MpsState::bond_dim(int k) const {
  if (k < 0 || k >= n() - 1) throw std::out_of_range("bond index out of range");
  return static_cast<int>(sites_[k].right_dim());
}

std::vector<int> MpsState::bond_dims() const {
  std::vector<int> dims;
  dims.reserve(std::max(0, n() - 1));
  for (int k = 0; k + 1 < n(); ++k)
    dims.push_back(static_cast<int>(sites_[k].right_dim()));
  return dims;
}

int MpsState::max_bond_dim() const {
  int d = 1;
  for (int k = 0; k + 1 < n(); ++k)
    d = std::max(d, static_cast<int>(sites_[k].right_dim()));
  return d;
}

double MpsState::squared_norm() const {
  return std::norm(norm_scalar_) * sites_[center_].squared_frob();
}

double MpsState::norm() const { return std::sqrt(squared_norm()); }

void MpsState::check_site(int k) const {
  if (k < 0 || k >= n()) throw std::out_of_range("site index out of range");
}

void MpsState::move_center_right() {
  SiteTensor& a = sites_[center_];
  const Eigen::Index dl = a.left_dim();
  const Eigen::Index dr = a.right_dim();
  Matrix m(2 * dl, dr);
  m.topRows(dl) = a.m[0];
  m.bottomRows(dl) = a.m[1];
  Matrix q, r;
  thin_qr(m, q, r);
  a.m[0] = q.topRows(dl);
  a.m[1] = q.bottomRows(dl);
  SiteTensor& b = sites_[center_ + 1];
  b.m[0] = r * b.m[0];
  b.m[1] = r * b.m[1];
  ++center_;
}

void MpsState::move_center_left() {
  SiteTensor& a = sites_[center_];
  const Eigen::Index dl = a.left_dim();
  const Eigen::Index dr = a.right_dim();
  Matrix m(dl, 2 * dr);
  m.leftCols(dr) = a.m[0];
  m.rightCols(dr) = a.m[1];
  Matrix q, r;
  thin_qr(m.adjoint(), q, r);  // m = r^H q^H
  Matrix qh = q.adjoint();
  a.m[0] = qh.leftCols(dr);
  a.m[1] = qh.rightCols(dr);
  SiteTensor& b = sites_[center_ - 1];
  Matrix rh = r.adjoint();
  b.m[0] = b.m[0] * rh;
  b.m[1] = b.m[1] * rh;
  --center_;
}

void MpsState::canonicalize(int center) {
  check_site(center);
  while (center_ < center) move_center_right();
  while (center_ > center) move_center_left();
  const double nrm = std::sqrt(sites_[center_].squared_frob());
  if (nrm > 0.0) {
    sites_[center_].m[0] /= nrm;
    sites_[center_].m[1] /= nrm;
    norm_scalar_ *= nrm;
  } else {
    norm_scalar_ = 0.0;
  }
}

void MpsState::apply_1q(const Eigen::Matrix2cd& u, int k,
                        bool allow_non_unitary) {
  check_site(k);
  if (!allow_non_unitary) {
    if (!is_unitary(u, kUnitaryTolerance))
      throw std::invalid_argument(
          "apply_1q requires a unitary matrix (pass allow_non_unitary to "
          "override)");
  } else {
    while (center_ < k) move_center_right();
    while (center_ > k) move_center_left();
  }
  SiteTensor& a = sites_[k];
  Matrix b0 = u(0, 0) * a.m[0] + u(0, 1) * a.m[1];
  Matrix b1 = u(1, 0) * a.m[0] + u(1, 1) * a.m[1];
  a.m[0] = std::move(b0);
  a.m[1] = std::move(b1);
}

TruncationReport MpsState::apply_2q(const Eigen::Matrix4cd& g, int j) {
  if (j < 0 || j + 1 >= n())
    throw std::out_of_range("two-qubit gate site out of range");
  if (!is_unitary(g, kUnitaryTolerance))
    throw std::invalid_argument("apply_2q requires a unitary matrix");

  while (center_ < j) move_center_right();
  while (center_ > j + 1) move_center_left();

  const SiteTensor& a = sites_[j];
  const SiteTensor& b = sites_[j + 1];
  const Eigen::Index dl = a.left_dim();
  const Eigen::Index dr = b.right_dim();

  std::array<Matrix, 4> pair;  // pair[s*2+t] = A^s B^t
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t) pair[s * 2 + t] = a.m[s] * b.m[t];

  Matrix theta(2 * dl, 2 * dr);
  for (int sp = 0; sp < 2; ++sp) {
    for (int tp = 0; tp < 2; ++tp) {
      Matrix block = Matrix::Zero(dl, dr);
      for (int in = 0; in < 4; ++in) {
        const Complex coeff = g(sp * 2 + tp, in);
        if (coeff != Complex(0.0, 0.0)) block += coeff * pair[in];
      }
      theta.block(sp * dl, tp * dr, dl, dr) = std::move(block);
    }
  }

  TruncatedSvd svd = truncated_svd(theta, bond_cap_, sv_cutoff_);
  Eigen::VectorXd values = svd.singular_values;
  if (mode_ == NormMode::kNormalized && svd.discarded_weight > 0.0)
    values *= 1.0 / std::sqrt(1.0 - svd.discarded_weight);

  SiteTensor& left = sites_[j];
  left.m[0] = svd.u.topRows(dl);
  left.m[1] = svd.u.bottomRows(dl);
  Matrix w = values.asDiagonal() * svd.v_adjoint;
  SiteTensor& right = sites_[j + 1];
  right.m[0] = w.leftCols(dr);
  right.m[1] = w.rightCols(dr);
  center_ = j + 1;
  cum_discarded_ += svd.discarded_weight;

  TruncationReport report;
  report.bond_index = j;
  report.kept_rank = static_cast<int>(values.size());
  report.discarded_weight = svd.discarded_weight;
  return report;
}

double MpsState::project_qubit(int k, int outcome) {
  check_site(k);
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("outcome must be 0 or 1");
  while (center_ < k) move_center_right();
  while (center_ > k) move_center_left();

  SiteTensor& a = sites_[k];
  const double w0 = a.m[0].squaredNorm();
  const double w1 = a.m[1].squaredNorm();
  const double total = w0 + w1;
  if (total <= 0.0)
    throw DegenerateStateError("cannot project a zero-norm state");
  const double prob = (outcome == 0 ? w0 : w1) / total;
  if (prob < kZeroProbabilityThreshold)
    throw ZeroProbabilityError("projection onto a zero-probability branch");

  const double kept = outcome == 0 ? w0 : w1;
  a.m[1 - outcome].setZero();
  a.m[outcome] /= std::sqrt(kept);
  norm_scalar_ = 1.0;
  return prob;
}

void MpsState::reverse() {
  std::reverse(sites_.begin(), sites_.end());
  for (auto& site : sites_) {
    site.m[0] = site.m[0].transpose().eval();
    site.m[1] = site.m[1].transpose().eval();
  }
  center_ = n() - 1 - center_;
}

Vector MpsState::to_statevector() const {
  if (n() > 20)
    throw SizeLimitError("to_statevector supports at most 20 qubits");
  Matrix cur = Matrix::Ones(1, 1);
  for (int k = 0; k < n(); ++k) {
    const SiteTensor& a = sites_[k];
    const Eigen::Index rows = cur.rows();
    Matrix next(2 * rows, a.right_dim());
    Matrix block0 = cur * a.m[0];
    Matrix block1 = cur * a.m[1];
    for (Eigen::Index x = 0; x < rows; ++x) {
      next.row(2 * x) = block0.row(x);
      next.row(2 * x + 1) = block1.row(x);
    }
    cur = std::move(next);
  }
  return norm_scalar_ * cur.col(0);
}

Complex MpsState::amplitude(const Bitstring& bits) const {
  if (static_cast<int>(bits.size()) != n())
    throw std::invalid_argument("bitstring length does not match state");
  Matrix cur = Matrix::Ones(1, 1);
  for (int k = 0; k < n(); ++k) cur = cur * sites_[k].m[bits[k]];
  return norm_scalar_ * cur(0, 0);
}

double MpsState::expect_z(int i) const {
  check_site(i);
  Matrix env = Matrix::Ones(1, 1);
  for (int k = 0; k < i; ++k) env = transfer_identity(env, sites_[k]);
  Matrix right = Matrix::Ones(1, 1);
  for (int k = n() - 1; k > i; --k) right = right_env_step(right, sites_[k]);
  const Complex val = close_envs(transfer_z(env, sites_[i]), right);
  const Complex nrm = close_envs(transfer_identity(env, sites_[i]), right);
  if (std::abs(nrm) <= 0.0)
    throw DegenerateStateError("expectation of a zero-norm state");
  return (val / nrm).real();
}

double MpsState::expect_zz(int i, int j) const {
  check_site(i);
  check_site(j);
  if (i == j) throw std::out_of_range("expect_zz requires distinct sites");
  if (i > j) std::swap(i, j);
  Matrix env = Matrix::Ones(1, 1);
  for (int k = 0; k < i; ++k) env = transfer_identity(env, sites_[k]);
  Matrix right = Matrix::Ones(1, 1);
  for (int k = n() - 1; k > j; --k) right = right_env_step(right, sites_[k]);

  Matrix flagged = transfer_z(env, sites_[i]);
  Matrix plain = transfer_identity(env, sites_[i]);
  for (int k = i + 1; k < j; ++k) {
    flagged = transfer_identity(flagged, sites_[k]);
    plain = transfer_identity(plain, sites_[k]);
  }
  const Complex val = close_envs(transfer_z(flagged, sites_[j]), right);
  const Complex nrm = close_envs(transfer_identity(plain, sites_[j]), right);
  if (std::abs(nrm) <= 0.0)
    throw DegenerateStateError("expectation of a zero-norm state");
  return (val / nrm).real();
}

double MpsState::expect_ising(const IsingModel& model,
                              ExpectationMode emode) const {
  if (model.n != n())
    throw std::invalid_argument("model size does not match state");

  // Right identity environments R[k] for the chain suffix starting at k.
  std::vector<Matrix> right(n() + 1);
  right[n()] = Matrix::Ones(1, 1);
  for (int k = n() - 1; k >= 0; --k)
    right[k] = right_env_step(right[k + 1], sites_[k]);
  const Complex nrm_rel = right[0](0, 0);
  if (std::abs(nrm_rel) <= 0.0)
    throw DegenerateStateError("expectation of a zero-norm state");

  // Largest coupled partner per left index, for early walk termination.
  std::vector<int> reach(n(), -1);
  for (const auto& [pair, j] : model.J) {
    if (j != 0.0) reach[pair.first] = std::max(reach[pair.first], pair.second);
  }

  Complex accum = 0.0;
  Matrix env = Matrix::Ones(1, 1);
  for (int i = 0; i < n(); ++i) {
    const bool has_field = model.h[i] != 0.0;
    if (has_field || reach[i] >= 0) {
      Matrix flagged = transfer_z(env, sites_[i]);
      if (has_field)
        accum += model.h[i] * close_envs(flagged, right[i + 1]);
      for (int k = i + 1; k <= reach[i]; ++k) {
        const double j = model.coupling(i, k);
        if (j != 0.0)
          accum += j * close_envs(transfer_z(flagged, sites_[k]), right[k + 1]);
        if (k < reach[i]) flagged = transfer_identity(flagged, sites_[k]);
      }
    }
    if (i + 1 < n()) env = transfer_identity(env, sites_[i]);
  }

  if (emode == ExpectationMode::kNormalized)
    return model.constant + (accum / nrm_rel).real();
  const double scale = std::norm(norm_scalar_);
  return scale * (model.constant * nrm_rel + accum).real();
}

double MpsState::entanglement_entropy(int bond) {
  if (bond < 0 || bond >= n() - 1)
    throw std::out_of_range("bond index out of range");
  canonicalize(bond);
  const SiteTensor& a = sites_[bond];
  const Eigen::Index dl = a.left_dim();
  Matrix m(2 * dl, a.right_dim());
  m.topRows(dl) = a.m[0];
  m.bottomRows(dl) = a.m[1];
  Eigen::VectorXd values = singular_values_only(m);
  const double total = values.squaredNorm();
  if (total <= 0.0)
    throw DegenerateStateError("entropy of a zero-norm state");
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double p = values[i] * values[i] / total;
    if (p > 0.0) entropy -= p * std::log2(p);
  }
  return entropy;
}

Complex inner(const MpsState& a, const MpsState& b) {
  if (a.n() != b.n())
    throw std::invalid_argument("inner requires equal qubit counts");
  Matrix env = Matrix::Ones(1, 1);
  for (int k = 0; k < a.n(); ++k) {
    const SiteTensor& sa = a.site(k);
    const SiteTensor& sb = b.site(k);
    env = sa.m[0].adjoint() * env * sb.m[0] +
          sa.m[1].adjoint() * env * sb.m[1];
  }
  return std::conj(a.norm_scalar()) * b.norm_scalar() * env(0, 0);
}

double fidelity(const MpsState& a, const MpsState& b) {
  const double na = a.squared_norm();
  const double nb = b.squared_norm();
  if (na <= 0.0 || nb <= 0.0)
    throw DegenerateStateError("fidelity of a zero-norm state");
  const double overlap = std::norm(inner(a, b));
  return std::clamp(overlap / (na * nb), 0.0, 1.0);
}

}  // namespace qaoamps
