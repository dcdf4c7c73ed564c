#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qaoamps/problems.hpp"

namespace qaoamps {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct ZeroMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroProbabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SizeLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rank-3 site tensor stored as one left_dim x right_dim matrix per physical
/// index. Physical dimension is always 2.
struct SiteTensor {
  std::array<Matrix, 2> m;

  Eigen::Index left_dim() const { return m[0].rows(); }
  Eigen::Index right_dim() const { return m[0].cols(); }
  double squared_frob() const {
    return m[0].squaredNorm() + m[1].squaredNorm();
  }
};

struct TruncationReport {
  long gate_index = -1;
  int bond_index = 0;
  int kept_rank = 0;
  double discarded_weight = 0.0;  // dropped sum(l^2) / total sum(l^2)
};

struct TruncatedSvd {
  Matrix u;                          // orthonormal columns
  Eigen::VectorXd singular_values;   // descending, kept part only
  Matrix v_adjoint;                  // orthonormal rows
  double discarded_weight = 0.0;
};

/// Thin SVD keeping at most bond_cap singular values and dropping those with
/// relative squared weight <= sv_cutoff. At least one value is always kept.
TruncatedSvd truncated_svd(const Matrix& m, int bond_cap, double sv_cutoff);

/// Whether a truncation repays the discarded weight by rescaling the kept
/// singular values (kNormalized) or leaves the state norm reduced
/// (kNonNormalized, recording accumulated loss in the norm itself).
enum class NormMode { kNonNormalized, kNormalized };

/// Matrix product state of an n-qubit chain in mixed-canonical form: sites
/// left of the orthogonality center are left-isometric, sites right of it
/// are right-isometric, and the global amplitude factor norm_scalar times
/// the plain tensor contraction reproduces the state.
class MpsState {
 public:
  static MpsState plus_state(int n, int bond_cap, double sv_cutoff = 1e-12,
                             NormMode mode = NormMode::kNonNormalized);
  static MpsState basis_state(const Bitstring& bits, int bond_cap,
                              double sv_cutoff = 1e-12,
                              NormMode mode = NormMode::kNonNormalized);
  /// Builds a state from raw per-site matrices (validated for consistent
  /// bond dimensions); the result is canonicalized to center 0.
  static MpsState from_site_matrices(std::vector<SiteTensor> sites,
                                     int bond_cap, double sv_cutoff = 1e-12,
                                     NormMode mode = NormMode::kNonNormalized);

  int n() const { return static_cast<int>(sites_.size()); }
  int ortho_center() const { return center_; }
  Complex norm_scalar() const { return norm_scalar_; }
  int bond_cap() const { return bond_cap_; }
  double sv_cutoff() const { return sv_cutoff_; }
  NormMode mode() const { return mode_; }
  double cum_discarded() const { return cum_discarded_; }
  const SiteTensor& site(int k) const { return sites_.at(k); }

  /// Bond k sits between sites k and k+1, k in [0, n-2].
  int bond_dim(int k) const;
  std::vector<int> bond_dims() const;
  int max_bond_dim() const;

  double norm() const;
  double squared_norm() const;
  void scale(Complex factor) { norm_scalar_ *= factor; }

  /// Single-qubit gate on site k. Unitarity is checked to 1e-10 unless
  /// allow_non_unitary is set, in which case the center moves to k first so
  /// the canonical structure survives.
  void apply_1q(const Eigen::Matrix2cd& u, int k,
                bool allow_non_unitary = false);

  /// Two-qubit gate on adjacent sites (j, j+1). Moves the center into the
  /// pair, contracts, and splits with truncated_svd under the state's bond
  /// cap and cutoff. The center ends on site j+1.
  TruncationReport apply_2q(const Eigen::Matrix4cd& g, int j);

  /// Moves the orthogonality center and pulls the global magnitude out of
  /// the center tensor into norm_scalar.
  void canonicalize(int center);

  /// Probability of `outcome` on qubit k from the single-site reduced
  /// density matrix; the state collapses to that branch and is renormalized
  /// to unit norm. Throws ZeroProbabilityError below 1e-14.
  double project_qubit(int k, int outcome);

  /// Relabels the chain end-to-end (qubit k becomes qubit n-1-k).
  void reverse();

  Vector to_statevector() const;  // n <= 20
  Complex amplitude(const Bitstring& bits) const;

  /// Expectations of the spin observable diag(-1,+1) (z = 2s - 1), divided
  /// by <psi|psi>.
  double expect_z(int i) const;
  double expect_zz(int i, int j) const;

  enum class ExpectationMode { kNormalized, kRaw };
  /// constant + sum h<Z> + sum J<ZZ>; kNormalized divides by <psi|psi>,
  /// kRaw evaluates the raw bilinear form including the state norm.
  double expect_ising(const IsingModel& model, ExpectationMode emode) const;

  /// Von Neumann entropy (base 2) of the Schmidt spectrum at bond k; moves
  /// the orthogonality center next to the bond.
  double entanglement_entropy(int bond);

 private:
  MpsState() = default;
  void move_center_right();
  void move_center_left();
  void check_site(int k) const;

  std::vector<SiteTensor> sites_;
  int center_ = 0;
  Complex norm_scalar_{1.0, 0.0};
  int bond_cap_ = 1;
  double sv_cutoff_ = 1e-12;
  NormMode mode_ = NormMode::kNonNormalized;
  double cum_discarded_ = 0.0;
};

Complex inner(const MpsState& a, const MpsState& b);

/// |<a|b>|^2 / (<a|a><b|b>): insensitive to normalization so truncated
/// non-normalized states compare directly against exact ones.
double fidelity(const MpsState& a, const MpsState& b);

}  // namespace qaoamps
