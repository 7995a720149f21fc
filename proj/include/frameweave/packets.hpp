#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace frameweave {

/// Finite family of subspaces W_j ⊆ ℝ^M, each given by spanning columns.
struct FinitePacket {
  int ambient_dim = 0;
  std::vector<Eigen::MatrixXd> spans;  // M × k_j
  std::optional<std::vector<double>> weights;

  /// Throws std::invalid_argument on empty spans, wrong row counts or
  /// non-positive weights.
  void validate() const;
  std::size_t size() const noexcept { return spans.size(); }
};

/// Orthonormal basis of the column span, rank decided at 1e-12 relative.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& span);
/// Orthogonal projection onto the column span.
Eigen::MatrixXd projection(const Eigen::MatrixXd& span);

struct ExpansionResult {
  std::vector<Eigen::VectorXd> components;  // one per subspace
  double residual_norm = 0.0;               // ‖f − Σ f_j‖
};

struct FusionBounds {
  double A = 0.0;
  double B = 0.0;
  bool dense = true;  // exact eigenvalues; otherwise Rayleigh sampling
  int trials = 0;     // Rayleigh quotients drawn (0 when dense)
};

/// Extreme eigenvalues of S = Σ ω_j² P_j: exact for M ≤ 512, else estimated
/// from `trials` random Rayleigh quotients. Throws without weights.
FusionBounds fusion_bounds(const FinitePacket& packet, int trials, std::uint64_t seed);

/// Σ ω_j² P_j as a dense matrix.
Eigen::MatrixXd fusion_operator(const FinitePacket& packet);

/// f_j = ω_j² P_j S⁻¹ f ∈ W_j, which sum to f. Throws NotAFusionFrameError
/// when S is singular.
ExpansionResult fusion_decompose(const FinitePacket& packet, const Eigen::VectorXd& f);

/// W_j = span{f_k : k ∈ σ_j}; frame vectors are the columns of `frame`.
FinitePacket packet_from_frame(const Eigen::MatrixXd& frame,
                               const std::vector<std::vector<int>>& cover);

/// Subspaces T(W_j). Throws std::invalid_argument when cond(T) > 1e12.
FinitePacket map_packet(const FinitePacket& packet, const Eigen::MatrixXd& T);

/// Replaces each W_j by U_j ⊇ W_j. Throws when some W_j ⊄ U_j.
FinitePacket enlarge_packet(const FinitePacket& packet,
                            const std::vector<Eigen::MatrixXd>& supersets);

/// W_j = span{e_1, e_j}, j = 1..M, unit weights.
FinitePacket counterexample_packet(int M);

struct CounterexampleGrowth {
  double value_at_e1 = 0.0;  // Σ_j ‖P_j e_1‖²
  double value_at_ek = 0.0;  // Σ_j ‖P_j e_k‖², k ≥ 2 (all equal)
  double ratio = 0.0;
};
CounterexampleGrowth counterexample_growth(int M);

/// Minimal-norm coefficients on the stacked spanning system, regrouped per
/// subspace. Throws NotAnInformationPacketError when the spans do not fill ℝ^M.
ExpansionResult expand_in_packet(const FinitePacket& packet, const Eigen::VectorXd& f);

/// Random packet: `count` subspaces of dimension `dim` spanned by Gaussian
/// vectors, unit weights.
FinitePacket random_packet(int M, int count, int dim, std::uint64_t seed);

/// Plain-text format: one vector per line, whitespace separated; a blank line
/// ends a subspace; an optional line "weight w" sets the subspace weight
/// (all or none). Lines starting with '#' are ignored.
FinitePacket parse_packet(const std::string& text);
FinitePacket load_packet(const std::string& path);

}  // namespace frameweave
