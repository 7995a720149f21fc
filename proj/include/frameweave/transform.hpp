#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frameweave/frame_core.hpp"
#include "frameweave/weaving.hpp"

namespace frameweave {

using cplx = std::complex<double>;

/// Uniform grid γ_i = lo + i·step, i = 0..size-1.
struct FreqGrid {
  double lo = 0.0;
  double step = 1.0;
  int size = 0;

  double gamma(int i) const noexcept { return lo + step * i; }
  double hi() const noexcept { return gamma(size - 1); }
  /// Trapezoid weight (times step) of node i.
  double weight(int i) const noexcept {
    return (i == 0 || i == size - 1) ? 0.5 * step : step;
  }
  void validate() const;

  /// `intervals` + 1 nodes on [−half_width, half_width].
  static FreqGrid symmetric(double half_width, int intervals);
};

/// 2^14 intervals on [−R a^{N·J_hi}, R a^{N·J_hi}], R the outer radius.
FreqGrid default_grid(const WaveletGenerator& gen, const SystemParams& params, int J_hi,
                      int intervals = 1 << 14);

struct FreqSignal {
  FreqGrid grid;
  std::vector<cplx> values;

  void validate() const;
  /// Trapezoid ∫|f̂|².
  double energy() const;
  double norm() const;

  /// Header "gamma,re,im", one row per node, 17 significant digits.
  std::string to_csv() const;
  /// Requires a uniform grid (relative deviation ≤ 1e-9).
  static FreqSignal from_csv(const std::string& text);
};

/// Σ_m c_m φ(log_a(|γ|/R) − m) on both half-lines, m ∈ [m_lo, m_hi],
/// φ(t) = exp(1 − 1/(4t(1−t))) on (0, 1), c_m complex Gaussian from `seed`.
/// Each bump is smooth and lives inside one multiplicative cell.
FreqSignal random_bump_signal(const FreqGrid& grid, double R, double a, int m_lo, int m_hi,
                              std::uint64_t seed);

/// Spectrum of D_λ T_{kb} ψ, λ = a^(Nj + ℓ_j): λ^(−1/2) ψ̂(γ/λ) e^(−2πi k b γ/λ).
FreqSignal atom_spectrum(const WaveletGenerator& gen, const SystemParams& params,
                         const WeavingPattern& pattern, int j, long k, const FreqGrid& grid);

struct CoefficientRow {
  int j = 0;
  double lambda = 1.0;
  long k_first = 0;
  std::vector<cplx> coeffs;  // k = k_first, k_first + 1, ...
  /// True when k runs over one full discrete period λ/(b·step); the row
  /// energy then equals (1/b)·∫|f̂|²|ψ̂(γ/λ)|² under the same quadrature.
  bool full_period = false;
};

struct CoefficientTable {
  FreqGrid grid;  // of the analysed signal
  IndexRange j_range;
  std::vector<CoefficientRow> rows;
  std::vector<std::string> warnings;

  double energy() const;  // Σ|c|²
};

/// c_{j,k} = ⟨f, D_{λ_j} T_{kb} ψ⟩ by trapezoid quadrature on f's grid.
/// Without k_range every row uses one full discrete period of k.
CoefficientTable analysis(const WaveletGenerator& gen, const SystemParams& params,
                          const WeavingPattern& pattern, const FreqSignal& f, IndexRange j_range,
                          std::optional<std::pair<long, long>> k_range = std::nullopt);

/// Σ c_{j,k} D_{λ_j} T_{kb} ψ sampled on `grid`.
FreqSignal synthesis(const WaveletGenerator& gen, const SystemParams& params,
                     const WeavingPattern& pattern, const CoefficientTable& table,
                     const FreqGrid& grid);

/// Full multiplier m(γ_i), truncated as in frame_bounds.
std::vector<double> multiplier_on_grid(const WaveletGenerator& gen, const SystemParams& params,
                                       const WeavingPattern& pattern, const FreqGrid& grid);
/// (1/b) Σ_{j∈j_range} |ψ̂(γ_i/λ_j)|².
std::vector<double> truncated_multiplier(const WaveletGenerator& gen, const SystemParams& params,
                                         const WeavingPattern& pattern, const FreqGrid& grid,
                                         IndexRange j_range);

/// Rows whose atom spectra fit inside the grid and meet the support of f.
IndexRange fitting_rows(const WaveletGenerator& gen, const SystemParams& params,
                        const WeavingPattern& pattern, const FreqSignal& f);

enum class ApplyMode {
  Pointwise,     // S f̂ = m·f̂
  Coefficients,  // S f = synthesis(analysis(f)) over fitting_rows; inverted with m_J
};

struct ReconstructResult {
  FreqSignal signal;
  double relative_error = 0.0;
  double min_multiplier_on_support = 0.0;
  IndexRange j_range;  // Coefficients mode only
};

/// Applies S and then S⁻¹ (division by the multiplier). Throws
/// PreconditionError outside the painless range and NotInvertibleError when
/// the multiplier is not above the tail bound on the support of f.
ReconstructResult reconstruct_painless(const WaveletGenerator& gen, const SystemParams& params,
                                       const WeavingPattern& pattern, const FreqSignal& f,
                                       ApplyMode mode = ApplyMode::Pointwise);

struct ErasureReport {
  std::vector<int> erased;
  std::optional<int> erased_period;
  WeavingPattern mixed = WeavingPattern::constant(1, 0);
  double relative_error = 0.0;
  BoundsCertificate bounds;       // of the mixed system
  WeaveCertificate certificate;
  double tolerance = 0.0;
  bool within_certificate = false;
};

/// Family 0 everywhere except at the erased indices j, which switch to
/// fallback.choice(j) (which must not be 0). With `erased_period` the erased
/// indices are residues modulo that period and the mixed pattern is periodic.
ErasureReport erasure_experiment(const WaveletGenerator& gen, const SystemParams& params,
                                 const FreqSignal& f, const std::vector<int>& erased,
                                 const WeavingPattern& fallback,
                                 std::optional<int> erased_period = std::nullopt,
                                 int grid_points = 4096);

struct GramEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int iterations_max = 0;
  int iterations_min = 0;
};

/// Gram matrix G_pq = ⟨φ_q, φ_p⟩ by quadrature on the atoms' common grid.
/// λ_max by power iteration, λ_min by inverse iteration on G + δI (δ = 1e-3
/// λ_max, so singular G is fine); both stop when the Rayleigh quotient moves
/// by ≤ tol relative. Throws ConvergenceError after max_iter.
GramEstimate gram_oracle(const std::vector<FreqSignal>& atoms, double tol = 1e-8,
                         int max_iter = 10000, std::uint64_t seed = 1);

/// Extreme eigenvalues of the section's frame operator compressed to span(basis):
/// ⟨S u, u⟩ over unit u in that span. Grows with the section (Loewner order).
std::pair<double, double> frame_operator_oracle(const std::vector<FreqSignal>& atoms,
                                                const std::vector<FreqSignal>& basis);

/// Atoms for j ∈ j_range, k ∈ [k_lo, k_hi]. Throws when the k range is longer
/// than some row's discrete period λ/(b·step), where sampled atoms repeat.
std::vector<FreqSignal> section_atoms(const WaveletGenerator& gen, const SystemParams& params,
                                      const WeavingPattern& pattern, IndexRange j_range,
                                      long k_lo, long k_hi, const FreqGrid& grid);

struct IterationResult {
  FreqSignal signal;
  int iterations = 0;
  std::vector<double> residuals;  // relative ‖f − S h‖/‖f‖, starting with h = 0
};

using FrameOperator = std::function<FreqSignal(const FreqSignal&)>;

/// h ← h + (2/(A+B))(f − S h) until the relative residual is ≤ tol.
IterationResult frame_iteration(const FrameOperator& apply_S, const FreqSignal& f, double A,
                                double B, double tol, int max_iter);

}  // namespace frameweave
