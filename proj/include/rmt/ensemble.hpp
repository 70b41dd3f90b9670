#ifndef RMT_ENSEMBLE_HPP_
#define RMT_ENSEMBLE_HPP_

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rmt {

template <typename Scalar>
using DenseMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = DenseMatrix<double>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;
using Vector = Eigen::VectorXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Entry laws

struct Rademacher {};
struct StandardGaussian {};
/// Symmetric sign times an exact Pareto(t0, rho) magnitude,
/// t0 = sqrt((rho - 2) / rho) so that the variance is one.
struct SymmetricPareto {
  double rho;
};
/// Values in {0, 1} with P(1) = mu. Not centered.
struct ShiftedBernoulli {
  double mu;
};
struct Constant {
  double value;
};

using EntryDistribution = std::variant<Rademacher, StandardGaussian,
                                       SymmetricPareto, ShiftedBernoulli,
                                       Constant>;

std::string to_string(const EntryDistribution& dist);

/// Scale of the Pareto magnitude giving unit variance.
double pareto_scale(double rho);

/// True for laws whose samples are integers, so exact rank arithmetic applies.
bool is_integer_valued(const EntryDistribution& dist);

/// Deterministic transform of two open uniforms into one draw of the law.
double draw_entry(const EntryDistribution& dist, double u1, double u2);

// ---------------------------------------------------------------------------
// Ensembles

enum class DiagonalPolicy { kIid, kZero };

struct EnsembleSpec {
  int n = 1;
  double p = 1.0;
  EntryDistribution dist = Rademacher{};
  DiagonalPolicy diagonal = DiagonalPolicy::kIid;
  /// Deterministic diagonal added after sampling. Empty means all-zero.
  std::vector<double> shift;
  /// Entries are the raw Bernoulli(p) edge indicators of a directed graph.
  bool adjacency_mode = false;

  /// Throws ParameterError when the invariants do not hold.
  void validate() const;
  double shift_sup_norm() const;
};

/// Directed Erdos-Renyi adjacency ensemble: zero diagonal, Bernoulli(p) edges.
EnsembleSpec directed_er_spec(int n, double p);

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint32_t trial_index = 0;
};

/// Dense sample of A = (xi_ij * delta_ij) + diag(shift).
///
/// Entry (i, j) only depends on (master_seed, trial_index, i * n + j): slot 0
/// of the Philox block decides the Bernoulli mask, slot 1 supplies the value.
/// The dense and sparse samplers produce the same matrix.
Matrix sample_matrix(const EnsembleSpec& spec, const SeedSpec& seed);
SparseMatrix sample_sparse(const EnsembleSpec& spec, const SeedSpec& seed);

/// Same as sample_matrix(spec, seed) without the diagonal shift.
SparseMatrix sample_sparse_unshifted(const EnsembleSpec& spec,
                                     const SeedSpec& seed);

/// Bernoulli mask bit of entry (i, j), consistent with the samplers.
bool mask_bit(const EnsembleSpec& spec, const SeedSpec& seed, int i, int j);

/// True if some row of the Bernoulli mask (diagonal policy respected) is
/// entirely zero. Stops early; touches O(n / p) mask bits on average.
bool mask_has_zero_row(const EnsembleSpec& spec, const SeedSpec& seed);

Matrix sample_directed_er(int n, double p, const SeedSpec& seed);

/// Compressed row view of a dense matrix; keeps exactly the nonzero entries.
SparseMatrix sparse_view(const Matrix& m);

// ---------------------------------------------------------------------------
// Structural transforms

/// floor(n/2) x n matrix whose row i is row i minus row i + floor(n/2).
/// The last row of an odd-sized input is dropped.
Matrix fold_matrix(const Matrix& m);

/// Number of rows with exactly one entry of magnitude >= threshold among the
/// columns J, zeros at the other J columns, and zeros at every J' column.
int pattern_count(const Matrix& m, std::span<const int> cols_j,
                  std::span<const int> cols_jprime, double threshold = 1.0);

}  // namespace rmt

#endif  // RMT_ENSEMBLE_HPP_
