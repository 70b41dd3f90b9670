#include "rmt/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rmt/errors.hpp"
#include "rmt/random.hpp"

namespace rmt {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::uint32_t kMaskSlot = 0;
constexpr std::uint32_t kValueSlot = 1;

struct EntrySampler {
  const EnsembleSpec& spec;
  CounterStream stream;

  bool mask(int i, int j) const {
    if (i == j && spec.diagonal == DiagonalPolicy::kZero) return false;
    if (spec.p >= 1.0) return true;
    if (spec.p <= 0.0) return false;
    const auto b = stream.block(linear(i, j), kMaskSlot);
    return to_unit_closed_open(b[0], b[1]) < spec.p;
  }

  double value(int i, int j) const {
    if (spec.adjacency_mode) return 1.0;
    const auto [u1, u2] = stream.uniform_pair(linear(i, j), kValueSlot);
    return draw_entry(spec.dist, u1, u2);
  }

  std::uint64_t linear(int i, int j) const {
    return static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(spec.n) +
           static_cast<std::uint64_t>(j);
  }

  template <typename Emit>
  void for_each_row(int i, Emit&& emit) const {
    for (int j = 0; j < spec.n; ++j) {
      if (!mask(i, j)) continue;
      const double v = value(i, j);
      if (v != 0.0) emit(j, v);
    }
  }
};

double shift_at(const EnsembleSpec& spec, int i) {
  return spec.shift.empty() ? 0.0 : spec.shift[static_cast<std::size_t>(i)];
}

SparseMatrix sample_sparse_impl(const EnsembleSpec& spec, const SeedSpec& seed,
                                bool with_shift) {
  spec.validate();
  const EntrySampler sampler{spec, CounterStream(seed.master_seed,
                                                 seed.trial_index)};
  const int n = spec.n;
  SparseMatrix m(n, n);
  std::vector<std::int64_t> row_nnz(static_cast<std::size_t>(n));
  std::vector<std::pair<int, double>> row;
  std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
  triplets.reserve(static_cast<std::size_t>(
      std::min<double>(1.2 * spec.p * n * n + n + 16, 1e8)));
  for (int i = 0; i < n; ++i) {
    row.clear();
    sampler.for_each_row(i, [&](int j, double v) { row.emplace_back(j, v); });
    const double s = with_shift ? shift_at(spec, i) : 0.0;
    if (s != 0.0) {
      auto it = std::find_if(row.begin(), row.end(),
                             [i](const auto& e) { return e.first >= i; });
      if (it != row.end() && it->first == i) {
        it->second += s;
      } else {
        row.insert(it, {i, s});
      }
    }
    for (const auto& [j, v] : row) {
      if (v != 0.0) triplets.emplace_back(i, j, v);
    }
  }
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

std::string to_string(const EntryDistribution& dist) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const Rademacher&) { os << "rademacher"; },
                 [&](const StandardGaussian&) { os << "gaussian"; },
                 [&](const SymmetricPareto& d) { os << "pareto(" << d.rho << ")"; },
                 [&](const ShiftedBernoulli& d) { os << "bernoulli(" << d.mu << ")"; },
                 [&](const Constant& d) { os << "constant(" << d.value << ")"; },
             },
             dist);
  return os.str();
}

double pareto_scale(double rho) { return std::sqrt((rho - 2.0) / rho); }

bool is_integer_valued(const EntryDistribution& dist) {
  return std::visit(
      Overloaded{
          [](const Rademacher&) { return true; },
          [](const ShiftedBernoulli&) { return true; },
          [](const Constant& d) { return std::nearbyint(d.value) == d.value; },
          [](const auto&) { return false; },
      },
      dist);
}

double draw_entry(const EntryDistribution& dist, double u1, double u2) {
  return std::visit(
      Overloaded{
          [&](const Rademacher&) { return u1 < 0.5 ? -1.0 : 1.0; },
          [&](const StandardGaussian&) {
            return std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * std::numbers::pi * u2);
          },
          [&](const SymmetricPareto& d) {
            // Inverse CDF of P(|xi| > t) = (t / t0)^-rho.
            const double magnitude = pareto_scale(d.rho) * std::pow(u1, -1.0 / d.rho);
            return u2 < 0.5 ? -magnitude : magnitude;
          },
          [&](const ShiftedBernoulli& d) { return u1 < d.mu ? 1.0 : 0.0; },
          [&](const Constant& d) { return d.value; },
      },
      dist);
}

void EnsembleSpec::validate() const {
  if (n < 1) throw ParameterError("ensemble: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError("ensemble: p must lie in [0, 1]");
  }
  if (const auto* d = std::get_if<SymmetricPareto>(&dist)) {
    if (!(d->rho > 2.0)) {
      throw ParameterError("ensemble: pareto tail exponent must exceed 2");
    }
  }
  if (const auto* d = std::get_if<ShiftedBernoulli>(&dist)) {
    if (!(d->mu > 0.0 && d->mu < 1.0)) {
      throw ParameterError("ensemble: bernoulli mean must lie in (0, 1)");
    }
  }
  if (const auto* d = std::get_if<Constant>(&dist)) {
    if (!std::isfinite(d->value)) {
      throw ParameterError("ensemble: constant value must be finite");
    }
  }
  if (!shift.empty() && shift.size() != static_cast<std::size_t>(n)) {
    throw ParameterError("ensemble: shift must have n entries");
  }
  for (double s : shift) {
    if (!std::isfinite(s)) throw ParameterError("ensemble: shift must be finite");
  }
  if (adjacency_mode) {
    if (diagonal != DiagonalPolicy::kZero) {
      throw ParameterError("ensemble: adjacency mode requires a zero diagonal");
    }
    if (!std::holds_alternative<ShiftedBernoulli>(dist)) {
      throw ParameterError("ensemble: adjacency mode requires bernoulli entries");
    }
  }
}

double EnsembleSpec::shift_sup_norm() const {
  double r = 0.0;
  for (double s : shift) r = std::max(r, std::abs(s));
  return r;
}

EnsembleSpec directed_er_spec(int n, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ParameterError("directed ER: p must lie in (0, 1)");
  }
  EnsembleSpec spec;
  spec.n = n;
  spec.p = p;
  spec.dist = ShiftedBernoulli{p};
  spec.diagonal = DiagonalPolicy::kZero;
  spec.adjacency_mode = true;
  return spec;
}

Matrix sample_matrix(const EnsembleSpec& spec, const SeedSpec& seed) {
  spec.validate();
  const EntrySampler sampler{spec, CounterStream(seed.master_seed,
                                                 seed.trial_index)};
  Matrix m = Matrix::Zero(spec.n, spec.n);
  for (int i = 0; i < spec.n; ++i) {
    sampler.for_each_row(i, [&](int j, double v) { m(i, j) = v; });
  }
  for (int i = 0; i < spec.n; ++i) m(i, i) += shift_at(spec, i);
  return m;
}

SparseMatrix sample_sparse(const EnsembleSpec& spec, const SeedSpec& seed) {
  return sample_sparse_impl(spec, seed, true);
}

SparseMatrix sample_sparse_unshifted(const EnsembleSpec& spec,
                                     const SeedSpec& seed) {
  return sample_sparse_impl(spec, seed, false);
}

bool mask_bit(const EnsembleSpec& spec, const SeedSpec& seed, int i, int j) {
  const EntrySampler sampler{spec, CounterStream(seed.master_seed,
                                                 seed.trial_index)};
  return sampler.mask(i, j);
}

bool mask_has_zero_row(const EnsembleSpec& spec, const SeedSpec& seed) {
  spec.validate();
  const EntrySampler sampler{spec, CounterStream(seed.master_seed,
                                                 seed.trial_index)};
  for (int i = 0; i < spec.n; ++i) {
    bool any = false;
    for (int j = 0; j < spec.n && !any; ++j) any = sampler.mask(i, j);
    if (!any) return true;
  }
  return false;
}

Matrix sample_directed_er(int n, double p, const SeedSpec& seed) {
  return sample_matrix(directed_er_spec(n, p), seed);
}

SparseMatrix sparse_view(const Matrix& m) {
  return m.sparseView(0.0, 0.0).template cast<double>();
}

Matrix fold_matrix(const Matrix& m) {
  if (m.rows() < 2) throw ParameterError("fold_matrix: need at least 2 rows");
  const Eigen::Index half = m.rows() / 2;
  return m.topRows(half) - m.middleRows(half, half);
}

int pattern_count(const Matrix& m, std::span<const int> cols_j,
                  std::span<const int> cols_jprime, double threshold) {
  for (int a : cols_j) {
    if (a < 0 || a >= m.cols()) throw ParameterError("pattern_count: J index out of range");
    for (int b : cols_jprime) {
      if (a == b) throw ParameterError("pattern_count: J and J' must be disjoint");
    }
  }
  for (int b : cols_jprime) {
    if (b < 0 || b >= m.cols()) throw ParameterError("pattern_count: J' index out of range");
  }
  int count = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    int nonzero = 0;
    bool large = false;
    for (int j : cols_j) {
      const double v = m(i, j);
      if (v != 0.0) {
        ++nonzero;
        large = std::abs(v) >= threshold;
      }
    }
    bool clean = true;
    for (int j : cols_jprime) clean = clean && m(i, j) == 0.0;
    if (clean && nonzero == 1 && large) ++count;
  }
  return count;
}

}  // namespace rmt
