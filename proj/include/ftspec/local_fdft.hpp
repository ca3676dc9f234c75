#pragma once

#include <Eigen/Dense>
#include <cassert>
#include <complex>
#include <vector>

#include "ftspec/block_plan.hpp"
#include "ftspec/series.hpp"

namespace ftspec {

/// Block-local Fourier coefficients of a series: for block j and frequency
/// omega_k the table holds the L-vector
///   D(j,k) = (2 pi N)^{-1/2} sum_{s=0}^{N-1} x_{(j-1)N+1+s} e^{-i omega_k s},
/// coordinate-wise in the basis coefficients. Only k = 0..N/2 is stored; the
/// remaining frequencies follow from conjugate symmetry for real input.
class LocalFdftTable {
 public:
  LocalFdftTable(BlockPlan plan, int dim)
      : plan_(std::move(plan)),
        dim_(dim),
        values_(static_cast<std::size_t>(plan_.M) * plan_.n_freq() * dim) {}

  const BlockPlan& plan() const { return plan_; }
  int dim() const { return dim_; }

  /// block in [0, M), freq in [0, N/2].
  Eigen::Map<const Eigen::VectorXcd> at(int block, int freq) const {
    assert(block >= 0 && block < plan_.M && freq >= 0 && freq < plan_.n_freq());
    return Eigen::Map<const Eigen::VectorXcd>(values_.data() + offset(block, freq), dim_);
  }
  Eigen::Map<Eigen::VectorXcd> at(int block, int freq) {
    assert(block >= 0 && block < plan_.M && freq >= 0 && freq < plan_.n_freq());
    return Eigen::Map<Eigen::VectorXcd>(values_.data() + offset(block, freq), dim_);
  }

 private:
  std::size_t offset(int block, int freq) const {
    return (static_cast<std::size_t>(block) * plan_.n_freq() + freq) * dim_;
  }

  BlockPlan plan_;
  int dim_;
  std::vector<std::complex<double>> values_;
};

/// Computes the table for every (block, frequency) pair of the plan.
/// The series length must equal plan.T.
LocalFdftTable local_fdft(const FunctionalTimeSeries& series, const BlockPlan& plan);

}  // namespace ftspec
