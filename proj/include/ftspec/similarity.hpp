#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ftspec/block_plan.hpp"
#include "ftspec/local_fdft.hpp"
#include "ftspec/series.hpp"

namespace ftspec {

/// The four cross statistics behind the similarity measure.
struct FStatBundle {
  double f11 = 0.0;
  double f22 = 0.0;
  double f12 = 0.0;
  double f21 = 0.0;
};

/// F_{ab} = T^{-1} sum_{j=1}^{M} sum_{k=1}^{N/2} |<D_a(j,k), D_b(j,k-1)>|^2.
///
/// This is the collapsed form of the Hilbert-Schmidt pairing of the rank-one
/// local periodogram tensors: <f (x) f, g (x) g>_HS = |<f,g>|^2, so the L x L
/// tensors are never materialised. Tests hold this path against a dense
/// tensor oracle; keep the two independent.
double f_stat(const LocalFdftTable& a, const LocalFdftTable& b);

FStatBundle f_stat_bundle(const LocalFdftTable& a, const LocalFdftTable& b);

/// Similarity A_hat = (F11 + F22 - F12 - F21) / (F11 + F22).
/// Zero for identical inputs, invariant under separate rescaling of either
/// series, can dip marginally below zero in finite samples (kept raw).
/// Both series flat zero => degenerate denominator => numeric_error.
double similarity(const LocalFdftTable& a, const LocalFdftTable& b);
double similarity(const FunctionalTimeSeries& a, const FunctionalTimeSeries& b,
                  const BlockPlan& plan);

struct SimilarityMatrix {
  Eigen::MatrixXd values;        // d x d, symmetric, zero diagonal
  std::vector<std::string> ids;  // row/column labels
};

/// All pairwise similarities of a collection sharing one plan. Off-diagonal
/// pairs are independent work items and may run concurrently; `threads` == 0
/// picks the hardware default, and the result is identical for every thread
/// count. Members must agree in length and dimension.
SimilarityMatrix similarity_matrix(const std::vector<FunctionalTimeSeries>& members,
                                   const BlockPlan& plan, unsigned threads = 0);

}  // namespace ftspec
