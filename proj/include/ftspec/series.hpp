#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "ftspec/basis.hpp"

namespace ftspec {

/// A functional time series stored as basis coefficients: row t-1 holds the
/// coefficient vector of the curve observed at time t.
struct FunctionalTimeSeries {
  Eigen::MatrixXd coeffs;  // T x L
  BasisSpec basis;
  std::string id;

  int length() const { return static_cast<int>(coeffs.rows()); }
  int dim() const { return static_cast<int>(coeffs.cols()); }
};

/// Raw curves sampled on a common grid; NaN marks a missing observation.
struct GriddedSample {
  Eigen::MatrixXd values;    // T x P
  std::vector<double> grid;  // P points in [0,1], strictly increasing
  std::string id;
};

struct FitReport {
  std::vector<double> residual_norm;     // per kept row, l2 norm of y - Phi c
  std::vector<double> missing_fraction;  // per input row
  std::vector<int> skipped_rows;         // 1-based input rows over the missing cap
};

/// Least-squares projection of each observed curve onto the basis. Rows whose
/// missing fraction exceeds `missing_cap` are skipped (recorded in the report);
/// remaining rows need at least `basis.dimension` observed points and a
/// full-rank design or the fit fails naming the offending row.
FunctionalTimeSeries fit_curves(const GriddedSample& sample, const BasisSpec& basis,
                                double missing_cap = 0.10, FitReport* report = nullptr);

/// L^2 inner product of two curves given by complex coefficient vectors in a
/// shared orthonormal basis: sum_l a_l * conj(b_l). Conjugation is on the
/// second argument.
std::complex<double> coeff_inner_product(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

}  // namespace ftspec
