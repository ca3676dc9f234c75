#include "ftspec/series.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ftspec/errors.hpp"

namespace ftspec {

FunctionalTimeSeries fit_curves(const GriddedSample& sample, const BasisSpec& basis,
                                double missing_cap, FitReport* report) {
  const int T = static_cast<int>(sample.values.rows());
  const int P = static_cast<int>(sample.values.cols());
  if (T < 1) throw input_error("fit: sample has no rows");
  if (static_cast<int>(sample.grid.size()) != P)
    throw input_error("fit: grid size does not match value columns");
  if (!(missing_cap >= 0.0 && missing_cap < 1.0))
    throw input_error("fit: missing cap must lie in [0,1)");

  const Eigen::MatrixXd phi = evaluate_basis(basis, sample.grid);
  const int L = basis.dimension;

  FitReport local;
  FitReport& rep = report ? *report : local;
  rep.residual_norm.clear();
  rep.missing_fraction.assign(T, 0.0);
  rep.skipped_rows.clear();

  std::vector<Eigen::VectorXd> rows;
  rows.reserve(T);
  std::vector<int> observed_idx;
  observed_idx.reserve(P);

  for (int t = 0; t < T; ++t) {
    observed_idx.clear();
    for (int p = 0; p < P; ++p)
      if (!std::isnan(sample.values(t, p))) observed_idx.push_back(p);
    const int n_obs = static_cast<int>(observed_idx.size());
    const double miss = 1.0 - static_cast<double>(n_obs) / P;
    rep.missing_fraction[t] = miss;
    if (miss > missing_cap) {
      rep.skipped_rows.push_back(t + 1);
      continue;
    }
    if (n_obs < L)
      throw input_error("fit: row " + std::to_string(t + 1) + " has " +
                        std::to_string(n_obs) + " observed points, need at least " +
                        std::to_string(L));

    Eigen::MatrixXd design(n_obs, L);
    Eigen::VectorXd y(n_obs);
    for (int i = 0; i < n_obs; ++i) {
      design.row(i) = phi.row(observed_idx[i]);
      y(i) = sample.values(t, observed_idx[i]);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < L)
      throw input_error("fit: rank-deficient design at row " + std::to_string(t + 1));
    Eigen::VectorXd c = qr.solve(y);
    rep.residual_norm.push_back((y - design * c).norm());
    rows.push_back(std::move(c));
  }

  if (rows.empty()) throw input_error("fit: every row exceeded the missing cap");

  FunctionalTimeSeries out;
  out.basis = basis;
  out.id = sample.id;
  out.coeffs.resize(static_cast<int>(rows.size()), L);
  for (std::size_t t = 0; t < rows.size(); ++t) out.coeffs.row(static_cast<int>(t)) = rows[t];
  return out;
}

std::complex<double> coeff_inner_product(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) throw input_error("inner product: dimension mismatch");
  std::complex<double> s(0.0, 0.0);
  for (Eigen::Index l = 0; l < a.size(); ++l) s += a(l) * std::conj(b(l));
  return s;
}

}  // namespace ftspec
