#include "ftspec/local_fdft.hpp"

#include <cmath>
#include <string>

#include "ftspec/errors.hpp"
#include "ftspec/numeric.hpp"

namespace ftspec {

LocalFdftTable local_fdft(const FunctionalTimeSeries& series, const BlockPlan& plan) {
  if (series.length() != plan.T)
    throw input_error("local fdft: series '" + series.id + "' has length " +
                      std::to_string(series.length()) + ", plan expects " +
                      std::to_string(plan.T));
  const int L = series.dim();
  if (L < 1) throw input_error("local fdft: series has no coefficients");

  const int N = plan.N;
  const int K = plan.n_freq();
  const double scale = 1.0 / std::sqrt(kTwoPi * N);

  // Twiddle tables: e^{-i omega_k s} = cosT(s,k) - i sinT(s,k). Column k = 0
  // is exactly (1, 0), which keeps D(j, 0) exactly real.
  Eigen::MatrixXd cosT(N, K), sinT(N, K);
  for (int k = 0; k < K; ++k) {
    const double w = plan.frequencies[k];
    for (int s = 0; s < N; ++s) {
      cosT(s, k) = std::cos(w * s);
      sinT(s, k) = std::sin(w * s);
    }
  }
  cosT.col(0).setOnes();
  sinT.col(0).setZero();

  LocalFdftTable table(plan, L);
  for (int j = 0; j < plan.M; ++j) {
    // Block content as N x L; two real products give the L x K transform.
    const auto block = series.coeffs.middleRows(static_cast<Eigen::Index>(j) * N, N);
    Eigen::MatrixXd re = block.transpose() * cosT;  // L x K
    Eigen::MatrixXd im = block.transpose() * sinT;
    for (int k = 0; k < K; ++k) {
      auto dst = table.at(j, k);
      for (int l = 0; l < L; ++l)
        dst(l) = std::complex<double>(scale * re(l, k), -scale * im(l, k));
    }
  }
  return table;
}

}  // namespace ftspec
