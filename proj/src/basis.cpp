#include "ftspec/basis.hpp"

#include <cmath>

#include "ftspec/errors.hpp"
#include "ftspec/numeric.hpp"

namespace ftspec {

Eigen::MatrixXd evaluate_basis(const BasisSpec& spec, const std::vector<double>& grid) {
  if (spec.family != BasisFamily::Fourier) throw input_error("basis: unknown family");
  if (spec.dimension < 1) throw input_error("basis: dimension must be >= 1");
  if (grid.empty()) throw input_error("basis: empty grid");
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (!(grid[p] >= 0.0 && grid[p] <= 1.0))
      throw input_error("basis: grid point " + std::to_string(p + 1) + " outside [0,1]");
    if (p > 0 && !(grid[p] > grid[p - 1]))
      throw input_error("basis: grid not strictly increasing at point " + std::to_string(p + 1));
  }

  const int P = static_cast<int>(grid.size());
  const int L = spec.dimension;
  const double root2 = std::sqrt(2.0);
  Eigen::MatrixXd phi(P, L);
  for (int p = 0; p < P; ++p) {
    const double tau = grid[p];
    for (int l = 1; l <= L; ++l) {
      double v;
      if (l == 1) {
        v = 1.0;
      } else if (l % 2 == 0) {
        const int m = l / 2;
        v = root2 * std::cos(kTwoPi * m * tau);
      } else {
        const int m = (l - 1) / 2;
        v = root2 * std::sin(kTwoPi * m * tau);
      }
      phi(p, l - 1) = v;
    }
  }
  return phi;
}

}  // namespace ftspec
