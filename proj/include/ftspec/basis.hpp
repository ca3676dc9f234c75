#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ftspec {

enum class BasisFamily { Fourier };

/// Orthonormal basis of L^2[0,1]. Fourier ordering is
///   psi_1 = 1,  psi_{2m} = sqrt(2) cos(2 pi m tau),  psi_{2m+1} = sqrt(2) sin(2 pi m tau),
/// so any dimension >= 1 is valid, odd or even.
struct BasisSpec {
  BasisFamily family = BasisFamily::Fourier;
  int dimension = 0;
};

/// Evaluates the first `spec.dimension` basis functions on `grid`.
/// Returns a grid.size() x dimension matrix, column l-1 holding psi_l.
/// Grid points must lie in [0,1] and be strictly increasing.
Eigen::MatrixXd evaluate_basis(const BasisSpec& spec, const std::vector<double>& grid);

}  // namespace ftspec
