#pragma once

#include <vector>

namespace ftspec {

/// Partition of a length-T series into M contiguous blocks of N = T/M samples,
/// N even. Block j (1-based) covers samples (j-1)N+1 .. jN, is centered at
/// rescaled time u_j = (2j-1)/(2M), and is analysed on the frequency grid
/// omega_k = 2 pi k / N for k = 0..N/2.
struct BlockPlan {
  int T = 0;
  int M = 0;
  int N = 0;
  std::vector<double> midpoints;    // u_1..u_M
  std::vector<double> frequencies;  // omega_0..omega_{N/2}

  int n_freq() const { return N / 2 + 1; }
  bool operator==(const BlockPlan& other) const {
    return T == other.T && M == other.M && N == other.N;
  }
};

/// Validates T = M*N with N even and fills the grids. On an invalid M the
/// error message suggests the nearest valid block count for this T.
BlockPlan make_block_plan(int T, int M);

/// Default block count: M = T/32 when T is divisible by 32 (block length 32),
/// otherwise an error asking the caller to pass M explicitly.
int default_block_count(int T);

}  // namespace ftspec
