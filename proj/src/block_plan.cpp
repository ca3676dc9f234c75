#include "ftspec/block_plan.hpp"

#include <cstdlib>
#include <string>

#include "ftspec/errors.hpp"
#include "ftspec/numeric.hpp"

namespace ftspec {

namespace {

bool valid_split(int T, int M) { return M >= 1 && T % M == 0 && (T / M) % 2 == 0; }

// Nearest M' to M with T = M' * N', N' even; -1 when T admits none (odd T).
int nearest_valid(int T, int M) {
  int best = -1;
  for (int cand = 1; cand <= T; ++cand) {
    if (!valid_split(T, cand)) continue;
    if (best < 0 || std::abs(cand - M) < std::abs(best - M)) best = cand;
  }
  return best;
}

}  // namespace

BlockPlan make_block_plan(int T, int M) {
  if (T < 2) throw input_error("block plan: series length must be at least 2");
  if (!valid_split(T, M)) {
    int suggestion = nearest_valid(T, M);
    std::string msg = "block plan: T = " + std::to_string(T) +
                      " does not split into M = " + std::to_string(M) +
                      " blocks of even length";
    if (suggestion > 0)
      msg += "; nearest valid M is " + std::to_string(suggestion);
    else
      msg += "; no valid block count exists for this T";
    throw input_error(msg);
  }

  BlockPlan plan;
  plan.T = T;
  plan.M = M;
  plan.N = T / M;
  plan.midpoints.resize(M);
  for (int j = 1; j <= M; ++j) plan.midpoints[j - 1] = (2.0 * j - 1.0) / (2.0 * M);
  plan.frequencies.resize(plan.N / 2 + 1);
  for (int k = 0; k <= plan.N / 2; ++k) plan.frequencies[k] = kTwoPi * k / plan.N;
  return plan;
}

int default_block_count(int T) {
  if (T % 32 == 0) return T / 32;
  throw input_error("block plan: no default block count for T = " + std::to_string(T) +
                    " (not a multiple of 32); pass M explicitly");
}

}  // namespace ftspec
