#include "ftspec/similarity.hpp"

#include <cmath>
#include <string>

#include "ftspec/errors.hpp"
#include "ftspec/numeric.hpp"
#include "ftspec/parallel.hpp"

namespace ftspec {

namespace {

void check_compatible(const LocalFdftTable& a, const LocalFdftTable& b) {
  if (!(a.plan() == b.plan()))
    throw input_error("f stat: block plans differ");
  if (a.dim() != b.dim())
    throw input_error("f stat: coefficient dimensions differ");
}

// sum_l a_l conj(b_l); only |.|^2 is consumed here.
inline double sq_inner(const Eigen::Map<const Eigen::VectorXcd>& a,
                       const Eigen::Map<const Eigen::VectorXcd>& b) {
  std::complex<double> s(0.0, 0.0);
  for (Eigen::Index l = 0; l < a.size(); ++l) s += a(l) * std::conj(b(l));
  return std::norm(s);
}

// A_hat from the four statistics. The numerator is evaluated in an order that
// cancels exactly when all four values coincide, so identical inputs give a
// hard zero rather than rounding noise.
double similarity_from_bundle(const FStatBundle& f) {
  const double denom = f.f11 + f.f22;
  if (!(denom > 0.0))
    throw numeric_error("similarity: degenerate input, both series have zero spectrum");
  const double numer = ((f.f11 + f.f22) - f.f12) - f.f21;
  return numer / denom;
}

// The ratio statistics are exactly invariant under scaling every input by a
// common factor, but their building blocks are fourth powers of transform
// entries, which overflow once entries pass ~1e77 (near-unstable AR draws can
// get there). Past this threshold the tables are jointly rescaled first.
constexpr double kScaleGuard = 1e30;

double table_max_abs(const LocalFdftTable& t) {
  double m = 0.0;
  for (int j = 0; j < t.plan().M; ++j)
    for (int k = 0; k <= t.plan().N / 2; ++k)
      m = std::max(m, t.at(j, k).cwiseAbs().maxCoeff());
  return m;
}

LocalFdftTable scaled_table(const LocalFdftTable& t, double factor) {
  LocalFdftTable out = t;
  for (int j = 0; j < out.plan().M; ++j)
    for (int k = 0; k <= out.plan().N / 2; ++k) out.at(j, k) *= factor;
  return out;
}

}  // namespace

double f_stat(const LocalFdftTable& a, const LocalFdftTable& b) {
  check_compatible(a, b);
  const BlockPlan& plan = a.plan();
  const int half = plan.N / 2;
  KahanAccumulator acc;
  for (int j = 0; j < plan.M; ++j)
    for (int k = 1; k <= half; ++k) acc.add(sq_inner(a.at(j, k), b.at(j, k - 1)));
  return acc.value() / plan.T;
}

FStatBundle f_stat_bundle(const LocalFdftTable& a, const LocalFdftTable& b) {
  FStatBundle f;
  f.f11 = f_stat(a, a);
  f.f22 = f_stat(b, b);
  f.f12 = f_stat(a, b);
  f.f21 = f_stat(b, a);
  return f;
}

double similarity(const LocalFdftTable& a, const LocalFdftTable& b) {
  const double m = std::max(table_max_abs(a), table_max_abs(b));
  if (m > kScaleGuard)
    return similarity_from_bundle(
        f_stat_bundle(scaled_table(a, 1.0 / m), scaled_table(b, 1.0 / m)));
  return similarity_from_bundle(f_stat_bundle(a, b));
}

double similarity(const FunctionalTimeSeries& a, const FunctionalTimeSeries& b,
                  const BlockPlan& plan) {
  return similarity(local_fdft(a, plan), local_fdft(b, plan));
}

SimilarityMatrix similarity_matrix(const std::vector<FunctionalTimeSeries>& members,
                                   const BlockPlan& plan, unsigned threads) {
  const int d = static_cast<int>(members.size());
  if (d < 2) throw input_error("similarity matrix: need at least two series");
  for (int i = 1; i < d; ++i) {
    if (members[i].length() != members[0].length() || members[i].dim() != members[0].dim())
      throw input_error("similarity matrix: series '" + members[i].id +
                        "' does not match the shape of '" + members[0].id + "'");
  }

  std::vector<LocalFdftTable> tables;
  tables.reserve(d);
  for (int i = 0; i < d; ++i) tables.push_back(local_fdft(members[i], plan));

  // One common factor across the whole collection keeps every pair jointly
  // rescaled, which the similarity is exactly invariant to.
  double collection_max = 0.0;
  for (const LocalFdftTable& t : tables)
    collection_max = std::max(collection_max, table_max_abs(t));
  if (collection_max > kScaleGuard)
    for (LocalFdftTable& t : tables) t = scaled_table(t, 1.0 / collection_max);

  std::vector<double> f_self(d);
  parallel_for_index(d, threads, [&](std::size_t i) {
    f_self[i] = f_stat(tables[i], tables[i]);
  });

  // Upper-triangle pairs as a flat index space; each slot is written by
  // exactly one work item, which makes the result thread-count independent.
  const std::size_t n_pairs = static_cast<std::size_t>(d) * (d - 1) / 2;
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n_pairs);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) pairs.emplace_back(i, j);

  std::vector<double> values(n_pairs);
  parallel_for_index(n_pairs, threads, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    FStatBundle f;
    f.f11 = f_self[i];
    f.f22 = f_self[j];
    f.f12 = f_stat(tables[i], tables[j]);
    f.f21 = f_stat(tables[j], tables[i]);
    try {
      values[p] = similarity_from_bundle(f);
    } catch (const numeric_error&) {
      throw numeric_error("similarity matrix: degenerate pair ('" + members[i].id +
                          "', '" + members[j].id + "')");
    }
  });

  SimilarityMatrix sim;
  sim.values = Eigen::MatrixXd::Zero(d, d);
  sim.ids.reserve(d);
  for (int i = 0; i < d; ++i) sim.ids.push_back(members[i].id);
  for (std::size_t p = 0; p < n_pairs; ++p) {
    const auto [i, j] = pairs[p];
    sim.values(i, j) = values[p];
    sim.values(j, i) = values[p];
  }
  return sim;
}

}  // namespace ftspec
