#include "ftspec/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "ftspec/errors.hpp"
#include "ftspec/rng.hpp"

namespace ftspec {

namespace {

constexpr double kSymmetryTol = 1e-8;
constexpr double kZeroEigenTol = 1e-12;
constexpr int kMaxLloydIterations = 100;

void check_similarity_input(const SimilarityMatrix& sim) {
  const Eigen::Index d = sim.values.rows();
  if (d < 1 || sim.values.cols() != d)
    throw input_error("adjacency: similarity matrix must be square");
  if (!sim.values.allFinite())
    throw input_error("adjacency: similarity matrix has non-finite entries");
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      if (std::abs(sim.values(i, j) - sim.values(j, i)) > kSymmetryTol)
        throw input_error("adjacency: similarity matrix asymmetric beyond 1e-8 at (" +
                          std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
    if (std::abs(sim.values(i, i)) > kSymmetryTol)
      throw input_error("adjacency: similarity diagonal not zero at " + std::to_string(i + 1));
  }
}

int label_count(const std::vector<int>& labels, const char* who) {
  if (labels.empty()) throw input_error(std::string(who) + ": empty labels");
  int k = 0;
  for (int v : labels) {
    if (v < 0) throw input_error(std::string(who) + ": negative label");
    k = std::max(k, v + 1);
  }
  std::vector<int> count(k, 0);
  for (int v : labels) ++count[v];
  for (int c = 0; c < k; ++c)
    if (count[c] == 0) throw input_error(std::string(who) + ": cluster " + std::to_string(c) + " is empty");
  return k;
}

// k-means++ seeding. All randomness flows through cumulative scans over a
// single uniform draw each, so tie handling is explicit: the first index
// whose cumulative mass reaches the draw wins.
Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
  const int d = static_cast<int>(points.rows());
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Eigen::MatrixXd centroids(k, points.cols());
  int first = std::min(d - 1, static_cast<int>(unif(rng) * d));
  centroids.row(0) = points.row(first);

  Eigen::VectorXd dist2(d);
  for (int i = 0; i < d; ++i) dist2(i) = (points.row(i) - centroids.row(0)).squaredNorm();

  for (int c = 1; c < k; ++c) {
    const double total = dist2.sum();
    int next = -1;
    if (total > 0.0) {
      const double u = unif(rng) * total;
      double cum = 0.0;
      for (int i = 0; i < d; ++i) {
        if (dist2(i) <= 0.0) continue;
        cum += dist2(i);
        if (cum >= u) { next = i; break; }
      }
      if (next < 0) {
        for (int i = d - 1; i >= 0; --i)
          if (dist2(i) > 0.0) { next = i; break; }
      }
    }
    if (next < 0) {
      // All remaining mass is zero (duplicate-heavy input): spread over the
      // points deterministically.
      next = std::min(d - 1, c % d);
    }
    centroids.row(c) = points.row(next);
    for (int i = 0; i < d; ++i)
      dist2(i) = std::min(dist2(i), (points.row(i) - centroids.row(c)).squaredNorm());
  }
  return centroids;
}

struct LloydResult {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;
  double inertia = std::numeric_limits<double>::infinity();
};

int nearest_centroid(const Eigen::MatrixXd& centroids, const Eigen::RowVectorXd& x) {
  int best = 0;
  double best_d = (x - centroids.row(0)).squaredNorm();
  for (int c = 1; c < centroids.rows(); ++c) {
    const double dd = (x - centroids.row(c)).squaredNorm();
    if (dd < best_d) { best_d = dd; best = c; }
  }
  return best;
}

LloydResult lloyd(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
  const int d = static_cast<int>(points.rows());
  LloydResult res;
  res.centroids = kmeanspp_init(points, k, rng);
  res.labels.assign(d, -1);
  std::vector<int> sizes(k, 0);

  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    bool changed = false;
    std::fill(sizes.begin(), sizes.end(), 0);
    for (int i = 0; i < d; ++i) {
      const int c = nearest_centroid(res.centroids, points.row(i));
      if (c != res.labels[i]) { res.labels[i] = c; changed = true; }
      ++sizes[c];
    }

    // Empty-cluster repair: steal the point farthest from its centroid out of
    // a cluster that can spare one. Lowest point index wins distance ties.
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      int steal = -1;
      double worst = -1.0;
      for (int i = 0; i < d; ++i) {
        if (sizes[res.labels[i]] < 2) continue;
        const double dd = (points.row(i) - res.centroids.row(res.labels[i])).squaredNorm();
        if (dd > worst) { worst = dd; steal = i; }
      }
      if (steal < 0) throw numeric_error("kmeans: cannot repair empty cluster");
      --sizes[res.labels[steal]];
      res.labels[steal] = c;
      ++sizes[c];
      changed = true;
    }

    res.centroids.setZero();
    for (int i = 0; i < d; ++i) res.centroids.row(res.labels[i]) += points.row(i);
    for (int c = 0; c < k; ++c) res.centroids.row(c) /= sizes[c];

    if (!changed) break;
  }

  res.inertia = 0.0;
  for (int i = 0; i < d; ++i)
    res.inertia += (points.row(i) - res.centroids.row(res.labels[i])).squaredNorm();
  return res;
}

}  // namespace

AdjacencyMatrix adjacency(const SimilarityMatrix& sim, double eta) {
  if (!(eta > 0.0)) throw input_error("adjacency: eta must be positive");
  check_similarity_input(sim);
  AdjacencyMatrix adj;
  adj.eta = eta;
  adj.weights = (-eta * sim.values).array().exp().matrix();
  // Self-loops are kept and carry weight exactly 1.
  adj.weights.diagonal().setOnes();
  return adj;
}

GraphLaplacian laplacian(const AdjacencyMatrix& adj) {
  const Eigen::Index d = adj.weights.rows();
  if (d < 1 || adj.weights.cols() != d) throw input_error("laplacian: weights must be square");
  if (!adj.weights.allFinite()) throw input_error("laplacian: non-finite weights");

  GraphLaplacian lap;
  lap.degrees = adj.weights.rowwise().sum();
  for (Eigen::Index i = 0; i < d; ++i)
    if (!(lap.degrees(i) > 0.0))
      throw numeric_error("laplacian: vertex " + std::to_string(i + 1) +
                          " has non-positive degree");

  const Eigen::VectorXd inv_sqrt = lap.degrees.array().rsqrt();
  lap.matrix = Eigen::MatrixXd::Identity(d, d) -
               (inv_sqrt.asDiagonal() * adj.weights * inv_sqrt.asDiagonal());
  lap.matrix = 0.5 * (lap.matrix + lap.matrix.transpose()).eval();
  return lap;
}

EigenDecomposition eigendecompose(const GraphLaplacian& lap) {
  if (!lap.matrix.allFinite()) throw numeric_error("eigendecompose: non-finite Laplacian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.matrix);
  if (solver.info() != Eigen::Success)
    throw numeric_error("eigendecompose: eigensolver failed to converge");

  EigenDecomposition eig;
  eig.eigenvalues = solver.eigenvalues();
  eig.eigenvectors = solver.eigenvectors();

  // Deterministic sign: the entry of largest magnitude in each column (first
  // such index on ties) is made nonnegative.
  for (Eigen::Index c = 0; c < eig.eigenvectors.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = std::abs(eig.eigenvectors(0, c));
    for (Eigen::Index i = 1; i < eig.eigenvectors.rows(); ++i) {
      const double a = std::abs(eig.eigenvectors(i, c));
      if (a > best) { best = a; arg = i; }
    }
    if (eig.eigenvectors(arg, c) < 0.0) eig.eigenvectors.col(c) = -eig.eigenvectors.col(c);
  }
  return eig;
}

SpectralEmbedding embed(const EigenDecomposition& eig, int k) {
  const Eigen::Index d = eig.eigenvectors.rows();
  if (k < 1 || k > d) throw input_error("embed: k must lie in [1, d]");

  SpectralEmbedding emb;
  emb.points = eig.eigenvectors.leftCols(k);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double norm = emb.points.row(i).norm();
    if (norm > 0.0) {
      emb.points.row(i) /= norm;
    } else {
      emb.degenerate_rows.push_back(static_cast<int>(i));
      std::cerr << "embed: row " << (i + 1) << " has zero norm, left at zero\n";
    }
  }
  return emb;
}

ClusterOutcome kmeans(const Eigen::MatrixXd& points, int k, int restarts, std::uint64_t seed) {
  const int d = static_cast<int>(points.rows());
  if (d < 1) throw input_error("kmeans: no points");
  if (!points.allFinite()) throw input_error("kmeans: non-finite points");
  if (k < 1 || k > d) throw input_error("kmeans: k must lie in [1, number of points]");
  if (restarts < 1) throw input_error("kmeans: restarts must be >= 1");

  LloydResult best;
  for (int r = 0; r < restarts; ++r) {
    auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(r)));
    LloydResult cur = lloyd(points, k, rng);
    if (cur.inertia < best.inertia) best = std::move(cur);
  }

  ClusterOutcome out;
  out.labels = std::move(best.labels);
  out.centroids = std::move(best.centroids);
  out.inertia = best.inertia;
  out.chosen_k = k;
  return out;
}

ClusterOutcome spectral_cluster(const SimilarityMatrix& sim, int k, double eta,
                                std::uint64_t seed, int restarts) {
  const AdjacencyMatrix adj = adjacency(sim, eta);
  const GraphLaplacian lap = laplacian(adj);
  const EigenDecomposition eig = eigendecompose(lap);
  const SpectralEmbedding emb = embed(eig, k);

  ClusterOutcome out = kmeans(emb.points, k, restarts, seed);
  out.eigenvalues.assign(eig.eigenvalues.data(), eig.eigenvalues.data() + eig.eigenvalues.size());
  out.degenerate_rows = emb.degenerate_rows;
  return out;
}

int choose_k_relgap(const std::vector<double>& eigenvalues, double eta, int k_max) {
  if (eigenvalues.empty()) throw input_error("relgap: empty spectrum");
  if (!(eta > 0.0)) throw input_error("relgap: eta must be positive");
  if (k_max < 1) throw input_error("relgap: k_max must be >= 1");

  const int d = static_cast<int>(eigenvalues.size());
  const double threshold = 0.01 * eta;
  int best = 1;
  for (int k = 1; k <= std::min(k_max, d); ++k) {
    // rho_1 is 0 by convention: there is no gap below the first eigenvalue.
    // The same guard absorbs the 0/0 case lambda_k = 0.
    const double lam = eigenvalues[k - 1];
    double rho = 0.0;
    if (k >= 2 && lam > kZeroEigenTol) rho = (lam - eigenvalues[k - 2]) / lam;
    if (rho <= threshold) best = k;
  }
  return best;
}

int choose_k_sd1gap(const std::vector<double>& eigenvalues, int k_max) {
  const int d = static_cast<int>(eigenvalues.size());
  if (k_max < 1) throw input_error("sd1gap: k_max must be >= 1");
  if (d < k_max + 1)
    throw input_error("sd1gap: need at least k_max + 1 eigenvalues, have " + std::to_string(d));

  int best = 1;
  for (int k = 1; k <= k_max; ++k) {
    const double gap = eigenvalues[k] - eigenvalues[k - 1];
    const int tail = d - k;
    double mean = 0.0;
    for (int j = k; j < d; ++j) mean += eigenvalues[j];
    mean /= tail;
    double sigma = 0.0;
    for (int j = k; j < d; ++j) sigma += (eigenvalues[j] - mean) * (eigenvalues[j] - mean);
    sigma /= tail;
    if (gap >= sigma) best = k;
  }
  return best;
}

double ch_index(const AdjacencyMatrix& adj, const std::vector<int>& labels) {
  const int d = static_cast<int>(adj.weights.rows());
  if (static_cast<int>(labels.size()) != d)
    throw input_error("ch index: labels do not match matrix size");
  const int k = label_count(labels, "ch index");
  if (k < 2) throw input_error("ch index: need at least two clusters");
  if (k > d) throw input_error("ch index: more clusters than points");

  const Eigen::RowVectorXd global_mean = adj.weights.colwise().mean();
  Eigen::MatrixXd cluster_mean = Eigen::MatrixXd::Zero(k, d);
  std::vector<int> sizes(k, 0);
  for (int i = 0; i < d; ++i) {
    cluster_mean.row(labels[i]) += adj.weights.row(i);
    ++sizes[labels[i]];
  }
  for (int c = 0; c < k; ++c) cluster_mean.row(c) /= sizes[c];

  double between = 0.0;
  for (int c = 0; c < k; ++c)
    between += sizes[c] * (cluster_mean.row(c) - global_mean).squaredNorm();
  double within = 0.0;
  for (int i = 0; i < d; ++i)
    within += (adj.weights.row(i) - cluster_mean.row(labels[i])).squaredNorm();

  if (k == d || within <= 0.0) return std::numeric_limits<double>::infinity();
  return (between / (k - 1)) / (within / (d - k));
}

double silhouette_index(const SimilarityMatrix& sim, const std::vector<int>& labels) {
  const int d = static_cast<int>(sim.values.rows());
  if (static_cast<int>(labels.size()) != d)
    throw input_error("silhouette: labels do not match matrix size");
  const int k = label_count(labels, "silhouette");
  if (k < 2) throw input_error("silhouette: need at least two clusters");

  std::vector<int> sizes(k, 0);
  for (int v : labels) ++sizes[v];

  double total = 0.0;
  std::vector<double> mean_to(k);
  for (int i = 0; i < d; ++i) {
    const int ci = labels[i];
    if (sizes[ci] == 1) continue;  // singleton contributes 0

    std::fill(mean_to.begin(), mean_to.end(), 0.0);
    for (int j = 0; j < d; ++j)
      if (j != i) mean_to[labels[j]] += sim.values(i, j);
    const double a = mean_to[ci] / (sizes[ci] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c)
      if (c != ci) b = std::min(b, mean_to[c] / sizes[c]);

    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / d;
}

int select_k(const SimilarityMatrix& sim, const std::string& method, double eta,
             int k_max, std::uint64_t seed) {
  const int d = static_cast<int>(sim.values.rows());
  if (k_max < 1) throw input_error("select k: k_max must be >= 1");

  if (method == "relgap" || method == "sd1gap") {
    const EigenDecomposition eig = eigendecompose(laplacian(adjacency(sim, eta)));
    std::vector<double> ev(eig.eigenvalues.data(), eig.eigenvalues.data() + d);
    if (method == "relgap") return choose_k_relgap(ev, eta, std::min(k_max, d));
    return choose_k_sd1gap(ev, std::min(k_max, d - 1));
  }

  if (method == "ch" || method == "silhouette" || method == "sil") {
    const int top = std::min(k_max, d - 1);
    if (top < 2) throw input_error("select k: too few points to scan k >= 2");
    const AdjacencyMatrix adj = method == "ch" ? adjacency(sim, eta) : AdjacencyMatrix{};
    int best_k = 2;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int k = 2; k <= top; ++k) {
      const ClusterOutcome outcome = spectral_cluster(sim, k, eta, seed);
      const double score = method == "ch" ? ch_index(adj, outcome.labels)
                                          : silhouette_index(sim, outcome.labels);
      if (score > best_score) { best_score = score; best_k = k; }
    }
    return best_k;
  }

  throw input_error("select k: unknown method '" + method +
                    "' (expected relgap, sd1gap, ch, or silhouette)");
}

double misclustering_rate(const std::vector<int>& labels, const std::vector<int>& truth) {
  if (labels.size() != truth.size() || labels.empty())
    throw input_error("misclustering: label vectors must match and be nonempty");
  const int d = static_cast<int>(labels.size());

  auto compact = [](const std::vector<int>& v) {
    std::vector<int> out(v.size());
    std::vector<int> seen;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto it = std::find(seen.begin(), seen.end(), v[i]);
      if (it == seen.end()) { seen.push_back(v[i]); out[i] = static_cast<int>(seen.size()) - 1; }
      else out[i] = static_cast<int>(it - seen.begin());
    }
    return std::pair<std::vector<int>, int>(out, static_cast<int>(seen.size()));
  };

  const auto [a, ka] = compact(labels);
  const auto [b, kb] = compact(truth);
  const int kk = std::max(ka, kb);

  if (kk <= 8) {
    std::vector<int> perm(kk);
    std::iota(perm.begin(), perm.end(), 0);
    int best = d + 1;
    do {
      int mism = 0;
      for (int i = 0; i < d; ++i)
        if (perm[a[i]] != b[i]) ++mism;
      best = std::min(best, mism);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / d;
  }

  // Greedy confusion-matrix matching; not guaranteed optimal.
  std::cerr << "misclustering: more than 8 labels, using greedy matching\n";
  Eigen::MatrixXi confusion = Eigen::MatrixXi::Zero(kk, kk);
  for (int i = 0; i < d; ++i) ++confusion(a[i], b[i]);
  std::vector<int> map_a(kk, -1);
  std::vector<bool> used_b(kk, false);
  for (int step = 0; step < kk; ++step) {
    int bi = -1, bj = -1, bv = -1;
    for (int i = 0; i < kk; ++i) {
      if (map_a[i] >= 0) continue;
      for (int j = 0; j < kk; ++j) {
        if (used_b[j]) continue;
        if (confusion(i, j) > bv) { bv = confusion(i, j); bi = i; bj = j; }
      }
    }
    map_a[bi] = bj;
    used_b[bj] = true;
  }
  int mism = 0;
  for (int i = 0; i < d; ++i)
    if (map_a[a[i]] != b[i]) ++mism;
  return static_cast<double>(mism) / d;
}

}  // namespace ftspec
