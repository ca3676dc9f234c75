#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ftspec/cluster.hpp"
#include "ftspec/errors.hpp"
#include "oracles.hpp"

using ftspec::adjacency;
using ftspec::AdjacencyMatrix;
using ftspec::eigendecompose;
using ftspec::EigenDecomposition;
using ftspec::embed;
using ftspec::GraphLaplacian;
using ftspec::kmeans;
using ftspec::laplacian;
using ftspec::misclustering_rate;
using ftspec::SimilarityMatrix;
using ftspec::spectral_cluster;

namespace {

SimilarityMatrix fixed_sim(const Eigen::MatrixXd& values) {
  SimilarityMatrix sim;
  sim.values = values;
  sim.ids.resize(values.rows());
  for (int i = 0; i < values.rows(); ++i) sim.ids[i] = "s" + std::to_string(i);
  return sim;
}

// Similarity with near-zero within-group and high between-group values.
SimilarityMatrix grouped_sim(const std::vector<int>& groups, double within, double between) {
  const int d = static_cast<int>(groups.size());
  Eigen::MatrixXd v(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v(i, j) = (i == j) ? 0.0 : (groups[i] == groups[j] ? within : between);
  return fixed_sim(v);
}

// Exact block-diagonal adjacency: complete components with unit weights.
AdjacencyMatrix block_adjacency(const std::vector<int>& sizes) {
  int d = 0;
  for (int s : sizes) d += s;
  AdjacencyMatrix adj;
  adj.eta = 1.0;
  adj.weights = Eigen::MatrixXd::Zero(d, d);
  int start = 0;
  for (int s : sizes) {
    adj.weights.block(start, start, s, s).setOnes();
    start += s;
  }
  return adj;
}

Eigen::MatrixXd blob_points(const std::vector<Eigen::Vector2d>& centers, int per_center,
                            double sd, unsigned seed, std::vector<int>* truth = nullptr) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sd);
  Eigen::MatrixXd pts(per_center * static_cast<int>(centers.size()), 2);
  int row = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (int i = 0; i < per_center; ++i, ++row) {
      pts(row, 0) = centers[c].x() + gauss(rng);
      pts(row, 1) = centers[c].y() + gauss(rng);
      if (truth) truth->push_back(static_cast<int>(c));
    }
  }
  return pts;
}

}  // namespace

TEST_CASE("adjacency is the entrywise exponential map") {
  Eigen::MatrixXd v(3, 3);
  v << 0.0, 1.0, 0.4,
       1.0, 0.0, 0.0,
       0.4, 0.0, 0.0;
  const AdjacencyMatrix one = adjacency(fixed_sim(v), 1.0);
  CHECK(one.weights(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(one.weights(1, 2) == 1.0);  // exp(0)
  CHECK(one.weights(0, 0) == 1.0);
  CHECK(one.weights(1, 1) == 1.0);

  // eta 2.5 on 0.4 lands on the same weight as eta 1 on 1.0.
  const AdjacencyMatrix scaled = adjacency(fixed_sim(v), 2.5);
  CHECK(scaled.weights(0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("adjacency validates its inputs") {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(adjacency(fixed_sim(v), 0.0), ftspec::input_error);
  CHECK_THROWS_AS(adjacency(fixed_sim(v), -1.0), ftspec::input_error);

  Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(2, 2);
  asym(0, 1) = 0.5;
  asym(1, 0) = 0.5 + 1e-6;  // over the symmetry tolerance
  CHECK_THROWS_AS(adjacency(fixed_sim(asym), 1.0), ftspec::input_error);

  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 0.5;  // self-similarity must be ~0
  CHECK_THROWS_AS(adjacency(fixed_sim(diag), 1.0), ftspec::input_error);
}

TEST_CASE("two-node laplacian has the closed-form spectrum") {
  Eigen::MatrixXd v(2, 2);
  v << 0.0, 0.8,
       0.8, 0.0;
  const double eta = 2.0;
  const double w = std::exp(-eta * 0.8);
  const GraphLaplacian lap = laplacian(adjacency(fixed_sim(v), eta));
  CHECK(lap.degrees(0) == doctest::Approx(1.0 + w).epsilon(1e-12));
  CHECK(lap.matrix(0, 1) == doctest::Approx(-w / (1.0 + w)).epsilon(1e-12));
  CHECK(lap.matrix == lap.matrix.transpose());

  const EigenDecomposition eig = eigendecompose(lap);
  CHECK(eig.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eig.eigenvalues(1) == doctest::Approx(2.0 * w / (1.0 + w)).epsilon(1e-12));
}

TEST_CASE("zero degrees are rejected") {
  AdjacencyMatrix adj;
  adj.eta = 1.0;
  adj.weights = Eigen::MatrixXd::Zero(3, 3);
  adj.weights(0, 0) = 1.0;  // rows 1 and 2 have degree zero
  CHECK_THROWS_AS(laplacian(adj), ftspec::numeric_error);
}

TEST_CASE("laplacian spectrum lies in the unit-norm band") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const int d = 4 + static_cast<int>(rng() % 5);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) v(i, j) = v(j, i) = unif(rng);
    const EigenDecomposition eig = eigendecompose(laplacian(adjacency(fixed_sim(v), 2.0)));
    CHECK(eig.eigenvalues.minCoeff() >= -1e-10);
    CHECK(eig.eigenvalues.maxCoeff() <= 2.0 + 1e-10);
    // Ascending order and orthonormal columns.
    for (int i = 1; i < d; ++i) CHECK(eig.eigenvalues(i) >= eig.eigenvalues(i - 1));
    const Eigen::MatrixXd gram = eig.eigenvectors.transpose() * eig.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("eigendecomposition reconstructs the laplacian") {
  Eigen::MatrixXd v(4, 4);
  v.setConstant(0.3);
  v.diagonal().setZero();
  v(0, 1) = v(1, 0) = 0.05;
  const GraphLaplacian lap = laplacian(adjacency(fixed_sim(v), 1.5));
  const EigenDecomposition eig = eigendecompose(lap);
  const Eigen::MatrixXd rebuilt =
      eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.transpose();
  CHECK((rebuilt - lap.matrix).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("connected graph: bottom eigenvector is the scaled degree vector") {
  Eigen::MatrixXd v(3, 3);
  v << 0.0, 0.2, 0.7,
       0.2, 0.0, 0.5,
       0.7, 0.5, 0.0;
  const GraphLaplacian lap = laplacian(adjacency(fixed_sim(v), 1.0));
  const EigenDecomposition eig = eigendecompose(lap);
  CHECK(std::abs(eig.eigenvalues(0)) <= 1e-10);
  Eigen::VectorXd expect = lap.degrees.cwiseSqrt();
  expect /= expect.norm();
  // Sign convention makes the dominant entry nonnegative, so no flip needed.
  CHECK((eig.eigenvectors.col(0) - expect).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("block-diagonal adjacency has one zero eigenvalue per component") {
  for (int k : {1, 2, 3, 5}) {
    std::vector<int> sizes;
    for (int c = 0; c < k; ++c) sizes.push_back(3 + c);
    const EigenDecomposition eig = eigendecompose(laplacian(block_adjacency(sizes)));
    int zeros = 0;
    for (int i = 0; i < eig.eigenvalues.size(); ++i)
      if (eig.eigenvalues(i) < 1e-10) ++zeros;
    CHECK(zeros == k);
  }
}

TEST_CASE("embedding of an ideal block graph collapses to k distinct rows") {
  const std::vector<int> sizes{3, 4, 5};
  const EigenDecomposition eig = eigendecompose(laplacian(block_adjacency(sizes)));
  const ftspec::SpectralEmbedding emb = embed(eig, 3);
  REQUIRE(emb.points.rows() == 12);
  REQUIRE(emb.points.cols() == 3);
  CHECK(emb.degenerate_rows.empty());
  for (int i = 0; i < 12; ++i)
    CHECK(emb.points.row(i).norm() == doctest::Approx(1.0).epsilon(1e-10));

  // Rows within a component coincide; rows across components differ.
  std::vector<int> group{0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 2};
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      const double dist = (emb.points.row(i) - emb.points.row(j)).norm();
      if (group[i] == group[j])
        CHECK(dist < 1e-8);
      else
        CHECK(dist > 0.5);
    }
  }
}

TEST_CASE("one-dimensional embedding of a connected graph is constant") {
  Eigen::MatrixXd v(3, 3);
  v << 0.0, 0.3, 0.6,
       0.3, 0.0, 0.1,
       0.6, 0.1, 0.0;
  const EigenDecomposition eig = eigendecompose(laplacian(adjacency(fixed_sim(v), 1.0)));
  const ftspec::SpectralEmbedding emb = embed(eig, 1);
  for (int i = 0; i < 3; ++i) CHECK(emb.points(i, 0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("kmeans recovers well-separated blobs") {
  std::vector<int> truth;
  const Eigen::MatrixXd pts =
      blob_points({{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}}, 10, 0.1, 77u, &truth);
  const ftspec::ClusterOutcome out = kmeans(pts, 3, 10, 123u);
  CHECK(out.labels.size() == 30);
  CHECK(misclustering_rate(out.labels, truth) == 0.0);
  // Inertia is the summed squared distance to the centroid actually assigned.
  double check_inertia = 0.0;
  for (int i = 0; i < 30; ++i)
    check_inertia += (pts.row(i) - out.centroids.row(out.labels[i])).squaredNorm();
  CHECK(out.inertia == doctest::Approx(check_inertia).epsilon(1e-12));
}

TEST_CASE("kmeans with one cluster returns the mean") {
  const Eigen::MatrixXd pts = blob_points({{1.0, 2.0}}, 8, 0.5, 3u);
  const ftspec::ClusterOutcome out = kmeans(pts, 1, 5, 9u);
  CHECK((out.centroids.row(0) - pts.colwise().mean()).norm() < 1e-12);
  for (int lab : out.labels) CHECK(lab == 0);
}

TEST_CASE("kmeans inertia matches the exhaustive oracle on tiny instances") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 8; ++rep) {
    const int d = 5 + static_cast<int>(rng() % 4);  // 5..8 points
    const int k = 2 + static_cast<int>(rng() % 2);  // 2..3 clusters
    Eigen::MatrixXd pts(d, 2);
    for (int i = 0; i < d; ++i) {
      pts(i, 0) = gauss(rng);
      pts(i, 1) = gauss(rng);
    }
    const ftspec::ClusterOutcome out = kmeans(pts, k, 64, rng());
    const double best = oracle::exhaustive_kmeans_inertia(pts, k);
    CHECK(out.inertia == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("kmeans parameter validation") {
  const Eigen::MatrixXd pts = Eigen::MatrixXd::Random(3, 2);
  CHECK_THROWS_AS(kmeans(pts, 4, 5, 1u), ftspec::input_error);  // more clusters than points
  CHECK_THROWS_AS(kmeans(pts, 0, 5, 1u), ftspec::input_error);
  CHECK_THROWS_AS(kmeans(pts, 2, 0, 1u), ftspec::input_error);
}

TEST_CASE("kmeans is deterministic in the seed") {
  const Eigen::MatrixXd pts = blob_points({{0.0, 0.0}, {5.0, 5.0}}, 12, 1.0, 55u);
  const ftspec::ClusterOutcome a = kmeans(pts, 2, 7, 31u);
  const ftspec::ClusterOutcome b = kmeans(pts, 2, 7, 31u);
  CHECK(a.labels == b.labels);
  CHECK(a.inertia == b.inertia);
}

TEST_CASE("kmeans partition is stable under rotation") {
  std::vector<int> truth;
  const Eigen::MatrixXd pts =
      blob_points({{0.0, 0.0}, {8.0, 0.0}, {4.0, 7.0}}, 9, 0.2, 13u, &truth);
  const double theta = 0.3;
  Eigen::Matrix2d rot;
  rot << std::cos(theta), -std::sin(theta),
         std::sin(theta),  std::cos(theta);
  const Eigen::MatrixXd rotated = pts * rot.transpose();
  const ftspec::ClusterOutcome a = kmeans(pts, 3, 10, 2u);
  const ftspec::ClusterOutcome b = kmeans(rotated, 3, 10, 2u);
  CHECK(misclustering_rate(a.labels, b.labels) == 0.0);
  CHECK(b.inertia == doctest::Approx(a.inertia).epsilon(1e-9));
}

TEST_CASE("spectral clustering separates grouped similarities") {
  const std::vector<int> truth{0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2};
  const SimilarityMatrix sim = grouped_sim(truth, 0.05, 0.95);
  const ftspec::ClusterOutcome out = spectral_cluster(sim, 3, 5.0, 42u);
  CHECK(out.chosen_k == 3);
  CHECK(misclustering_rate(out.labels, truth) == 0.0);
  CHECK(out.eigenvalues.size() == 12);
  CHECK(out.degenerate_rows.empty());
  // Three small eigenvalues, then a gap.
  CHECK(out.eigenvalues[2] < 0.2);
  CHECK(out.eigenvalues[3] > 0.5);
}

TEST_CASE("spectral clustering handles singleton groups") {
  const std::vector<int> truth{0, 0, 0, 1, 2};
  const SimilarityMatrix sim = grouped_sim(truth, 0.02, 0.98);
  const ftspec::ClusterOutcome out = spectral_cluster(sim, 3, 5.0, 7u);
  CHECK(misclustering_rate(out.labels, truth) == 0.0);
}

TEST_CASE("spectral clustering is deterministic in the seed") {
  const std::vector<int> truth{0, 0, 0, 1, 1, 1, 2, 2, 2};
  const SimilarityMatrix sim = grouped_sim(truth, 0.1, 0.9);
  const ftspec::ClusterOutcome a = spectral_cluster(sim, 3, 2.0, 99u);
  const ftspec::ClusterOutcome b = spectral_cluster(sim, 3, 2.0, 99u);
  CHECK(a.labels == b.labels);
  CHECK(a.inertia == b.inertia);
}

TEST_CASE("misclustering rate") {
  CHECK(misclustering_rate({0, 0, 1, 1}, {1, 1, 0, 0}) == 0.0);
  CHECK(misclustering_rate({0, 1, 2, 2}, {0, 0, 2, 2}) == doctest::Approx(0.25));
  // One flip among ten points.
  std::vector<int> truth(10, 0);
  for (int i = 5; i < 10; ++i) truth[i] = 1;
  std::vector<int> labels = truth;
  labels[0] = 1;
  CHECK(misclustering_rate(labels, truth) == doctest::Approx(0.1));
  // Symmetry and relabeling invariance.
  CHECK(misclustering_rate(truth, labels) == doctest::Approx(0.1));
  std::vector<int> renamed(10);
  for (int i = 0; i < 10; ++i) renamed[i] = labels[i] == 0 ? 7 : 3;
  CHECK(misclustering_rate(renamed, labels) == 0.0);
  CHECK_THROWS_AS(misclustering_rate({0, 1}, {0, 1, 2}), ftspec::input_error);
}

TEST_CASE("misclustering beyond eight labels falls back to greedy matching") {
  std::vector<int> truth, labels;
  for (int c = 0; c < 9; ++c)
    for (int i = 0; i < 4; ++i) {
      truth.push_back(c);
      labels.push_back((c + 1) % 9);  // pure relabeling
    }
  CHECK(misclustering_rate(labels, truth) == 0.0);
}
