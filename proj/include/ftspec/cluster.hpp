#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ftspec/similarity.hpp"

namespace ftspec {

/// Graph weights W_ij = exp(-eta * A_ij), applied entrywise to a similarity
/// matrix. Diagonal is exactly 1 (self-loops kept).
struct AdjacencyMatrix {
  Eigen::MatrixXd weights;
  double eta = 0.0;
};

AdjacencyMatrix adjacency(const SimilarityMatrix& sim, double eta);

/// Symmetric normalized Laplacian L = I - D^{-1/2} W D^{-1/2}, explicitly
/// symmetrized as (L + L^T)/2 after assembly. Degrees are W row sums and must
/// be strictly positive.
struct GraphLaplacian {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd degrees;
};

GraphLaplacian laplacian(const AdjacencyMatrix& adj);

/// Eigenvalues ascending; eigenvectors orthonormal, column i paired with
/// eigenvalue i. Sign convention: in each column the entry of largest
/// magnitude (lowest index on ties) is nonnegative.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

EigenDecomposition eigendecompose(const GraphLaplacian& lap);

/// Rows of the first k eigenvectors, each row normalized to unit length.
/// A row with zero norm is left at zero and flagged (0-based indices here;
/// the warning printed to stderr reports them 1-based).
struct SpectralEmbedding {
  Eigen::MatrixXd points;  // d x k
  std::vector<int> degenerate_rows;
};

SpectralEmbedding embed(const EigenDecomposition& eig, int k);

struct ClusterOutcome {
  std::vector<int> labels;   // in 0..k-1, every cluster nonempty
  Eigen::MatrixXd centroids; // k x dim
  double inertia = 0.0;
  int chosen_k = 0;
  std::string selection_method;   // empty unless select_k picked chosen_k
  std::vector<double> eigenvalues;  // full Laplacian spectrum when available
  std::vector<int> degenerate_rows;
};

/// Lloyd iterations with k-means++ seeding. `restarts` independent runs keep
/// the lowest inertia (earliest restart on ties). Within a run: assignment
/// ties break toward the lowest centroid index, empty clusters are repaired by
/// stealing the point farthest from its centroid, and iterations cap at 100.
/// Restart r of a k-cluster run draws its RNG from derive_seed(seed, k, r),
/// so results do not depend on scheduling.
ClusterOutcome kmeans(const Eigen::MatrixXd& points, int k, int restarts, std::uint64_t seed);

inline constexpr int kDefaultKmeansRestarts = 25;

/// Full pipeline: adjacency -> Laplacian -> eigenvectors -> row-normalized
/// embedding -> k-means on the embedded points.
ClusterOutcome spectral_cluster(const SimilarityMatrix& sim, int k, double eta,
                                std::uint64_t seed,
                                int restarts = kDefaultKmeansRestarts);

/// Relative eigengap rule: rho_k = (lambda_k - lambda_{k-1}) / lambda_k, with
/// rho_1 := 0 (no gap below the first eigenvalue) and rho_k := 0 whenever
/// lambda_k <= 1e-12; picks the largest k <= k_max with rho_k <= 0.01 * eta,
/// falling back to 1.
int choose_k_relgap(const std::vector<double>& eigenvalues, double eta, int k_max);

/// Deviation rule: picks the largest k <= k_max with
/// lambda_{k+1} - lambda_k >= sigma_k, where sigma_k is the mean squared
/// deviation of lambda_{k+1}..lambda_d around their mean; falls back to 1.
/// Requires d >= k_max + 1.
int choose_k_sd1gap(const std::vector<double>& eigenvalues, int k_max);

/// Calinski-Harabasz index on the rows of the adjacency matrix taken as
/// Euclidean features. Zero within-cluster scatter maps to +infinity.
double ch_index(const AdjacencyMatrix& adj, const std::vector<int>& labels);

/// Mean silhouette width computed directly on the similarity matrix as a
/// dissimilarity. Singleton clusters contribute 0.
double silhouette_index(const SimilarityMatrix& sim, const std::vector<int>& labels);

/// Cluster-count selection. Methods "relgap" and "sd1gap" read the Laplacian
/// spectrum; "ch" and "silhouette" re-run spectral_cluster for each
/// k = 2..k_max and take the argmax (smallest k on ties).
int select_k(const SimilarityMatrix& sim, const std::string& method, double eta,
             int k_max, std::uint64_t seed);

inline constexpr int kDefaultKMax = 15;

/// Fraction of points whose labels disagree, minimized over bijections of the
/// label alphabets. Exact (all permutations) up to 8 labels; greedy matching
/// with a warning beyond that. Invariant under relabeling of either argument
/// and symmetric in the two.
double misclustering_rate(const std::vector<int>& labels, const std::vector<int>& truth);

}  // namespace ftspec
