#pragma once

#include <string>
#include <vector>

#include "ftspec/block_plan.hpp"
#include "ftspec/equality_test.hpp"
#include "ftspec/cluster.hpp"
#include "ftspec/series.hpp"
#include "ftspec/similarity.hpp"

namespace ftspec {

// Coefficient CSV: first line "<series_id>,<T>,<L>", then T rows of L floats.
// Floats are written with 17 significant digits so a load/save cycle is
// byte-identical. Series ids must not contain commas.
void write_coeff_csv(const FunctionalTimeSeries& series, const std::string& path);
FunctionalTimeSeries read_coeff_csv(const std::string& path);

// Gridded CSV: first line "<series_id>,<T>,<P>", optionally a line
// "grid,<g_1>,...,<g_P>", then T rows of P values with NA for missing.
// Without a grid line the grid is uniform on [0,1].
void write_gridded_csv(const GriddedSample& sample, const std::string& path);
GriddedSample read_gridded_csv(const std::string& path);

// Similarity CSV: header row of series ids, then the full symmetric matrix.
void write_similarity_csv(const SimilarityMatrix& sim, const std::string& path);
SimilarityMatrix read_similarity_csv(const std::string& path);

// JSON envelope for a similarity matrix: ids, block-plan metadata (T, M, N),
// eta if an adjacency accompanies it, and the matrix itself.
void write_similarity_json(const SimilarityMatrix& sim, const BlockPlan& plan,
                           const std::string& path);

// Ground-truth / predicted label sidecar: {"ids": [...], "labels": [...]}.
void write_labels_json(const std::vector<std::string>& ids, const std::vector<int>& labels,
                       const std::string& path);
void read_labels_json(const std::string& path, std::vector<std::string>& ids,
                      std::vector<int>& labels);

// Clustering report: labels, eigenvalues, chosen k, selection method,
// diagnostics (inertia, degenerate rows, optional misclustering), embedding.
void write_cluster_report_json(const ClusterOutcome& outcome,
                               const std::vector<std::string>& ids,
                               const Eigen::MatrixXd& embedding, double eta,
                               double misclustering,  // pass NaN when unknown
                               const std::string& path);

// Pairwise test report: one record per pair with a_hat, sigma2_hat,
// statistic, p_value, reject, plus the shared plan metadata.
struct PairTestRecord {
  std::string id_a;
  std::string id_b;
  EqualityTestResult result;
};
void write_test_report_json(const std::vector<PairTestRecord>& records,
                            const BlockPlan& plan, double alpha, const std::string& path);

// Generic numeric matrix CSV with a header row of column names.
void write_matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& header,
                      const std::string& path);

std::string format_double(double x);  // %.17g

}  // namespace ftspec
