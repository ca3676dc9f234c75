// Command-line front end: ingest, simulate, similarity, cluster, select-k,
// test, bench. Exit codes: 0 success, 1 input error, 2 numeric degeneracy.
// Every run writes its fully resolved configuration next to its outputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ftspec/block_plan.hpp"
#include "ftspec/cluster.hpp"
#include "ftspec/equality_test.hpp"
#include "ftspec/errors.hpp"
#include "ftspec/io.hpp"
#include "ftspec/rng.hpp"
#include "ftspec/series.hpp"
#include "ftspec/sim_models.hpp"
#include "ftspec/similarity.hpp"

namespace {

using nlohmann::json;

struct IngestOpts {
  std::string input, output;
  int L = 21;
  double missing_cap = 0.10;
  bool center = false;
};

struct SimulateOpts {
  std::string model_name, output, outdir;
  int setting = 0;
  int n = 10;
  int T = 0;
  int L = 15;
  int burn_in = 200;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct SimilarityOpts {
  std::vector<std::string> inputs;
  std::string out_prefix, labels_path;
  int M = 0;
  double eta = 1.0;
  unsigned threads = 0;
};

struct ClusterOpts {
  std::string similarity_path, output, truth_path, embedding_csv, method;
  int k = 0;
  int k_max = ftspec::kDefaultKMax;
  int restarts = ftspec::kDefaultKmeansRestarts;
  double eta = 1.0;
  std::uint64_t seed = 0;
};

struct SelectKOpts {
  std::string similarity_path, output = "select_k.json", method;
  int k_max = ftspec::kDefaultKMax;
  double eta = 1.0;
  std::uint64_t seed = 0;
};

struct TestOpts {
  std::vector<std::string> inputs;
  std::string output, pvalue_csv;
  int M = 0;
  double alpha = 0.05;
};

struct BenchOpts {
  std::string mode = "cluster", outdir;
  int setting = 1;
  int n = 10;
  int T = 256;
  int L = 15;
  int M = 0;
  int replications = 100;
  int k_max = ftspec::kDefaultKMax;
  double eta = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::vector<double> etas = {0.5, 2.5, 5.0, 10.0};
  std::vector<double> alphas = {0.05, 0.10};
  std::string methods = "true,relgap,sd1gap,ch,silhouette";
  std::string models = "I,II,V,VI";
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void emit_config(CLI::App& root, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ftspec::input_error(path + ": cannot write resolved config");
  out << root.config_to_str(true, true);
}

std::vector<ftspec::FunctionalTimeSeries> load_series(const std::vector<std::string>& paths) {
  std::vector<ftspec::FunctionalTimeSeries> members;
  members.reserve(paths.size());
  for (const auto& p : paths) members.push_back(ftspec::read_coeff_csv(p));
  return members;
}

ftspec::BlockPlan plan_for(int T, int M) {
  return ftspec::make_block_plan(T, M > 0 ? M : ftspec::default_block_count(T));
}

void write_embedding_csv(const std::vector<std::string>& ids, const Eigen::MatrixXd& emb,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ftspec::input_error(path + ": cannot open for writing");
  out << "id";
  for (Eigen::Index c = 0; c < emb.cols(); ++c) out << ",e" << (c + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < emb.rows(); ++i) {
    out << ids[i];
    for (Eigen::Index c = 0; c < emb.cols(); ++c) out << ',' << ftspec::format_double(emb(i, c));
    out << '\n';
  }
}

int run_ingest(CLI::App& root, const IngestOpts& o) {
  emit_config(root, o.output + ".run.ini");
  ftspec::GriddedSample sample = ftspec::read_gridded_csv(o.input);
  ftspec::FitReport report;
  ftspec::FunctionalTimeSeries series =
      ftspec::fit_curves(sample, ftspec::BasisSpec{ftspec::BasisFamily::Fourier, o.L},
                         o.missing_cap, &report);
  for (int row : report.skipped_rows)
    std::cerr << "ingest: skipped row " << row << " ("
              << report.missing_fraction[row - 1] * 100.0 << "% missing, cap "
              << o.missing_cap * 100.0 << "%)\n";
  if (o.center) {
    const Eigen::RowVectorXd mean = series.coeffs.colwise().mean();
    series.coeffs.rowwise() -= mean;
  }
  ftspec::write_coeff_csv(series, o.output);
  double max_resid = 0.0;
  for (double r : report.residual_norm) max_resid = std::max(max_resid, r);
  std::cout << "ingest: wrote " << series.length() << " rows x " << series.dim()
            << " coefficients to " << o.output << " (max residual " << max_resid << ")\n";
  return 0;
}

int run_simulate(CLI::App& root, const SimulateOpts& o) {
  if (o.T < 1) throw ftspec::input_error("simulate: --T is required and must be >= 1");
  const bool single = !o.model_name.empty();
  const bool collection = o.setting > 0;
  if (single == collection)
    throw ftspec::input_error("simulate: pass exactly one of --model or --setting");

  if (single) {
    if (o.output.empty()) throw ftspec::input_error("simulate: --output is required with --model");
    emit_config(root, o.output + ".run.ini");
    ftspec::ModelSpec spec;
    spec.model = ftspec::parse_model(o.model_name);
    spec.T = o.T;
    spec.L = o.L;
    spec.seed = o.seed;
    spec.burn_in = o.burn_in;
    ftspec::FunctionalTimeSeries series = ftspec::simulate_model(spec);
    series.id = o.model_name + "-1";
    ftspec::write_coeff_csv(series, o.output);
    std::cout << "simulate: wrote " << o.output << '\n';
    return 0;
  }

  if (o.outdir.empty()) throw ftspec::input_error("simulate: --outdir is required with --setting");
  std::filesystem::create_directories(o.outdir);
  emit_config(root, o.outdir + "/run.ini");
  ftspec::LabeledCollection coll =
      ftspec::make_setting(o.setting, o.n, o.T, o.seed, o.L, o.threads);
  std::vector<std::string> ids;
  for (const auto& m : coll.members) {
    ftspec::write_coeff_csv(m, o.outdir + "/" + m.id + ".csv");
    ids.push_back(m.id);
  }
  ftspec::write_labels_json(ids, coll.labels, o.outdir + "/labels.json");
  std::cout << "simulate: wrote " << coll.members.size() << " series and labels.json to "
            << o.outdir << '\n';
  return 0;
}

int run_similarity(CLI::App& root, const SimilarityOpts& o) {
  emit_config(root, o.out_prefix + ".run.ini");
  if (o.inputs.size() < 2) throw ftspec::input_error("similarity: need at least two inputs");
  auto members = load_series(o.inputs);
  const ftspec::BlockPlan plan = plan_for(members[0].length(), o.M);
  const ftspec::SimilarityMatrix sim = ftspec::similarity_matrix(members, plan, o.threads);
  const ftspec::AdjacencyMatrix adj = ftspec::adjacency(sim, o.eta);

  ftspec::write_similarity_csv(sim, o.out_prefix + "_ahat.csv");
  ftspec::write_similarity_csv(ftspec::SimilarityMatrix{adj.weights, sim.ids},
                               o.out_prefix + "_what.csv");
  ftspec::write_similarity_json(sim, plan, o.out_prefix + "_ahat.json");

  if (!o.labels_path.empty()) {
    std::vector<std::string> ids;
    std::vector<int> labels;
    ftspec::read_labels_json(o.labels_path, ids, labels);
    std::vector<int> order(sim.ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> label_of(sim.ids.size());
    for (std::size_t i = 0; i < sim.ids.size(); ++i) {
      auto it = std::find(ids.begin(), ids.end(), sim.ids[i]);
      if (it == ids.end())
        throw ftspec::input_error("similarity: no label for series '" + sim.ids[i] + "'");
      label_of[i] = labels[it - ids.begin()];
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return label_of[a] < label_of[b]; });
    ftspec::SimilarityMatrix ordered;
    ordered.values.resize(sim.values.rows(), sim.values.cols());
    for (std::size_t i = 0; i < order.size(); ++i) {
      ordered.ids.push_back(sim.ids[order[i]]);
      for (std::size_t j = 0; j < order.size(); ++j)
        ordered.values(i, j) = sim.values(order[i], order[j]);
    }
    ftspec::write_similarity_csv(ordered, o.out_prefix + "_ahat_ordered.csv");
  }
  std::cout << "similarity: wrote " << o.out_prefix << "_ahat.csv (" << sim.ids.size()
            << " series, T=" << plan.T << " M=" << plan.M << " N=" << plan.N << ")\n";
  return 0;
}

int run_cluster(CLI::App& root, const ClusterOpts& o) {
  emit_config(root, o.output + ".run.ini");
  if ((o.k > 0) == !o.method.empty())
    throw ftspec::input_error("cluster: pass exactly one of --k or --method");

  const ftspec::SimilarityMatrix sim = ftspec::read_similarity_csv(o.similarity_path);
  int k = o.k;
  std::string method = "fixed";
  if (!o.method.empty()) {
    k = ftspec::select_k(sim, o.method, o.eta, o.k_max, o.seed);
    method = o.method;
  }

  const ftspec::AdjacencyMatrix adj = ftspec::adjacency(sim, o.eta);
  const ftspec::GraphLaplacian lap = ftspec::laplacian(adj);
  const ftspec::EigenDecomposition eig = ftspec::eigendecompose(lap);
  const ftspec::SpectralEmbedding emb = ftspec::embed(eig, k);
  ftspec::ClusterOutcome outcome = ftspec::kmeans(emb.points, k, o.restarts, o.seed);
  outcome.eigenvalues.assign(eig.eigenvalues.data(),
                             eig.eigenvalues.data() + eig.eigenvalues.size());
  outcome.degenerate_rows = emb.degenerate_rows;
  outcome.selection_method = method;

  double misclustering = std::numeric_limits<double>::quiet_NaN();
  if (!o.truth_path.empty()) {
    std::vector<std::string> ids;
    std::vector<int> labels;
    ftspec::read_labels_json(o.truth_path, ids, labels);
    std::vector<int> truth(sim.ids.size());
    for (std::size_t i = 0; i < sim.ids.size(); ++i) {
      auto it = std::find(ids.begin(), ids.end(), sim.ids[i]);
      if (it == ids.end())
        throw ftspec::input_error("cluster: no truth label for series '" + sim.ids[i] + "'");
      truth[i] = labels[it - ids.begin()];
    }
    misclustering = ftspec::misclustering_rate(outcome.labels, truth);
  }

  ftspec::write_cluster_report_json(outcome, sim.ids, emb.points, o.eta, misclustering,
                                    o.output);
  if (!o.embedding_csv.empty()) write_embedding_csv(sim.ids, emb.points, o.embedding_csv);
  std::cout << "cluster: k=" << k << " (" << method << "), inertia=" << outcome.inertia;
  if (!std::isnan(misclustering)) std::cout << ", misclustering=" << misclustering;
  std::cout << ", report " << o.output << '\n';
  return 0;
}

int run_select_k(CLI::App& root, const SelectKOpts& o) {
  emit_config(root, o.output + ".run.ini");
  const ftspec::SimilarityMatrix sim = ftspec::read_similarity_csv(o.similarity_path);
  const int k = ftspec::select_k(sim, o.method, o.eta, o.k_max, o.seed);
  json j{{"method", o.method}, {"eta", o.eta}, {"k_max", o.k_max}, {"k", k}};
  std::ofstream out(o.output);
  if (!out) throw ftspec::input_error(o.output + ": cannot open for writing");
  out << j.dump(2) << '\n';
  std::cout << "k=" << k << '\n';
  return 0;
}

int run_test(CLI::App& root, const TestOpts& o) {
  emit_config(root, o.output + ".run.ini");
  if (o.inputs.size() < 2) throw ftspec::input_error("test: need at least two inputs");
  auto members = load_series(o.inputs);
  const ftspec::BlockPlan plan = plan_for(members[0].length(), o.M);
  for (const auto& m : members)
    if (m.length() != plan.T || m.dim() != members[0].dim())
      throw ftspec::input_error("test: series '" + m.id + "' does not match the first input");

  const int d = static_cast<int>(members.size());
  std::vector<ftspec::LocalFdftTable> tables;
  tables.reserve(d);
  for (const auto& m : members) tables.push_back(ftspec::local_fdft(m, plan));

  std::vector<ftspec::PairTestRecord> records;
  Eigen::MatrixXd pvals = Eigen::MatrixXd::Constant(d, d, 0.5);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      ftspec::PairTestRecord rec;
      rec.id_a = members[i].id;
      rec.id_b = members[j].id;
      rec.result = ftspec::equality_test(tables[i], tables[j], o.alpha);
      pvals(i, j) = rec.result.p_value;
      pvals(j, i) = rec.result.p_value;
      records.push_back(std::move(rec));
    }
  }
  ftspec::write_test_report_json(records, plan, o.alpha, o.output);
  if (!o.pvalue_csv.empty()) ftspec::write_matrix_csv(pvals, [&] {
    std::vector<std::string> ids;
    for (const auto& m : members) ids.push_back(m.id);
    return ids;
  }(), o.pvalue_csv);

  int rejections = 0;
  for (const auto& r : records) rejections += r.result.reject ? 1 : 0;
  std::cout << "test: " << records.size() << " pairs, " << rejections
            << " rejections at alpha=" << o.alpha << ", report " << o.output << '\n';
  return 0;
}

struct RunningStat {
  double sum = 0.0, sq = 0.0;
  int n = 0;
  void add(double x) { sum += x; sq += x * x; ++n; }
  double mean() const { return n ? sum / n : 0.0; }
  double sd() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, (sq - n * m * m) / (n - 1)));
  }
};

int run_bench(CLI::App& root, const BenchOpts& o) {
  if (o.outdir.empty()) throw ftspec::input_error("bench: --outdir is required");
  std::filesystem::create_directories(o.outdir);
  emit_config(root, o.outdir + "/run.ini");
  if (o.replications < 1) throw ftspec::input_error("bench: replications must be >= 1");

  const int true_k = o.setting == 3 ? 6 : 3;

  if (o.mode == "cluster") {
    const auto methods = split_list(o.methods);
    std::vector<RunningStat> k_stats(methods.size()), misc_stats(methods.size());
    for (int rep = 0; rep < o.replications; ++rep) {
      const auto coll = ftspec::make_setting(o.setting, o.n, o.T,
                                             ftspec::derive_seed(o.seed, rep), o.L, o.threads);
      const ftspec::BlockPlan plan = plan_for(o.T, o.M);
      const auto sim = ftspec::similarity_matrix(coll.members, plan, o.threads);
      for (std::size_t m = 0; m < methods.size(); ++m) {
        const int k = methods[m] == "true"
                          ? true_k
                          : ftspec::select_k(sim, methods[m], o.eta, o.k_max,
                                             ftspec::derive_seed(o.seed, rep, m));
        const auto outcome = ftspec::spectral_cluster(sim, k, o.eta,
                                                      ftspec::derive_seed(o.seed, rep, m));
        k_stats[m].add(k);
        misc_stats[m].add(100.0 * ftspec::misclustering_rate(outcome.labels, coll.labels));
      }
    }
    std::ofstream out(o.outdir + "/bench_cluster.csv");
    out << "method,mean_k,sd_k,mean_misclustered_pct,sd_misclustered_pct\n";
    for (std::size_t m = 0; m < methods.size(); ++m)
      out << methods[m] << ',' << ftspec::format_double(k_stats[m].mean()) << ','
          << ftspec::format_double(k_stats[m].sd()) << ','
          << ftspec::format_double(misc_stats[m].mean()) << ','
          << ftspec::format_double(misc_stats[m].sd()) << '\n';
    std::cout << "bench: wrote " << o.outdir << "/bench_cluster.csv\n";
    return 0;
  }

  if (o.mode == "eta") {
    std::vector<RunningStat> misc_stats(o.etas.size());
    for (int rep = 0; rep < o.replications; ++rep) {
      const auto coll = ftspec::make_setting(o.setting, o.n, o.T,
                                             ftspec::derive_seed(o.seed, rep), o.L, o.threads);
      const ftspec::BlockPlan plan = plan_for(o.T, o.M);
      const auto sim = ftspec::similarity_matrix(coll.members, plan, o.threads);
      for (std::size_t e = 0; e < o.etas.size(); ++e) {
        const auto outcome = ftspec::spectral_cluster(sim, true_k, o.etas[e],
                                                      ftspec::derive_seed(o.seed, rep, e));
        misc_stats[e].add(100.0 * ftspec::misclustering_rate(outcome.labels, coll.labels));
      }
    }
    std::ofstream out(o.outdir + "/bench_eta.csv");
    out << "eta,mean_misclustered_pct,sd_misclustered_pct\n";
    for (std::size_t e = 0; e < o.etas.size(); ++e)
      out << ftspec::format_double(o.etas[e]) << ','
          << ftspec::format_double(misc_stats[e].mean()) << ','
          << ftspec::format_double(misc_stats[e].sd()) << '\n';
    std::cout << "bench: wrote " << o.outdir << "/bench_eta.csv\n";
    return 0;
  }

  if (o.mode == "test") {
    const auto model_names = split_list(o.models);
    std::vector<ftspec::Model> models;
    for (const auto& name : model_names) models.push_back(ftspec::parse_model(name));
    const int nm = static_cast<int>(models.size());
    const ftspec::BlockPlan plan = plan_for(o.T, o.M);

    std::vector<Eigen::MatrixXd> rates(o.alphas.size(),
                                       Eigen::MatrixXd::Zero(nm, nm));
    for (int i = 0; i < nm; ++i) {
      for (int j = i; j < nm; ++j) {
        std::vector<int> rejections(o.alphas.size(), 0);
        for (int rep = 0; rep < o.replications; ++rep) {
          ftspec::ModelSpec sa{models[i], o.T, o.L,
                               ftspec::derive_seed(o.seed, rep, 2 * (i * nm + j)), 200};
          ftspec::ModelSpec sb{models[j], o.T, o.L,
                               ftspec::derive_seed(o.seed, rep, 2 * (i * nm + j) + 1), 200};
          const auto ta = ftspec::local_fdft(ftspec::simulate_model(sa), plan);
          const auto tb = ftspec::local_fdft(ftspec::simulate_model(sb), plan);
          for (std::size_t a = 0; a < o.alphas.size(); ++a)
            rejections[a] += ftspec::equality_test(ta, tb, o.alphas[a]).reject ? 1 : 0;
        }
        for (std::size_t a = 0; a < o.alphas.size(); ++a) {
          rates[a](i, j) = 100.0 * rejections[a] / o.replications;
          rates[a](j, i) = rates[a](i, j);
        }
      }
    }
    for (std::size_t a = 0; a < o.alphas.size(); ++a) {
      std::ostringstream name;
      name << o.outdir << "/bench_test_alpha" << o.alphas[a] << ".csv";
      std::ofstream out(name.str());
      out << "model";
      for (const auto& n : model_names) out << ',' << n;
      out << '\n';
      for (int i = 0; i < nm; ++i) {
        out << model_names[i];
        for (int j = 0; j < nm; ++j) out << ',' << ftspec::format_double(rates[a](i, j));
        out << '\n';
      }
    }
    std::cout << "bench: wrote rejection-rate tables to " << o.outdir << '\n';
    return 0;
  }

  throw ftspec::input_error("bench: unknown mode '" + o.mode +
                            "' (expected cluster, eta, or test)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order similarity, clustering, and equality testing for "
               "functional time series via blockwise spectral estimates"};
  app.set_version_flag("--version", "ftspec 1.0.0");
  app.set_config("--config", "", "INI config file; command-line flags take precedence");
  app.require_subcommand(1);

  IngestOpts ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Fit gridded curves to basis coefficients");
  c_ingest->add_option("--input", ingest.input, "Gridded CSV input")->required();
  c_ingest->add_option("--output", ingest.output, "Coefficient CSV output")->required();
  c_ingest->add_option("--L", ingest.L, "Basis dimension")->capture_default_str();
  c_ingest->add_option("--missing-cap", ingest.missing_cap,
                       "Maximum missing fraction per row")->capture_default_str();
  c_ingest->add_flag("--center", ingest.center, "Subtract the per-series pointwise mean");

  SimulateOpts simulate;
  auto* c_sim = app.add_subcommand("simulate", "Generate series from the benchmark models");
  c_sim->add_option("--model", simulate.model_name, "Single model I..VI");
  c_sim->add_option("--setting", simulate.setting, "Collection setting 1..3");
  c_sim->add_option("--n", simulate.n, "Members per model (with --setting)")->capture_default_str();
  c_sim->add_option("--T", simulate.T, "Series length")->required();
  c_sim->add_option("--L", simulate.L, "Basis dimension")->capture_default_str();
  c_sim->add_option("--burn-in", simulate.burn_in, "Discarded leading samples")->capture_default_str();
  c_sim->add_option("--seed", simulate.seed, "RNG seed")->capture_default_str();
  c_sim->add_option("--output", simulate.output, "Coefficient CSV (with --model)");
  c_sim->add_option("--outdir", simulate.outdir, "Output directory (with --setting)");
  c_sim->add_option("--threads", simulate.threads, "Worker threads, 0 = auto")->capture_default_str();

  SimilarityOpts similarity;
  auto* c_simil = app.add_subcommand("similarity", "Pairwise similarity matrix");
  c_simil->add_option("--inputs", similarity.inputs, "Coefficient CSV files")->required();
  c_simil->add_option("--out-prefix", similarity.out_prefix, "Output path prefix")->required();
  c_simil->add_option("--M", similarity.M, "Block count, 0 = auto (T/32)")->capture_default_str();
  c_simil->add_option("--eta", similarity.eta, "Adjacency scale")->capture_default_str();
  c_simil->add_option("--labels", similarity.labels_path,
                      "Labels JSON for a label-ordered matrix");
  c_simil->add_option("--threads", similarity.threads, "Worker threads, 0 = auto")->capture_default_str();

  ClusterOpts cluster;
  auto* c_cluster = app.add_subcommand("cluster", "Spectral clustering of a similarity matrix");
  c_cluster->add_option("--similarity", cluster.similarity_path, "Similarity CSV")->required();
  c_cluster->add_option("--output", cluster.output, "Report JSON")->required();
  c_cluster->add_option("--k", cluster.k, "Fixed cluster count");
  c_cluster->add_option("--method", cluster.method,
                        "Selection method: relgap, sd1gap, ch, silhouette");
  c_cluster->add_option("--eta", cluster.eta, "Adjacency scale")->capture_default_str();
  c_cluster->add_option("--k-max", cluster.k_max, "Selection upper bound")->capture_default_str();
  c_cluster->add_option("--restarts", cluster.restarts, "k-means restarts")->capture_default_str();
  c_cluster->add_option("--seed", cluster.seed, "RNG seed")->capture_default_str();
  c_cluster->add_option("--truth", cluster.truth_path, "Ground-truth labels JSON");
  c_cluster->add_option("--embedding-csv", cluster.embedding_csv, "Embedding CSV output");

  SelectKOpts selectk;
  auto* c_select = app.add_subcommand("select-k", "Choose the cluster count");
  c_select->add_option("--similarity", selectk.similarity_path, "Similarity CSV")->required();
  c_select->add_option("--method", selectk.method,
                       "relgap, sd1gap, ch, or silhouette")->required();
  c_select->add_option("--eta", selectk.eta, "Adjacency scale")->capture_default_str();
  c_select->add_option("--k-max", selectk.k_max, "Upper bound")->capture_default_str();
  c_select->add_option("--seed", selectk.seed, "RNG seed")->capture_default_str();
  c_select->add_option("--output", selectk.output, "Result JSON")->capture_default_str();

  TestOpts test;
  auto* c_test = app.add_subcommand("test", "Pairwise equality tests");
  c_test->add_option("--inputs", test.inputs, "Coefficient CSV files")->required();
  c_test->add_option("--output", test.output, "Report JSON")->required();
  c_test->add_option("--M", test.M, "Block count, 0 = auto (T/32)")->capture_default_str();
  c_test->add_option("--alpha", test.alpha, "Test level")->capture_default_str();
  c_test->add_option("--pvalue-csv", test.pvalue_csv, "P-value matrix CSV");

  BenchOpts bench;
  auto* c_bench = app.add_subcommand("bench", "Replicated benchmark tables");
  c_bench->add_option("--mode", bench.mode, "cluster, eta, or test")->capture_default_str();
  c_bench->add_option("--outdir", bench.outdir, "Output directory")->required();
  c_bench->add_option("--setting", bench.setting, "Collection setting 1..3")->capture_default_str();
  c_bench->add_option("--n", bench.n, "Members per model")->capture_default_str();
  c_bench->add_option("--T", bench.T, "Series length")->capture_default_str();
  c_bench->add_option("--L", bench.L, "Basis dimension")->capture_default_str();
  c_bench->add_option("--M", bench.M, "Block count, 0 = auto")->capture_default_str();
  c_bench->add_option("--replications", bench.replications, "Replications")->capture_default_str();
  c_bench->add_option("--eta", bench.eta, "Adjacency scale (cluster mode)")->capture_default_str();
  c_bench->add_option("--etas", bench.etas, "Eta sweep values (eta mode)");
  c_bench->add_option("--alphas", bench.alphas, "Test levels (test mode)");
  c_bench->add_option("--methods", bench.methods, "Cluster-mode methods")->capture_default_str();
  c_bench->add_option("--models", bench.models, "Test-mode models")->capture_default_str();
  c_bench->add_option("--k-max", bench.k_max, "Selection upper bound")->capture_default_str();
  c_bench->add_option("--seed", bench.seed, "RNG seed")->capture_default_str();
  c_bench->add_option("--threads", bench.threads, "Worker threads, 0 = auto")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_ingest->parsed()) return run_ingest(app, ingest);
    if (c_sim->parsed()) return run_simulate(app, simulate);
    if (c_simil->parsed()) return run_similarity(app, similarity);
    if (c_cluster->parsed()) return run_cluster(app, cluster);
    if (c_select->parsed()) return run_select_k(app, selectk);
    if (c_test->parsed()) return run_test(app, test);
    if (c_bench->parsed()) return run_bench(app, bench);
  } catch (const ftspec::numeric_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
