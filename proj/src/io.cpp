#include "ftspec/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "ftspec/errors.hpp"

namespace ftspec {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& field, const std::string& path, int line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw input_error(path + ": line " + std::to_string(line_no) +
                      ": expected a number, got '" + field + "'");
  return v;
}

long parse_long(const std::string& field, const std::string& path, int line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw input_error(path + ": line " + std::to_string(line_no) +
                      ": expected an integer, got '" + field + "'");
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error(path + ": cannot open for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error(path + ": cannot open for reading");
  return in;
}

void check_id(const std::string& id) {
  if (id.empty()) throw input_error("io: empty series id");
  if (id.find(',') != std::string::npos)
    throw input_error("io: series id '" + id + "' contains a comma");
}

json plan_to_json(const BlockPlan& plan) {
  return json{{"T", plan.T}, {"M", plan.M}, {"N", plan.N}};
}

void dump_json(const json& j, const std::string& path) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw input_error(path + ": write failed");
}

json load_json(const std::string& path) {
  auto in = open_in(path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw input_error(path + ": " + e.what());
  }
  return j;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_coeff_csv(const FunctionalTimeSeries& series, const std::string& path) {
  check_id(series.id);
  if (series.length() < 1 || series.dim() < 1)
    throw input_error("io: series '" + series.id + "' is empty");
  auto out = open_out(path);
  out << series.id << ',' << series.length() << ',' << series.dim() << '\n';
  for (int t = 0; t < series.length(); ++t) {
    for (int l = 0; l < series.dim(); ++l) {
      if (l) out << ',';
      out << format_double(series.coeffs(t, l));
    }
    out << '\n';
  }
  if (!out) throw input_error(path + ": write failed");
}

FunctionalTimeSeries read_coeff_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw input_error(path + ": empty file");
  auto head = split_csv_line(line);
  if (head.size() != 3)
    throw input_error(path + ": line 1: expected '<id>,<T>,<L>', got " +
                      std::to_string(head.size()) + " fields");
  FunctionalTimeSeries series;
  series.id = head[0];
  check_id(series.id);
  const long T = parse_long(head[1], path, 1);
  const long L = parse_long(head[2], path, 1);
  if (T < 1 || L < 1) throw input_error(path + ": line 1: T and L must be >= 1");
  series.basis = BasisSpec{BasisFamily::Fourier, static_cast<int>(L)};
  series.coeffs.resize(T, L);

  for (long t = 0; t < T; ++t) {
    if (!std::getline(in, line))
      throw input_error(path + ": truncated, expected " + std::to_string(T) +
                        " coefficient rows, got " + std::to_string(t));
    const int line_no = static_cast<int>(t) + 2;
    auto fields = split_csv_line(line);
    if (static_cast<long>(fields.size()) != L)
      throw input_error(path + ": line " + std::to_string(line_no) + ": expected " +
                        std::to_string(L) + " fields, got " + std::to_string(fields.size()));
    for (long l = 0; l < L; ++l)
      series.coeffs(t, l) = parse_double(fields[l], path, line_no);
  }
  return series;
}

void write_gridded_csv(const GriddedSample& sample, const std::string& path) {
  check_id(sample.id);
  auto out = open_out(path);
  const int T = static_cast<int>(sample.values.rows());
  const int P = static_cast<int>(sample.values.cols());
  out << sample.id << ',' << T << ',' << P << '\n';
  out << "grid";
  for (double g : sample.grid) out << ',' << format_double(g);
  out << '\n';
  for (int t = 0; t < T; ++t) {
    for (int p = 0; p < P; ++p) {
      if (p) out << ',';
      if (std::isnan(sample.values(t, p)))
        out << "NA";
      else
        out << format_double(sample.values(t, p));
    }
    out << '\n';
  }
  if (!out) throw input_error(path + ": write failed");
}

GriddedSample read_gridded_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw input_error(path + ": empty file");
  auto head = split_csv_line(line);
  if (head.size() != 3)
    throw input_error(path + ": line 1: expected '<id>,<T>,<P>', got " +
                      std::to_string(head.size()) + " fields");
  GriddedSample sample;
  sample.id = head[0];
  check_id(sample.id);
  const long T = parse_long(head[1], path, 1);
  const long P = parse_long(head[2], path, 1);
  if (T < 1 || P < 1) throw input_error(path + ": line 1: T and P must be >= 1");
  sample.values.resize(T, P);

  int line_no = 1;
  if (!std::getline(in, line))
    throw input_error(path + ": truncated after header");
  ++line_no;

  auto first = split_csv_line(line);
  long t0 = 0;
  if (!first.empty() && first[0] == "grid") {
    if (static_cast<long>(first.size()) != P + 1)
      throw input_error(path + ": line 2: grid row needs " + std::to_string(P) + " points");
    sample.grid.resize(P);
    for (long p = 0; p < P; ++p)
      sample.grid[p] = parse_double(first[p + 1], path, line_no);
  } else {
    sample.grid.resize(P);
    for (long p = 0; p < P; ++p)
      sample.grid[p] = P == 1 ? 0.0 : static_cast<double>(p) / (P - 1);
    // First line was already a data row.
    if (static_cast<long>(first.size()) != P)
      throw input_error(path + ": line 2: expected " + std::to_string(P) + " fields, got " +
                        std::to_string(first.size()));
    for (long p = 0; p < P; ++p)
      sample.values(0, p) = first[p] == "NA"
                                ? std::numeric_limits<double>::quiet_NaN()
                                : parse_double(first[p], path, line_no);
    t0 = 1;
  }

  for (long t = t0; t < T; ++t) {
    if (!std::getline(in, line))
      throw input_error(path + ": truncated, expected " + std::to_string(T) + " data rows");
    ++line_no;
    auto fields = split_csv_line(line);
    if (static_cast<long>(fields.size()) != P)
      throw input_error(path + ": line " + std::to_string(line_no) + ": expected " +
                        std::to_string(P) + " fields, got " + std::to_string(fields.size()));
    for (long p = 0; p < P; ++p)
      sample.values(t, p) = fields[p] == "NA"
                                ? std::numeric_limits<double>::quiet_NaN()
                                : parse_double(fields[p], path, line_no);
  }
  return sample;
}

void write_similarity_csv(const SimilarityMatrix& sim, const std::string& path) {
  const int d = static_cast<int>(sim.values.rows());
  if (static_cast<int>(sim.ids.size()) != d)
    throw input_error("io: similarity ids do not match matrix size");
  auto out = open_out(path);
  for (int i = 0; i < d; ++i) {
    check_id(sim.ids[i]);
    if (i) out << ',';
    out << sim.ids[i];
  }
  out << '\n';
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (j) out << ',';
      out << format_double(sim.values(i, j));
    }
    out << '\n';
  }
  if (!out) throw input_error(path + ": write failed");
}

SimilarityMatrix read_similarity_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw input_error(path + ": empty file");
  SimilarityMatrix sim;
  sim.ids = split_csv_line(line);
  const int d = static_cast<int>(sim.ids.size());
  if (d < 1) throw input_error(path + ": line 1: no ids");
  sim.values.resize(d, d);
  for (int i = 0; i < d; ++i) {
    if (!std::getline(in, line))
      throw input_error(path + ": truncated, expected " + std::to_string(d) + " matrix rows");
    const int line_no = i + 2;
    auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != d)
      throw input_error(path + ": line " + std::to_string(line_no) + ": expected " +
                        std::to_string(d) + " fields, got " + std::to_string(fields.size()));
    for (int j = 0; j < d; ++j) sim.values(i, j) = parse_double(fields[j], path, line_no);
  }
  return sim;
}

void write_similarity_json(const SimilarityMatrix& sim, const BlockPlan& plan,
                           const std::string& path) {
  json j;
  j["ids"] = sim.ids;
  j["plan"] = plan_to_json(plan);
  std::vector<std::vector<double>> rows(sim.values.rows());
  for (Eigen::Index i = 0; i < sim.values.rows(); ++i) {
    rows[i].resize(sim.values.cols());
    for (Eigen::Index jj = 0; jj < sim.values.cols(); ++jj) rows[i][jj] = sim.values(i, jj);
  }
  j["matrix"] = rows;
  dump_json(j, path);
}

void write_labels_json(const std::vector<std::string>& ids, const std::vector<int>& labels,
                       const std::string& path) {
  if (ids.size() != labels.size()) throw input_error("io: ids and labels differ in length");
  dump_json(json{{"ids", ids}, {"labels", labels}}, path);
}

void read_labels_json(const std::string& path, std::vector<std::string>& ids,
                      std::vector<int>& labels) {
  const json j = load_json(path);
  if (!j.contains("ids") || !j.contains("labels"))
    throw input_error(path + ": expected keys 'ids' and 'labels'");
  ids = j.at("ids").get<std::vector<std::string>>();
  labels = j.at("labels").get<std::vector<int>>();
  if (ids.size() != labels.size())
    throw input_error(path + ": ids and labels differ in length");
}

void write_cluster_report_json(const ClusterOutcome& outcome,
                               const std::vector<std::string>& ids,
                               const Eigen::MatrixXd& embedding, double eta,
                               double misclustering, const std::string& path) {
  json j;
  j["ids"] = ids;
  j["labels"] = outcome.labels;
  j["k"] = outcome.chosen_k;
  j["selection_method"] = outcome.selection_method.empty() ? "fixed" : outcome.selection_method;
  j["eta"] = eta;
  j["eigenvalues"] = outcome.eigenvalues;
  j["diagnostics"] = json{{"inertia", outcome.inertia},
                          {"degenerate_rows", outcome.degenerate_rows}};
  if (!std::isnan(misclustering)) j["diagnostics"]["misclustering"] = misclustering;
  std::vector<std::vector<double>> emb(embedding.rows());
  for (Eigen::Index i = 0; i < embedding.rows(); ++i) {
    emb[i].resize(embedding.cols());
    for (Eigen::Index c = 0; c < embedding.cols(); ++c) emb[i][c] = embedding(i, c);
  }
  j["embedding"] = emb;
  dump_json(j, path);
}

void write_test_report_json(const std::vector<PairTestRecord>& records,
                            const BlockPlan& plan, double alpha, const std::string& path) {
  json arr = json::array();
  for (const auto& rec : records) {
    arr.push_back(json{{"pair", {rec.id_a, rec.id_b}},
                       {"a_hat", rec.result.a_hat},
                       {"sigma2_hat", rec.result.sigma2_hat},
                       {"statistic", rec.result.statistic},
                       {"p_value", rec.result.p_value},
                       {"reject", rec.result.reject}});
  }
  dump_json(json{{"plan", plan_to_json(plan)}, {"alpha", alpha}, {"tests", arr}}, path);
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& header,
                      const std::string& path) {
  if (static_cast<Eigen::Index>(header.size()) != m.cols())
    throw input_error("io: header does not match matrix columns");
  auto out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw input_error(path + ": write failed");
}

}  // namespace ftspec
