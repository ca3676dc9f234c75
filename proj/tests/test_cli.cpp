// End-to-end checks that drive the installed binary the way a user would.
// Inputs are prepared with the library's own writers; everything else goes
// through argv, files, and exit codes.

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftspec/io.hpp"
#include "ftspec/sim_models.hpp"
#include "ftspec/similarity.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path("cli_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(FTSPEC_CLI_PATH) + " " + args + " > " + out.string() +
                          " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

json load_json_file(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return json::parse(in);
}

ftspec::FunctionalTimeSeries random_series(int t_len, int dim, unsigned seed,
                                           const std::string& id) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ftspec::FunctionalTimeSeries x;
  x.coeffs.resize(t_len, dim);
  for (int t = 0; t < t_len; ++t)
    for (int l = 0; l < dim; ++l) x.coeffs(t, l) = gauss(rng);
  x.basis = {ftspec::BasisFamily::Fourier, dim};
  x.id = id;
  return x;
}

// 9 series in 3 ideal groups, written as a similarity CSV plus truth labels.
void write_grouped_inputs(const fs::path& dir, fs::path& sim_path, fs::path& truth_path) {
  ftspec::SimilarityMatrix sim;
  std::vector<int> truth;
  const int d = 9;
  sim.values = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    sim.ids.push_back("s" + std::to_string(i));
    truth.push_back(i / 3);
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) sim.values(i, j) = (truth[i] == truth[j]) ? 0.05 : 0.95;
  sim_path = dir / "sim.csv";
  truth_path = dir / "truth.json";
  ftspec::write_similarity_csv(sim, sim_path.string());
  ftspec::write_labels_json(sim.ids, truth, truth_path.string());
}

}  // namespace

TEST_CASE("cli: version and argument errors") {
  const fs::path dir = scratch("args");
  CHECK(run_cli("--version", dir).code == 0);
  CHECK(run_cli("", dir).code == 1);             // a subcommand is required
  CHECK(run_cli("frobnicate", dir).code == 1);   // unknown subcommand
  CHECK(run_cli("simulate --T 32", dir).code == 1);  // neither --model nor --setting
}

TEST_CASE("cli: single-model simulation is reproducible") {
  const fs::path dir = scratch("simulate");
  const std::string base = " simulate --model II --T 64 --L 7 --seed 42 --output ";
  const fs::path a = dir / "a.csv";
  const fs::path b = dir / "b.csv";
  CHECK(run_cli(base + a.string(), dir).code == 0);
  CHECK(run_cli(base + b.string(), dir).code == 0);
  CHECK(slurp(a) == slurp(b));

  const ftspec::FunctionalTimeSeries x = ftspec::read_coeff_csv(a.string());
  CHECK(x.length() == 64);
  CHECK(x.dim() == 7);
  CHECK(x.id == "II-1");
  CHECK(fs::exists(dir / "a.csv.run.ini"));  // resolved configuration sidecar
}

TEST_CASE("cli: setting simulation writes members and labels") {
  const fs::path dir = scratch("setting");
  const fs::path outdir = dir / "coll";
  const RunResult r = run_cli("simulate --setting 1 --n 2 --T 32 --seed 1 --outdir " +
                              outdir.string(), dir);
  CHECK(r.code == 0);
  for (const char* name : {"I-1.csv", "I-2.csv", "II-1.csv", "II-2.csv", "III-1.csv",
                           "III-2.csv", "labels.json", "run.ini"})
    CHECK(fs::exists(outdir / name));

  std::vector<std::string> ids;
  std::vector<int> labels;
  ftspec::read_labels_json((outdir / "labels.json").string(), ids, labels);
  CHECK(ids == std::vector<std::string>{"I-1", "I-2", "II-1", "II-2", "III-1", "III-2"});
  CHECK(labels == std::vector<int>{0, 0, 1, 1, 2, 2});
}

TEST_CASE("cli: ingest fits curves and reports skipped rows") {
  const fs::path dir = scratch("ingest");
  const fs::path input = dir / "curves.csv";
  // Three rows on a 21-point grid; the second row is half missing.
  std::ostringstream text;
  text << "demo,3,21\n";
  for (int t = 0; t < 3; ++t) {
    for (int p = 0; p < 21; ++p) {
      if (p) text << ',';
      if (t == 1 && p % 2 == 0)
        text << "NA";
      else
        text << 1.0 + 0.5 * std::sin(2.0 * 3.14159265358979312 * p / 20.0);
    }
    text << '\n';
  }
  spit(input, text.str());

  const fs::path output = dir / "coeff.csv";
  const RunResult r = run_cli("ingest --input " + input.string() + " --output " +
                              output.string() + " --L 5", dir);
  CHECK(r.code == 0);
  CHECK(r.err.find("skipped row 2") != std::string::npos);
  CHECK(r.out.find("2 rows x 5 coefficients") != std::string::npos);

  const ftspec::FunctionalTimeSeries fit = ftspec::read_coeff_csv(output.string());
  CHECK(fit.length() == 2);
  CHECK(fit.coeffs(0, 0) == doctest::Approx(1.0).epsilon(1e-6));   // constant part
  CHECK(fit.coeffs(0, 2) == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-3));

  // Centering removes the across-time mean of every coefficient.
  const fs::path centered = dir / "centered.csv";
  CHECK(run_cli("ingest --input " + input.string() + " --output " + centered.string() +
                " --L 5 --center", dir).code == 0);
  const ftspec::FunctionalTimeSeries c = ftspec::read_coeff_csv(centered.string());
  CHECK(c.coeffs.colwise().mean().cwiseAbs().maxCoeff() < 1e-12);

  const fs::path bad = dir / "bad.csv";
  spit(bad, "demo,2,3\n1,2,3\n4,x,6\n");
  const RunResult rb = run_cli("ingest --input " + bad.string() + " --output " +
                               (dir / "nope.csv").string() + " --L 3", dir);
  CHECK(rb.code == 1);
  CHECK(rb.err.find("line 3") != std::string::npos);
}

TEST_CASE("cli: similarity pipeline outputs") {
  const fs::path dir = scratch("similarity");
  ftspec::FunctionalTimeSeries x = random_series(32, 3, 5u, "x");
  ftspec::FunctionalTimeSeries x2 = x;
  x2.coeffs *= 2.0;
  x2.id = "x2";
  ftspec::write_coeff_csv(x, (dir / "x.csv").string());
  ftspec::write_coeff_csv(x2, (dir / "x2.csv").string());

  const std::string prefix = (dir / "out").string();
  const RunResult r = run_cli("similarity --inputs " + (dir / "x.csv").string() + " " +
                              (dir / "x2.csv").string() + " --out-prefix " + prefix +
                              " --M 2 --eta 1", dir);
  CHECK(r.code == 0);

  const ftspec::SimilarityMatrix sim = ftspec::read_similarity_csv(prefix + "_ahat.csv");
  CHECK(sim.ids == std::vector<std::string>{"x", "x2"});
  CHECK(sim.values(0, 1) == doctest::Approx(9.0 / 17.0).epsilon(1e-12));
  CHECK(sim.values(0, 0) == 0.0);

  const ftspec::SimilarityMatrix weights = ftspec::read_similarity_csv(prefix + "_what.csv");
  CHECK(weights.values(0, 0) == 1.0);
  CHECK(weights.values(0, 1) == doctest::Approx(std::exp(-9.0 / 17.0)).epsilon(1e-12));

  const json envelope = load_json_file(prefix + "_ahat.json");
  CHECK(envelope["plan"]["T"] == 32);
  CHECK(envelope["plan"]["M"] == 2);
  CHECK(envelope["plan"]["N"] == 16);
  CHECK(envelope["ids"].size() == 2);
  CHECK(envelope["matrix"][0][1].get<double>() == doctest::Approx(9.0 / 17.0));

  // Label-ordered variant puts the id with the smaller label first.
  ftspec::write_labels_json({"x", "x2"}, {1, 0}, (dir / "labels.json").string());
  CHECK(run_cli("similarity --inputs " + (dir / "x.csv").string() + " " +
                (dir / "x2.csv").string() + " --out-prefix " + prefix + " --M 2 --labels " +
                (dir / "labels.json").string(), dir).code == 0);
  const ftspec::SimilarityMatrix ordered =
      ftspec::read_similarity_csv(prefix + "_ahat_ordered.csv");
  CHECK(ordered.ids == std::vector<std::string>{"x2", "x"});

  // Two identically-zero inputs are a numeric degeneracy: exit code 2.
  ftspec::FunctionalTimeSeries z = x;
  z.coeffs.setZero();
  z.id = "z1";
  ftspec::write_coeff_csv(z, (dir / "z1.csv").string());
  z.id = "z2";
  ftspec::write_coeff_csv(z, (dir / "z2.csv").string());
  const RunResult rz = run_cli("similarity --inputs " + (dir / "z1.csv").string() + " " +
                               (dir / "z2.csv").string() + " --out-prefix " +
                               (dir / "zz").string() + " --M 2", dir);
  CHECK(rz.code == 2);
}

TEST_CASE("cli: clustering a grouped similarity matrix") {
  const fs::path dir = scratch("cluster");
  fs::path sim_path, truth_path;
  write_grouped_inputs(dir, sim_path, truth_path);

  const fs::path report = dir / "report.json";
  const fs::path emb = dir / "embedding.csv";
  const RunResult r = run_cli("cluster --similarity " + sim_path.string() + " --output " +
                              report.string() + " --k 3 --eta 5 --seed 7 --truth " +
                              truth_path.string() + " --embedding-csv " + emb.string(), dir);
  CHECK(r.code == 0);

  const json j = load_json_file(report);
  CHECK(j["k"] == 3);
  CHECK(j["selection_method"] == "fixed");
  CHECK(j["eta"] == 5.0);
  CHECK(j["diagnostics"]["misclustering"] == 0.0);
  CHECK(j["labels"].size() == 9);
  CHECK(j["eigenvalues"].size() == 9);
  CHECK(j["embedding"].size() == 9);
  // Labels agree within groups.
  CHECK(j["labels"][0] == j["labels"][1]);
  CHECK(j["labels"][0] == j["labels"][2]);
  CHECK(j["labels"][3] == j["labels"][4]);
  CHECK(j["labels"][0] != j["labels"][3]);
  CHECK(j["labels"][0] != j["labels"][6]);

  std::ifstream embf(emb);
  std::string header;
  std::getline(embf, header);
  CHECK(header == "id,e1,e2,e3");

  // Exactly one of --k / --method.
  CHECK(run_cli("cluster --similarity " + sim_path.string() + " --output " +
                (dir / "r2.json").string(), dir).code == 1);
  CHECK(run_cli("cluster --similarity " + sim_path.string() + " --output " +
                (dir / "r3.json").string() + " --k 3 --method ch", dir).code == 1);
}

TEST_CASE("cli: selection prints and records the chosen k") {
  const fs::path dir = scratch("selectk");
  fs::path sim_path, truth_path;
  write_grouped_inputs(dir, sim_path, truth_path);

  const fs::path out = dir / "choice.json";
  const RunResult r = run_cli("select-k --similarity " + sim_path.string() +
                              " --method ch --k-max 5 --seed 3 --output " + out.string(), dir);
  CHECK(r.code == 0);
  CHECK(r.out == "k=3\n");
  const json j = load_json_file(out);
  CHECK(j["k"] == 3);
  CHECK(j["method"] == "ch");
  CHECK(j["k_max"] == 5);

  CHECK(run_cli("select-k --similarity " + sim_path.string() + " --method bogus --output " +
                (dir / "x.json").string(), dir).code == 1);
}

TEST_CASE("cli: pairwise equality tests") {
  const fs::path dir = scratch("test");
  ftspec::ModelSpec white;
  white.model = ftspec::Model::I;
  white.T = 512;
  white.seed = 31u;
  ftspec::FunctionalTimeSeries a = ftspec::simulate_model(white);
  a.id = "wn";
  ftspec::FunctionalTimeSeries b = a;
  b.id = "wn_copy";
  ftspec::ModelSpec tv;
  tv.model = ftspec::Model::V;
  tv.T = 512;
  tv.seed = 32u;
  ftspec::FunctionalTimeSeries c = ftspec::simulate_model(tv);
  c.id = "tvfar";
  ftspec::write_coeff_csv(a, (dir / "a.csv").string());
  ftspec::write_coeff_csv(b, (dir / "b.csv").string());
  ftspec::write_coeff_csv(c, (dir / "c.csv").string());

  const fs::path report = dir / "tests.json";
  const fs::path pcsv = dir / "pvals.csv";
  const RunResult r = run_cli("test --inputs " + (dir / "a.csv").string() + " " +
                              (dir / "b.csv").string() + " " + (dir / "c.csv").string() +
                              " --output " + report.string() + " --alpha 0.05 --pvalue-csv " +
                              pcsv.string(), dir);
  CHECK(r.code == 0);

  const json j = load_json_file(report);
  CHECK(j["alpha"] == 0.05);
  CHECK(j["plan"]["M"] == 16);  // 512/32 by default
  REQUIRE(j["tests"].size() == 3);
  // Pair (wn, wn_copy) sits exactly at the null point.
  const json& null_pair = j["tests"][0];
  CHECK(null_pair["pair"][0] == "wn");
  CHECK(null_pair["pair"][1] == "wn_copy");
  CHECK(null_pair["a_hat"] == 0.0);
  CHECK(null_pair["p_value"] == 0.5);
  CHECK(null_pair["reject"] == false);
  // Both white-noise-vs-break pairs reject decisively.
  CHECK(j["tests"][1]["reject"] == true);
  CHECK(j["tests"][2]["reject"] == true);

  const ftspec::SimilarityMatrix pv = ftspec::read_similarity_csv(pcsv.string());
  CHECK(pv.values(0, 0) == 0.5);  // diagonal convention
  CHECK(pv.values(0, 1) == 0.5);
  CHECK(pv.values(0, 2) < 0.05);

  CHECK(run_cli("test --inputs " + (dir / "a.csv").string() + " " + (dir / "b.csv").string() +
                " --output " + (dir / "x.json").string() + " --alpha 1.5", dir).code == 1);
}

TEST_CASE("cli: config file supplies defaults, flags win") {
  const fs::path dir = scratch("config");
  const fs::path cfg = dir / "run.ini";
  spit(cfg, "[simulate]\nseed=5\n");

  const fs::path from_cfg = dir / "cfg.csv";
  const fs::path direct5 = dir / "direct5.csv";
  const fs::path direct9 = dir / "direct9.csv";
  const fs::path override9 = dir / "override9.csv";

  CHECK(run_cli("--config " + cfg.string() + " simulate --model I --T 32 --output " +
                from_cfg.string(), dir).code == 0);
  CHECK(run_cli("simulate --model I --T 32 --seed 5 --output " + direct5.string(), dir).code == 0);
  CHECK(run_cli("simulate --model I --T 32 --seed 9 --output " + direct9.string(), dir).code == 0);
  CHECK(run_cli("--config " + cfg.string() + " simulate --model I --T 32 --seed 9 --output " +
                override9.string(), dir).code == 0);

  CHECK(slurp(from_cfg) == slurp(direct5));       // config value used
  CHECK(slurp(override9) == slurp(direct9));      // explicit flag beats config
  CHECK(slurp(from_cfg) != slurp(direct9));

  // The resolved-config sidecar records the effective seed.
  const std::string resolved = slurp(dir / "override9.csv.run.ini");
  CHECK(resolved.find("seed=9") != std::string::npos);
}
