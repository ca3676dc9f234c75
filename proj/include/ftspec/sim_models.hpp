#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ftspec/series.hpp"

namespace ftspec {

/// The six generator families. I-III are stationary (white noise, FAR(2),
/// FMA(1)); IV-VI are non-stationary (time-varying innovation scale,
/// time-varying AR norm, structural break).
enum class Model { I, II, III, IV, V, VI };

Model parse_model(const std::string& name);   // "I".."VI"
std::string model_name(Model m);

/// Entry-variance profile for random operator draws, 1-based in (l, l'):
///   ExpDecay:  nu = exp(-l - l')
///   PolyDecay: nu = 1 / (l + l'^{3/2})
enum class VarianceRule { ExpDecay, PolyDecay };

struct OperatorSpec {
  VarianceRule rule = VarianceRule::ExpDecay;
  double kappa = 0.0;  // target signed spectral norm
  int L = 0;
};

/// Random L x L coefficient operator: independent N(0, nu(l,l')) entries,
/// rescaled to spectral norm |kappa| and multiplied by sign(kappa).
/// An all-zero draw (probability zero) is redrawn.
Eigen::MatrixXd gen_operator(const OperatorSpec& spec, std::mt19937_64& rng);

/// Unscaled draw with independent N(0, nu(l,l')) entries.
Eigen::MatrixXd gen_operator_raw(VarianceRule rule, int L, std::mt19937_64& rng);

/// T x L Gaussian innovations, independent across cells, column l with
/// variance exp(-(l-1)/10). Rows are drawn in time order.
Eigen::MatrixXd gen_innovations(int T, int L, std::mt19937_64& rng);

struct ModelSpec {
  Model model = Model::I;
  int T = 0;
  int L = 15;
  std::uint64_t seed = 0;
  int burn_in = 200;
};

/// Simulates one realization. Operators are drawn once per realization (time
/// variation enters only through scalar schedules); initial states are zero
/// and `burn_in` leading samples are discarded. Time-varying schedules are
/// evaluated at t/T over the post-burn-in index, frozen at t=1 during
/// burn-in. Output is fully determined by (spec, seed).
FunctionalTimeSeries simulate_model(const ModelSpec& spec);

struct LabeledCollection {
  std::vector<FunctionalTimeSeries> members;
  std::vector<int> labels;  // ground truth group per member, 0-based
};

/// Benchmark collections: setting 1 draws n members from each of models
/// I-III, setting 2 from IV-VI, setting 3 from all six. Each model group
/// draws its operators once and all n members share them, so a group forms a
/// spectrally homogeneous cluster; members differ only through innovation
/// streams seeded from (seed, member index). Generation may run concurrently
/// and distinct base seeds give independent collections.
LabeledCollection make_setting(int setting, int n, int T, std::uint64_t seed, int L = 15,
                               unsigned threads = 0);

}  // namespace ftspec
