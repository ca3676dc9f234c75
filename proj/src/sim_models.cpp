#include "ftspec/sim_models.hpp"

#include <cmath>
#include <string>

#include "ftspec/errors.hpp"
#include "ftspec/numeric.hpp"
#include "ftspec/parallel.hpp"
#include "ftspec/rng.hpp"

namespace ftspec {

namespace {

double entry_variance(VarianceRule rule, int l, int lp) {
  switch (rule) {
    case VarianceRule::ExpDecay: return std::exp(-static_cast<double>(l + lp));
    case VarianceRule::PolyDecay: return 1.0 / (l + std::pow(static_cast<double>(lp), 1.5));
  }
  throw input_error("operator: unknown variance rule");
}

double spectral_norm(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

// Unit-spectral-norm draw; time-varying models scale it by a scalar schedule.
Eigen::MatrixXd draw_unit_operator(VarianceRule rule, int L, std::mt19937_64& rng) {
  for (;;) {
    Eigen::MatrixXd raw = gen_operator_raw(rule, L, rng);
    const double norm = spectral_norm(raw);
    if (norm > 0.0) return raw / norm;
  }
}

// Innovation standard deviation for coefficient l (1-based) under the default
// profile Var = exp(-(l-1)/10).
double default_innovation_sd(int l) { return std::exp(-(l - 1) / 20.0); }

double model_iv_scale2(double t_over_T) {
  return std::cos(0.5 + std::cos(kTwoPi * t_over_T) + 0.3 * std::sin(kTwoPi * t_over_T));
}

double model_v_kappa1(double t_over_T) {
  return 1.8 * std::cos(1.5 - std::cos(2.0 * kTwoPi * t_over_T));
}

// Operator pair for one model; models that need fewer leave the rest empty.
struct ModelOperators {
  Eigen::MatrixXd op1, op2;
};

ModelOperators draw_model_operators(Model model, int L, std::mt19937_64& rng) {
  ModelOperators ops;
  switch (model) {
    case Model::I:
      break;
    case Model::II:
      ops.op1 = gen_operator({VarianceRule::ExpDecay, 0.75, L}, rng);
      ops.op2 = gen_operator({VarianceRule::PolyDecay, -0.4, L}, rng);
      break;
    case Model::III:
      ops.op1 = gen_operator_raw(VarianceRule::ExpDecay, L, rng);
      ops.op2 = gen_operator_raw(VarianceRule::ExpDecay, L, rng);
      break;
    case Model::IV:
      ops.op1 = gen_operator({VarianceRule::ExpDecay, 0.8, L}, rng);
      break;
    case Model::V:
      ops.op1 = draw_unit_operator(VarianceRule::ExpDecay, L, rng);
      ops.op2 = draw_unit_operator(VarianceRule::ExpDecay, L, rng);
      break;
    case Model::VI:
      ops.op1 = draw_unit_operator(VarianceRule::ExpDecay, L, rng);
      ops.op2 = draw_unit_operator(VarianceRule::PolyDecay, L, rng);
      break;
  }
  return ops;
}

// Runs the recursion for a model with operators already fixed; rng supplies
// only the innovation stream.
FunctionalTimeSeries run_recursion(Model model, int T, int L, int burn_in,
                                   const ModelOperators& ops, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::MatrixXd& op1 = ops.op1;
  const Eigen::MatrixXd& op2 = ops.op2;

  const int break_at = (3 * T) / 8;  // two-regime model boundary
  const int total = burn_in + T;

  Eigen::RowVectorXd x_prev1 = Eigen::RowVectorXd::Zero(L);
  Eigen::RowVectorXd x_prev2 = Eigen::RowVectorXd::Zero(L);
  Eigen::RowVectorXd eps_prev = Eigen::RowVectorXd::Zero(L);
  Eigen::RowVectorXd eps(L), x(L);

  FunctionalTimeSeries out;
  out.basis = BasisSpec{BasisFamily::Fourier, L};
  out.id = model_name(model);
  out.coeffs.resize(T, L);

  for (int g = 1; g <= total; ++g) {
    // Schedules run over the post-burn-in index, frozen at t = 1 before it.
    const int t = std::max(g - burn_in, 1);
    const double u = static_cast<double>(t) / T;
    const bool post_break = model == Model::VI && t > break_at;

    for (int l = 1; l <= L; ++l) {
      double sd = default_innovation_sd(l);
      if (post_break) sd = std::sqrt(2.0) * std::exp((l - 1) / 20.0);
      eps(l - 1) = gauss(rng) * sd;
    }

    switch (model) {
      case Model::I:
        x = eps;
        break;
      case Model::II:
        x = x_prev1 * op1.transpose() + x_prev2 * op2.transpose() + eps;
        break;
      case Model::III:
        x = eps * op1.transpose() - 0.5 * (eps_prev * op2.transpose());
        break;
      case Model::IV:
        x = x_prev1 * op1.transpose() + std::sqrt(model_iv_scale2(u)) * eps;
        break;
      case Model::V:
        x = model_v_kappa1(u) * (x_prev1 * op1.transpose()) -
            0.81 * (x_prev2 * op2.transpose()) + eps;
        break;
      case Model::VI:
        if (post_break)
          x = -0.2 * (x_prev2 * op2.transpose()) + eps;
        else
          x = 0.7 * (x_prev1 * op1.transpose()) + 0.2 * (x_prev2 * op2.transpose()) + eps;
        break;
    }

    x_prev2 = x_prev1;
    x_prev1 = x;
    eps_prev = eps;
    if (g > burn_in) out.coeffs.row(g - burn_in - 1) = x;
  }
  return out;
}

}  // namespace

Model parse_model(const std::string& name) {
  if (name == "I") return Model::I;
  if (name == "II") return Model::II;
  if (name == "III") return Model::III;
  if (name == "IV") return Model::IV;
  if (name == "V") return Model::V;
  if (name == "VI") return Model::VI;
  throw input_error("model: unknown name '" + name + "' (expected I..VI)");
}

std::string model_name(Model m) {
  switch (m) {
    case Model::I: return "I";
    case Model::II: return "II";
    case Model::III: return "III";
    case Model::IV: return "IV";
    case Model::V: return "V";
    case Model::VI: return "VI";
  }
  return "?";
}

Eigen::MatrixXd gen_operator_raw(VarianceRule rule, int L, std::mt19937_64& rng) {
  if (L < 1) throw input_error("operator: dimension must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd m(L, L);
  for (int l = 1; l <= L; ++l)
    for (int lp = 1; lp <= L; ++lp)
      m(l - 1, lp - 1) = gauss(rng) * std::sqrt(entry_variance(rule, l, lp));
  return m;
}

Eigen::MatrixXd gen_operator(const OperatorSpec& spec, std::mt19937_64& rng) {
  if (spec.kappa == 0.0) throw input_error("operator: kappa must be nonzero");
  return spec.kappa * draw_unit_operator(spec.rule, spec.L, rng);
}

Eigen::MatrixXd gen_innovations(int T, int L, std::mt19937_64& rng) {
  if (T < 1 || L < 1) throw input_error("innovations: T and L must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd eps(T, L);
  for (int t = 0; t < T; ++t)
    for (int l = 1; l <= L; ++l) eps(t, l - 1) = gauss(rng) * default_innovation_sd(l);
  return eps;
}

FunctionalTimeSeries simulate_model(const ModelSpec& spec) {
  if (spec.T < 1) throw input_error("simulate: T must be >= 1");
  if (spec.L < 1) throw input_error("simulate: L must be >= 1");
  if (spec.burn_in < 0) throw input_error("simulate: burn-in must be >= 0");

  // Operators are drawn before any innovation, from the same stream.
  auto rng = make_rng(spec.seed);
  const ModelOperators ops = draw_model_operators(spec.model, spec.L, rng);
  return run_recursion(spec.model, spec.T, spec.L, spec.burn_in, ops, rng);
}

LabeledCollection make_setting(int setting, int n, int T, std::uint64_t seed, int L,
                               unsigned threads) {
  if (setting < 1 || setting > 3) throw input_error("setting: must be 1, 2, or 3");
  if (n < 1) throw input_error("setting: n must be >= 1");

  std::vector<Model> models;
  switch (setting) {
    case 1: models = {Model::I, Model::II, Model::III}; break;
    case 2: models = {Model::IV, Model::V, Model::VI}; break;
    default:
      models = {Model::I, Model::II, Model::III, Model::IV, Model::V, Model::VI};
  }

  if (T < 1) throw input_error("simulate: T must be >= 1");
  if (L < 1) throw input_error("simulate: L must be >= 1");

  const int total = static_cast<int>(models.size()) * n;
  LabeledCollection coll;
  coll.members.resize(total);
  coll.labels.resize(total);

  int width = 1;
  for (int v = n; v >= 10; v /= 10) ++width;

  // Each group gets one operator draw shared by its n members, so a group is
  // homogeneous in second-order structure; members differ only through their
  // innovation streams. Group seeds use a third component to stay clear of
  // the member stream family.
  std::vector<ModelOperators> group_ops(models.size());
  for (std::size_t g = 0; g < models.size(); ++g) {
    auto group_rng = make_rng(derive_seed(seed, g, 1));
    group_ops[g] = draw_model_operators(models[g], L, group_rng);
  }

  const int burn_in = ModelSpec{}.burn_in;
  parallel_for_index(static_cast<std::size_t>(total), threads, [&](std::size_t i) {
    const int group = static_cast<int>(i) / n;
    const int member = static_cast<int>(i) % n;
    auto member_rng = make_rng(derive_seed(seed, i));
    FunctionalTimeSeries s =
        run_recursion(models[group], T, L, burn_in, group_ops[group], member_rng);
    std::string idx = std::to_string(member + 1);
    s.id = model_name(models[group]) + "-" + std::string(width - std::min<int>(width, idx.size()), '0') + idx;
    coll.members[i] = std::move(s);
    coll.labels[i] = group;
  });
  return coll;
}

}  // namespace ftspec
