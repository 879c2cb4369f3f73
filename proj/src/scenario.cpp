#include "qrf/scenario.hpp"

#include "qrf/frames.hpp"
#include "qrf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace qrf::cli {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;
namespace fs = std::filesystem;

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

std::string var_label(std::size_t slot) {
  return (slot % 2 == 0 ? "X" : "P") + std::to_string(slot / 2) + "'";
}

std::string plain_label(std::size_t slot) {
  return (slot % 2 == 0 ? "X" : "P") + std::to_string(slot / 2);
}

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::string& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    out_ << header << "\n";
  }
  void row(const std::string& line) { out_ << line << "\n"; }
  template <typename... Args>
  void rowf(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), fmt, args...);
    out_ << buf << "\n";
  }

 private:
  std::ofstream out_;
};

fs::path artifact_path(const ScenarioConfig& config, ScenarioReport& report,
                       const std::string& name) {
  fs::create_directories(config.output_dir);
  report.artifacts.push_back(name);
  return config.output_dir / name;
}

void write_table_csv(const fs::path& path, const RatMatrix& matrix,
                     bool primed_rows) {
  CsvFile csv(path, "row,col,value");
  for (std::size_t i = 0; i < matrix.rows(); ++i)
    for (std::size_t j = 0; j < matrix.cols(); ++j)
      csv.row((primed_rows ? var_label(i) : plain_label(i)) + "," +
              plain_label(j) + "," + to_fraction_string(matrix.at(i, j)));
}

void write_state_json(const fs::path& path, const gauss::GaussState& state) {
  std::ofstream out(path);
  out << gauss::state_to_json(state).dump(2) << "\n";
}

// Closed-form branch purity of the relational reduced state; the crossing
// term caps it at sigma1/sqrt(sigma0^2+sigma1^2) for every sigma/d.
double relational_branch_purity(double sigma0, double sigma1) {
  return sigma1 / std::sqrt(sigma0 * sigma0 + sigma1 * sigma1);
}

}  // namespace

ScenarioConfig load_config(const std::string& scenario,
                           const std::optional<fs::path>& file,
                           const std::vector<std::string>& overrides,
                           const std::optional<fs::path>& out_dir) {
  ScenarioConfig config;
  config.scenario = scenario;

  if (file) {
    std::ifstream in(*file);
    if (!in) throw std::invalid_argument("cannot read config " + file->string());
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object())
      throw std::invalid_argument("config must be a flat JSON object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_string())
        config.params[key] = value.get<std::string>();
      else
        config.params[key] = value.dump();
    }
  }
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("override must look like key=value: " + kv);
    config.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }

  if (auto it = config.params.find("scenario"); it != config.params.end()) {
    if (it->second != scenario)
      throw std::invalid_argument("config is for scenario '" + it->second +
                                  "', requested '" + scenario + "'");
    config.params.erase(it);
  }

  if (out_dir) {
    config.output_dir = *out_dir;
  } else if (const char* env = std::getenv("QRF_OUT"); env != nullptr) {
    config.output_dir = fs::path(env);
  } else if (auto it = config.params.find("output_dir");
             it != config.params.end()) {
    config.output_dir = fs::path(it->second);
  } else {
    config.output_dir = fs::path("qrf-out") / scenario;
  }
  config.params.erase("output_dir");

  if (auto it = config.params.find("seed"); it != config.params.end()) {
    config.seed = std::stoull(it->second);
    config.params.erase(it);
  }
  if (auto it = config.params.find("hbar"); it != config.params.end()) {
    config.hbar = std::stod(it->second);
    if (!(config.hbar > 0.0))
      throw std::invalid_argument("hbar must be positive");
    config.params.erase(it);
  }
  return config;
}

ParamReader::ParamReader(const ScenarioConfig& config) : config_(config) {
  echo_["scenario"] = config.scenario;
  echo_["seed"] = config.seed;
  echo_["hbar"] = config.hbar;
  echo_["output_dir"] = config.output_dir.string();
}

double ParamReader::get_double(const std::string& key, double fallback) {
  consumed_.insert(key);
  double value = fallback;
  if (auto it = config_.params.find(key); it != config_.params.end())
    value = std::stod(it->second);
  echo_[key] = value;
  return value;
}

std::int64_t ParamReader::get_int(const std::string& key,
                                  std::int64_t fallback) {
  consumed_.insert(key);
  std::int64_t value = fallback;
  if (auto it = config_.params.find(key); it != config_.params.end())
    value = std::stoll(it->second);
  echo_[key] = value;
  return value;
}

std::string ParamReader::get_string(const std::string& key,
                                    const std::string& fallback) {
  consumed_.insert(key);
  std::string value = fallback;
  if (auto it = config_.params.find(key); it != config_.params.end())
    value = it->second;
  echo_[key] = value;
  return value;
}

Rational ParamReader::get_rational(const std::string& key,
                                   const Rational& fallback) {
  consumed_.insert(key);
  Rational value = fallback;
  if (auto it = config_.params.find(key); it != config_.params.end())
    value = parse_rational(it->second);
  echo_[key] = to_fraction_string(value);
  return value;
}

std::vector<Rational> ParamReader::get_rational_list(
    const std::string& key, const std::string& fallback) {
  consumed_.insert(key);
  std::string text = fallback;
  if (auto it = config_.params.find(key); it != config_.params.end())
    text = it->second;
  std::vector<Rational> values;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ','))
    if (!token.empty()) values.push_back(parse_rational(token));
  nlohmann::json echo = nlohmann::json::array();
  for (const auto& v : values) echo.push_back(to_fraction_string(v));
  echo_[key] = echo;
  return values;
}

void ParamReader::finish() const {
  for (const auto& [key, value] : config_.params)
    if (!consumed_.contains(key))
      throw std::invalid_argument("unknown parameter '" + key +
                                  "' for scenario " + config_.scenario);
}

ResultLine check_line(const std::string& label, double value, double expected,
                      double tolerance) {
  return ResultLine{label, value, expected, tolerance,
                    std::abs(value - expected) <= tolerance};
}

ResultLine threshold_line(const std::string& label, double value,
                          double threshold) {
  return ResultLine{label, value, threshold, 0.0, value >= threshold};
}

bool ScenarioReport::all_pass() const {
  return std::all_of(results.begin(), results.end(),
                     [](const ResultLine& r) { return r.pass; });
}

nlohmann::json ScenarioReport::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["inputs"] = inputs;
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json line;
    line["label"] = r.label;
    line["value"] = r.value;
    line["expected"] = r.expected;
    line["tolerance"] = r.tolerance;
    line["pass"] = r.pass;
    lines.push_back(std::move(line));
  }
  j["results"] = std::move(lines);
  j["artifacts"] = artifacts;
  j["all_pass"] = all_pass();
  return j;
}

// ---------------------------------------------------------------------------
// boost-demo
// ---------------------------------------------------------------------------

ScenarioReport run_boost_demo(const ScenarioConfig& config) {
  ParamReader params(config);
  const double x = params.get_double("x", 2.0);
  const double v = params.get_double("v", 1.0);
  const double t = params.get_double("t", 3.0);
  const double m = params.get_double("m", 1.0);
  const double sigma = params.get_double("sigma", 1.0);
  const auto n = static_cast<std::size_t>(params.get_int("n", 512));
  params.finish();

  ScenarioReport report;
  report.scenario = config.scenario;
  report.inputs = params.echo();

  const auto boost = frames::FrameTransform::boost(v, t, m);
  const gauss::GaussState psi =
      gauss::make_packet(x, sigma, 0.0, Rational(1), config.hbar);
  const auto x_form = QuadraticForm::position(1, 0);

  const double passive =
      frames::passive_expect(boost, x_form, psi).real();
  const gauss::GaussState transformed = frames::active_state(boost, psi);
  const double sandwich =
      gauss::expect_quadratic(
          transformed, conjugate_through(x_form, boost.phase_map().inverse()))
          .real();

  report.results.push_back(
      check_line("passive_X_analytic", passive, x - v * t, 1e-9));
  report.results.push_back(check_line("sandwich_X_analytic", sandwich, x, 1e-9));
  report.results.push_back(
      check_line("picture_gap_equals_vt", sandwich - passive, v * t, 1e-9));

  const double lo = std::min(x, x - v * t) - 10.0 * sigma;
  const double hi = std::max(x, x - v * t) + 10.0 * sigma;
  const grid::GridState psi_grid =
      grid::sample(psi, {grid::Grid1D(lo, hi, n)});
  const grid::GridState trans_grid =
      grid::sample(transformed, {grid::Grid1D(lo, hi, n)});
  const double passive_grid = grid::expect_position(psi_grid, 0) - v * t;
  const double sandwich_grid = grid::expect_position(trans_grid, 0) + v * t;
  report.results.push_back(
      check_line("passive_X_grid", passive_grid, x - v * t, 1e-6));
  report.results.push_back(check_line("sandwich_X_grid", sandwich_grid, x, 1e-6));

  // momentum side of the boost
  const double p_passive =
      frames::passive_expect(boost, QuadraticForm::momentum(1, 0), psi).real();
  report.results.push_back(
      check_line("passive_P_analytic", p_passive, -m * v, 1e-9));
  report.results.push_back(check_line(
      "passive_P_grid", grid::expect_momentum(trans_grid, 0), -m * v, 1e-6));

  return report;
}

// ---------------------------------------------------------------------------
// paradox
// ---------------------------------------------------------------------------

ScenarioReport run_paradox(const ScenarioConfig& config) {
  ParamReader params(config);
  const Rational m0 = params.get_rational("m0", Rational(1));
  const Rational m1 = params.get_rational("m1", Rational(1));
  const double d = params.get_double("d", 4.0);
  const double phi = params.get_double("phi", kPi / 3.0);
  const double sigma0 = params.get_double("sigma0", 0.1);
  const double sigma1 = params.get_double("sigma1", 0.1);
  const auto n = static_cast<std::size_t>(params.get_int("n", 512));
  params.finish();

  ScenarioReport report;
  report.scenario = config.scenario;
  report.inputs = params.echo();

  const double x = d * to_double(m1 / (m0 + m1));
  const gauss::GaussState psi =
      gauss::decay_state(d, phi, m0, m1, sigma0, sigma1, config.hbar);
  const auto cmr = frames::FrameTransform::cm_rel(m0, m1);
  const auto rel = frames::FrameTransform::relational(m0, m1);
  const gauss::GaussState psi_cmr = frames::active_state(cmr, psi);
  const gauss::GaussState psi_rel = frames::active_state(rel, psi);

  // transformed-state center tables
  {
    CsvFile csv(artifact_path(config, report, "centers.csv"),
                "picture,term,dof,center");
    for (std::size_t t = 0; t < psi_cmr.terms().size(); ++t)
      for (std::size_t dof = 0; dof < 2; ++dof)
        csv.rowf("cm-rel,%zu,%zu,%.17g", t, dof,
                 psi_cmr.terms()[t].center(static_cast<Eigen::Index>(dof)));
    for (std::size_t t = 0; t < psi_rel.terms().size(); ++t)
      for (std::size_t dof = 0; dof < 2; ++dof)
        csv.rowf("relational,%zu,%zu,%.17g", t, dof,
                 psi_rel.terms()[t].center(static_cast<Eigen::Index>(dof)));
  }
  report.results.push_back(check_line(
      "centers_cmr_cm", std::abs(psi_cmr.terms()[0].center(0)) +
                            std::abs(psi_cmr.terms()[1].center(0)),
      0.0, 1e-9));
  report.results.push_back(check_line(
      "centers_cmr_rel", std::abs(psi_cmr.terms()[0].center(1) + d) +
                             std::abs(psi_cmr.terms()[1].center(1) - d),
      0.0, 1e-9));
  report.results.push_back(check_line(
      "centers_rel", std::abs(psi_rel.terms()[0].center(0) + x) +
                         std::abs(psi_rel.terms()[1].center(0) - x) +
                         std::abs(psi_rel.terms()[0].center(1) + d) +
                         std::abs(psi_rel.terms()[1].center(1) - d),
      0.0, 1e-9));

  // <X_r> in both pictures
  const auto x1 = QuadraticForm::position(2, 1);
  report.results.push_back(check_line(
      "xr_mean_cmr", frames::passive_expect(cmr, x1, psi).real(), 0.0, 1e-6));
  report.results.push_back(check_line(
      "xr_mean_rel", frames::passive_expect(rel, x1, psi).real(), 0.0, 1e-6));

  // reduced states on the grid
  const auto grids_cmr = grid::suggest_grids(psi_cmr, n, 8.0, 2.0 * d);
  const auto grids_rel = grid::suggest_grids(psi_rel, n, 8.0, 2.0 * d);
  const grid::GridState grid_cmr = grid::sample(psi_cmr, grids_cmr);
  const grid::GridState grid_rel = grid::sample(psi_rel, grids_rel);
  const grid::DensityOp rho_cmr = grid::partial_trace(grid_cmr, 1);
  const grid::DensityOp rho_rel = grid::partial_trace(grid_rel, 1);

  grid::write_density_csv(rho_cmr,
                          artifact_path(config, report, "rho_cmr.csv"));
  grid::write_density_csv(rho_rel,
                          artifact_path(config, report, "rho_rel.csv"));
  grid::write_slices_csv(grid_cmr,
                         artifact_path(config, report, "slices_cmr.csv"));
  grid::write_slices_csv(grid_rel,
                         artifact_path(config, report, "slices_rel.csv"));
  write_state_json(artifact_path(config, report, "psi_lab.json"), psi);
  write_state_json(artifact_path(config, report, "psi_cmr.json"), psi_cmr);
  write_state_json(artifact_path(config, report, "psi_rel.json"), psi_rel);

  // modular-momentum expectations at L = 2d
  const cplx shift_cmr_grid = grid::density_shift_expect(rho_cmr, 2.0 * d);
  const cplx shift_rel_grid = grid::density_shift_expect(rho_rel, 2.0 * d);
  const cplx shift_cmr_exact = gauss::expect_shift(psi_cmr, 1, 2.0 * d);
  const cplx shift_rel_exact = gauss::expect_shift(psi_rel, 1, 2.0 * d);

  report.results.push_back(
      check_line("shift_cmr_modulus_grid", std::abs(shift_cmr_grid), 0.5, 1e-3));
  report.results.push_back(check_line(
      "shift_cmr_phase_grid", wrap_angle(std::arg(shift_cmr_grid) - phi), 0.0,
      1e-3));
  report.results.push_back(check_line("shift_rel_modulus_grid",
                                      std::abs(shift_rel_grid), 0.0, 1e-3));
  report.results.push_back(check_line("shift_cmr_modulus_analytic",
                                      std::abs(shift_cmr_exact), 0.5, 1e-9));
  report.results.push_back(check_line(
      "shift_cmr_phase_analytic", wrap_angle(std::arg(shift_cmr_exact) - phi),
      0.0, 1e-9));
  report.results.push_back(check_line("shift_rel_modulus_analytic",
                                      std::abs(shift_rel_exact), 0.0, 1e-3));

  // purities; the relational value carries the crossing-term cap
  const double purity_cmr = rho_cmr.purity();
  const double purity_rel = rho_rel.purity();
  const double rel_expected =
      0.5 * relational_branch_purity(sigma0, sigma1);
  report.results.push_back(threshold_line("purity_cmr", purity_cmr, 0.99));
  report.results.push_back(
      check_line("purity_rel_gamma", purity_rel, rel_expected, 0.01));
  report.results.push_back(check_line("purity_rel_idealized_deficit",
                                      0.5 - purity_rel, 0.5 - rel_expected,
                                      0.01));

  return report;
}

// ---------------------------------------------------------------------------
// gamma-check
// ---------------------------------------------------------------------------

namespace {

std::vector<std::pair<double, double>> gamma_grid(double a, double b,
                                                  double sigma_s,
                                                  double sigma1,
                                                  std::size_t side,
                                                  double span_sigma) {
  std::vector<std::pair<double, double>> samples;
  samples.reserve(side * side);
  const double half = static_cast<double>(side - 1) / 2.0;
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j) {
      const double u =
          -a + (static_cast<double>(i) - half) / half * span_sigma * sigma_s;
      const double v = (b - a) +
                       (static_cast<double>(j) - half) / half * span_sigma *
                           sigma1;
      samples.emplace_back(u, v);
    }
  return samples;
}

}  // namespace

ScenarioReport run_gamma_check(const ScenarioConfig& config) {
  ParamReader params(config);
  const double a = params.get_double("a", 0.7);
  const double b = params.get_double("b", -0.4);
  const double sigma0 = params.get_double("sigma0", 0.9);
  const double sigma1 = params.get_double("sigma1", 1.3);
  const auto side = static_cast<std::size_t>(params.get_int("samples", 41));
  const double span = params.get_double("span_sigma", 4.0);
  const auto sets = static_cast<std::size_t>(params.get_int("sets", 20));
  params.finish();

  ScenarioReport report;
  report.scenario = config.scenario;
  report.inputs = params.echo();

  const double sigma_s =
      sigma0 * sigma1 / std::sqrt(sigma0 * sigma0 + sigma1 * sigma1);
  const auto samples = gamma_grid(a, b, sigma_s, sigma1, side, span);
  const auto explicit_check =
      gauss::gamma_factorization_check(a, b, sigma0, sigma1, samples);

  {
    CsvFile csv(artifact_path(config, report, "gamma_explicit.csv"),
                "u,v,log_ratio,rel_err_after_fit");
    const double mean_log = std::log(explicit_check.fitted_constant);
    for (std::size_t i = 0; i < samples.size(); ++i)
      csv.rowf("%.17g,%.17g,%.17g,%.17g", samples[i].first, samples[i].second,
               explicit_check.log_ratios[i],
               std::expm1(explicit_check.log_ratios[i] - mean_log));
  }

  report.results.push_back(check_line("gamma_max_rel_error_explicit",
                                      explicit_check.max_rel_error, 0.0,
                                      1e-12));
  report.results.push_back(check_line(
      "sigma_s_formula", explicit_check.sigma_s, sigma_s, 1e-15));

  // sigma0 = sigma1 collapses to sigma/sqrt(2)
  const auto equal_widths =
      gauss::gamma_factorization_check(a, b, sigma1, sigma1, samples);
  report.results.push_back(check_line("sigma_s_equal_widths",
                                      equal_widths.sigma_s,
                                      sigma1 / std::sqrt(2.0), 1e-15));

  // Gamma(u=-a, v) = 1 for every v
  double gamma_at_minus_a = 0.0;
  for (double v : {-2.0, 0.0, 1.5})
    gamma_at_minus_a = std::max(
        gamma_at_minus_a,
        std::abs(std::exp((-a + a) * (v - b + a) / (2.0 * sigma1 * sigma1)) -
                 1.0));
  report.results.push_back(
      check_line("gamma_at_reference_point", gamma_at_minus_a, 0.0, 1e-15));

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> par(-1.5, 1.5);
  std::uniform_real_distribution<double> width(0.3, 1.6);
  double worst = 0.0;
  for (std::size_t round = 0; round < sets; ++round) {
    const double ra = par(rng), rb = par(rng);
    const double s0 = width(rng), s1 = width(rng);
    const double ss = s0 * s1 / std::sqrt(s0 * s0 + s1 * s1);
    const auto rs = gamma_grid(ra, rb, ss, s1, side, span);
    worst = std::max(
        worst,
        gauss::gamma_factorization_check(ra, rb, s0, s1, rs).max_rel_error);
  }
  report.results.push_back(
      check_line("gamma_max_rel_error_random", worst, 0.0, 1e-12));

  return report;
}

// ---------------------------------------------------------------------------
// nogo
// ---------------------------------------------------------------------------

namespace {

bool relative_block_matches_closed_form(const canon::NogoCertificate& cert,
                                        const canon::MassList& masses) {
  const std::size_t n = masses.size();
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) {
      const Rational expected =
          i == j ? Rational(0)
                 : masses.mass(j) / (masses.mass(j) + masses.mass(0));
      if (cert.deviation.at(canon::position_slot(i),
                            canon::momentum_slot(j)) != expected)
        return false;
      if (cert.deviation.at(canon::position_slot(i),
                            canon::position_slot(j)) != 0)
        return false;
      if (cert.deviation.at(canon::momentum_slot(i),
                            canon::momentum_slot(j)) != 0)
        return false;
    }
  return true;
}

}  // namespace

ScenarioReport run_nogo(const ScenarioConfig& config) {
  ParamReader params(config);
  const auto masses_raw = params.get_rational_list("masses", "1,1,1");
  const auto ratios_raw =
      params.get_rational_list("ratios", "1,1/10,1/100");
  const std::string completion_name =
      params.get_string("completion", "both");
  params.finish();

  ScenarioReport report;
  report.scenario = config.scenario;
  report.inputs = params.echo();

  const canon::MassList masses(masses_raw);
  const std::size_t n = masses.size();

  std::vector<std::pair<std::string, canon::FrameCompletion>> completions;
  if (completion_name == "both" || completion_name == "total-momentum")
    completions.emplace_back("total-momentum",
                             canon::FrameCompletion::TotalMomentum);
  if (completion_name == "both" || completion_name == "neg-p0")
    completions.emplace_back("neg-p0", canon::FrameCompletion::NegativeP0);
  if (completions.empty())
    throw std::invalid_argument("completion must be total-momentum, neg-p0 "
                                "or both");

  nlohmann::json cert_json;
  for (const auto& [name, completion] : completions) {
    const auto cert = canon::nogo_certificate(masses, completion);
    write_table_csv(
        artifact_path(config, report, "deviation_" + name + ".csv"),
        cert.deviation, true);
    report.results.push_back(check_line(
        "closed_form_relative_block_" + name,
        relative_block_matches_closed_form(cert, masses) ? 1.0 : 0.0, 1.0,
        0.0));
    report.results.push_back(check_line(
        "verdict_relational_block_" + name,
        cert.relative_block_canonical ? 1.0 : 0.0, n == 2 ? 1.0 : 0.0, 0.0));
    // full-table maximum: max_j m_j/(m_j+m0) for the total-momentum
    // completion; the neg-p0 completion pins [X_i', P0'] = 1
    Rational expected_max = 0;
    for (std::size_t j = 1; j < n; ++j) {
      const Rational dev = masses.mass(j) / (masses.mass(j) + masses.mass(0));
      if (dev > expected_max) expected_max = dev;
    }
    if (completion == canon::FrameCompletion::NegativeP0) expected_max = 1;
    report.results.push_back(check_line(
        "max_deviation_" + name,
        cert.max_entry == expected_max ? 1.0 : 0.0, 1.0, 0.0));
    cert_json[name]["deviation"] = canon::matrix_to_json(cert.deviation);
    cert_json[name]["max_entry"] = to_fraction_string(cert.max_entry);
    cert_json[name]["relative_block_max"] =
        to_fraction_string(cert.relative_block_max);
    cert_json[name]["relative_block_canonical"] =
        cert.relative_block_canonical;
  }
  {
    std::ofstream out(artifact_path(config, report, "nogo_certificate.json"));
    out << cert_json.dump(2) << "\n";
  }

  // the N = 2 pass case, taken from the first two masses
  const canon::MassList pair({masses.mass(0), masses.mass(1)});
  const auto pair_cert = canon::nogo_certificate(pair);
  report.results.push_back(check_line(
      "n2_verdict_canonical", pair_cert.relative_block_canonical ? 1.0 : 0.0,
      1.0, 0.0));

  // mass-limit sweep (total-momentum completion; the neg-p0 completion keeps
  // a mass-independent cross deviation and has no limit to speak of)
  if (!ratios_raw.empty()) {
    const auto devs = canon::mass_limit_sweep(masses, ratios_raw);
    CsvFile csv(artifact_path(config, report, "sweep.csv"),
                "ratio,max_deviation,max_deviation_double");
    bool exact = true, decreasing = true;
    for (std::size_t i = 0; i < devs.size(); ++i) {
      csv.row(to_fraction_string(ratios_raw[i]) + "," +
              to_fraction_string(devs[i]) + "," +
              [&] {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.17g", to_double(devs[i]));
                return std::string(buf);
              }());
      Rational expected = 0;
      for (std::size_t j = 1; j < n; ++j) {
        const Rational scaled = masses.mass(j) * ratios_raw[i];
        const Rational dev = scaled / (scaled + masses.mass(0));
        if (dev > expected) expected = dev;
      }
      if (devs[i] != expected) exact = false;
      if (i > 0 && devs[i] >= devs[i - 1]) decreasing = false;
    }
    report.results.push_back(
        check_line("sweep_matches_closed_form", exact ? 1.0 : 0.0, 1.0, 0.0));
    report.results.push_back(check_line("sweep_strictly_decreasing",
                                        decreasing ? 1.0 : 0.0, 1.0, 0.0));
  }

  return report;
}

// ---------------------------------------------------------------------------
// nparticle-table
// ---------------------------------------------------------------------------

ScenarioReport run_nparticle_table(const ScenarioConfig& config) {
  ParamReader params(config);
  const auto masses_raw = params.get_rational_list("masses", "1,1,1");
  params.finish();

  ScenarioReport report;
  report.scenario = config.scenario;
  report.inputs = params.echo();

  const canon::MassList masses(masses_raw);
  const std::size_t n = masses.size();
  const auto map = canon::map_cm_r_N(masses);
  write_table_csv(artifact_path(config, report, "table_cm_r_n.csv"),
                  map.matrix, true);

  // two-particle tables for the first pair
  const canon::MassList pair({masses.mass(0), masses.mass(1)});
  const auto cm_map = canon::map_cm_r(pair.mass(0), pair.mass(1));
  const auto r_map = canon::map_R(pair.mass(0), pair.mass(1));
  write_table_csv(artifact_path(config, report, "table_cm_r.csv"),
                  cm_map.matrix, true);
  write_table_csv(artifact_path(config, report, "table_relational.csv"),
                  r_map.matrix, true);

  // momentum rows follow P_i' = P_i - (m_i/M) sum_k P_k exactly
  bool rows_exact = true;
  const Rational total = masses.total();
  for (std::size_t i = 1; i < n && rows_exact; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      Rational expected = -masses.mass(i) / total;
      if (k == i) expected += 1;
      if (map.matrix.at(canon::momentum_slot(i), canon::momentum_slot(k)) !=
          expected) {
        rows_exact = false;
        break;
      }
    }
  report.results.push_back(
      check_line("momentum_rows_closed_form", rows_exact ? 1.0 : 0.0, 1.0,
                 0.0));
  report.results.push_back(check_line(
      "cm_r_n_canonical", canon::is_canonical(map) ? 1.0 : 0.0, 1.0, 0.0));
  report.results.push_back(check_line(
      "two_particle_reduction",
      canon::map_cm_r_N(pair).matrix == cm_map.matrix ? 1.0 : 0.0, 1.0, 0.0));
  report.results.push_back(check_line(
      "relational_canonical", canon::is_canonical(r_map) ? 1.0 : 0.0, 1.0,
      0.0));

  // hybrid momenta: P_i' differs from the relative momentum mu_i0(...) row
  // whenever there are spectator particles
  bool hybrid = true;
  if (n >= 3) {
    const auto target = canon::target_relational_map(masses);
    hybrid = !(map.matrix.at(canon::momentum_slot(1), canon::momentum_slot(0)) ==
                   target.matrix.at(canon::momentum_slot(1),
                                    canon::momentum_slot(0)) &&
               map.matrix.at(canon::momentum_slot(1), canon::momentum_slot(2)) ==
                   target.matrix.at(canon::momentum_slot(1),
                                    canon::momentum_slot(2)));
  }
  report.results.push_back(
      check_line("momenta_hybrid_for_n_ge_3", hybrid ? 1.0 : 0.0, 1.0, 0.0));

  return report;
}

// ---------------------------------------------------------------------------
// relative-reduced
// ---------------------------------------------------------------------------

ScenarioReport run_relative_reduced(const ScenarioConfig& config) {
  ParamReader params(config);
  const auto masses_raw = params.get_rational_list("masses", "1,1,1");
  const double sigma = params.get_double("sigma", 0.3);
  const double separation = params.get_double("separation", 1.5);
  const double sigma_ent = params.get_double("sigma_ent", 0.25);
  const auto n = static_cast<std::size_t>(params.get_int("n", 128));
  const std::string mode = params.get_string("mode", "both");
  params.finish();

  if (masses_raw.size() != 3)
    throw std::invalid_argument("relative-reduced expects three masses");
  const canon::MassList masses(masses_raw);

  ScenarioReport report;
  report.scenario = config.scenario;
  report.inputs = params.echo();

  const auto run_case = [&](const gauss::GaussState& state,
                            const std::string& tag, std::size_t j) {
    const auto transformed = gauss::apply_point_map(
        state, canon::pair_cm_r_map(state.masses(), j));
    const auto grids = grid::suggest_grids(transformed, n, 8.0);
    const auto rho = grid::relative_reduced_state(state, grids, j);
    grid::write_density_csv(
        rho, artifact_path(config, report,
                           "rho_r" + std::to_string(j) + "_" + tag + ".csv"));
    return rho.purity();
  };

  if (mode == "both" || mode == "product") {
    const gauss::GaussState product = gauss::tensor(
        gauss::tensor(
            gauss::make_packet(0.0, sigma, 0.0, masses.mass(0), config.hbar),
            gauss::make_packet(separation, sigma, 0.0, masses.mass(1),
                               config.hbar)),
        gauss::make_packet(-separation, sigma, 0.0, masses.mass(2),
                           config.hbar));
    for (std::size_t j = 1; j <= 2; ++j)
      report.results.push_back(check_line(
          "purity_product_r" + std::to_string(j), run_case(product, "product", j),
          1.0, 1e-3));
  }

  if (mode == "both" || mode == "entangled") {
    const auto branch = [&](double sign) {
      return gauss::tensor(
          gauss::tensor(gauss::make_packet(0.0, 2.0 * sigma_ent, 0.0,
                                           masses.mass(0), config.hbar),
                        gauss::make_packet(sign * separation, sigma_ent, 0.0,
                                           masses.mass(1), config.hbar)),
          gauss::make_packet(sign * separation, sigma_ent, 0.0,
                             masses.mass(2), config.hbar));
    };
    const gauss::GaussState plus = branch(1.0), minus = branch(-1.0);
    std::vector<gauss::GaussTerm> terms;
    for (auto t : plus.terms()) {
      t.coeff /= std::sqrt(2.0);
      terms.push_back(t);
    }
    for (auto t : minus.terms()) {
      t.coeff /= std::sqrt(2.0);
      terms.push_back(t);
    }
    const gauss::GaussState entangled = gauss::normalized(
        gauss::GaussState(terms, masses, config.hbar));
    const double purity = run_case(entangled, "entangled", 1);
    ResultLine line;
    line.label = "purity_entangled_r1_below";
    line.value = purity;
    line.expected = 0.9;
    line.tolerance = 0.0;
    line.pass = purity < 0.9;
    report.results.push_back(line);
  }

  return report;
}

// ---------------------------------------------------------------------------
// castro-check
// ---------------------------------------------------------------------------

ScenarioReport run_castro_check(const ScenarioConfig& config) {
  ParamReader params(config);
  const auto masses_raw = params.get_rational_list("masses", "1,1,1,1");
  params.finish();

  ScenarioReport report;
  report.scenario = config.scenario;
  report.inputs = params.echo();

  const canon::MassList masses(masses_raw);
  const std::size_t n = masses.size();
  const auto map = canon::map_castro(masses);
  const auto table = canon::commutator_table(map);
  const auto omega = canon::symplectic_form(n);

  write_table_csv(artifact_path(config, report, "castro_table.csv"),
                  map.matrix, true);
  write_table_csv(artifact_path(config, report, "castro_deviation.csv"),
                  canon::map_deviation(map), true);

  bool subsystem_ok = true;
  for (std::size_t k = 2; k < n; ++k)
    for (std::size_t l = 2; l < n; ++l)
      for (std::size_t a : {canon::position_slot(k), canon::momentum_slot(k)})
        for (std::size_t b :
             {canon::position_slot(l), canon::momentum_slot(l)})
          if (table.entries.at(a, b) != omega.entries.at(a, b))
            subsystem_ok = false;
  report.results.push_back(check_line(
      "subsystem_block_canonical", subsystem_ok ? 1.0 : 0.0, 1.0, 0.0));
  report.results.push_back(check_line(
      "full_map_canonical", canon::is_canonical(map) ? 1.0 : 0.0, 0.0, 0.0));

  std::size_t cross_nonzero = 0;
  for (std::size_t ref = 0; ref < 2; ++ref)
    for (std::size_t k = 2; k < n; ++k)
      for (std::size_t a : {canon::position_slot(ref), canon::momentum_slot(ref)})
        for (std::size_t b :
             {canon::position_slot(k), canon::momentum_slot(k)}) {
          if (table.entries.at(a, b) != omega.entries.at(a, b)) ++cross_nonzero;
          if (table.entries.at(b, a) != omega.entries.at(b, a)) ++cross_nonzero;
        }
  report.results.push_back(threshold_line(
      "cross_block_deviations", static_cast<double>(cross_nonzero), 1.0));

  return report;
}

ScenarioReport run_scenario(const ScenarioConfig& config) {
  if (config.scenario == "boost-demo") return run_boost_demo(config);
  if (config.scenario == "paradox") return run_paradox(config);
  if (config.scenario == "gamma-check") return run_gamma_check(config);
  if (config.scenario == "nogo") return run_nogo(config);
  if (config.scenario == "nparticle-table") return run_nparticle_table(config);
  if (config.scenario == "relative-reduced")
    return run_relative_reduced(config);
  if (config.scenario == "castro-check") return run_castro_check(config);
  throw std::invalid_argument("unknown scenario " + config.scenario);
}

void write_report(ScenarioReport& report, const fs::path& output_dir) {
  fs::create_directories(output_dir);
  report.artifacts.push_back("report.json");
  std::ofstream out(output_dir / "report.json");
  if (!out)
    throw std::runtime_error("cannot write report.json in " +
                             output_dir.string());
  out << report.to_json().dump(2) << "\n";
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{
      "boost-demo",       "paradox",          "gamma-check", "nogo",
      "nparticle-table",  "relative-reduced", "castro-check"};
  return names;
}

}  // namespace qrf::cli
