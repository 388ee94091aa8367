#include "steerlab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "steerlab/errors.hpp"

namespace steerlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Config parsing

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw InputError("config " + (path.empty() ? std::string("/") : path) + ": " + what);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) bad(path + "/" + key, "unknown key");
  }
}

double number(const json& obj, const char* key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) bad(path + "/" + key, "expected a number");
  return obj.at(key).get<double>();
}

template <typename Int>
Int integer(const json& obj, const char* key, const std::string& path, Int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) bad(path + "/" + key, "expected an integer");
  if constexpr (std::is_unsigned_v<Int>) {
    if (v.is_number_unsigned()) return v.get<Int>();
    if (v.get<std::int64_t>() < 0) bad(path + "/" + key, "expected a non-negative integer");
  }
  return v.get<Int>();
}

bool boolean(const json& obj, const char* key, const std::string& path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) bad(path + "/" + key, "expected true or false");
  return obj.at(key).get<bool>();
}

std::string text(const json& obj, const char* key, const std::string& path, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) bad(path + "/" + key, "expected a string");
  return obj.at(key).get<std::string>();
}

std::array<double, 3> triple(const json& obj, const char* key, const std::string& path, std::array<double, 3> fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array() || v.size() != 3) bad(path + "/" + key, "expected three numbers");
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number()) bad(path + "/" + key + "/" + std::to_string(i), "expected a number");
    fallback[i] = v[i].get<double>();
  }
  return fallback;
}

std::string method_name(const std::optional<LocalMethod>& m) {
  if (!m) return "auto";
  return *m == LocalMethod::nelder_mead ? "nelder_mead" : "gradient_descent";
}

// ---------------------------------------------------------------------------
// Output helpers

std::string fmt(double v, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot write " + path.string());
  os << content;
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

// The output directory is left out so that reruns into different directories
// produce identical files.
json provenance(const RunConfig& config) {
  json c = to_json(config);
  c.erase("output");
  return {{"version", kVersion}, {"config", c}};
}

/// Minimal SVG canvas with a data-to-pixel affine map.
class Svg {
 public:
  Svg(int width, int height) : width_(width), height_(height) {}

  void frame(double x0, double x1, double y0, double y1, int left, int top, int w, int h) {
    x0_ = x0;
    x1_ = x1;
    y0_ = y0;
    y1_ = y1;
    left_ = left;
    top_ = top;
    w_ = w;
    h_ = h;
  }
  double px(double x) const { return left_ + (x - x0_) / (x1_ - x0_) * w_; }
  double py(double y) const { return top_ + h_ - (y - y0_) / (y1_ - y0_) * h_; }
  double scale_x() const { return w_ / (x1_ - x0_); }

  void raw(const std::string& s) { body_ << s << '\n'; }
  void line(double xa, double ya, double xb, double yb, const char* style) {
    body_ << "<line x1=\"" << fmt(px(xa), "%.2f") << "\" y1=\"" << fmt(py(ya), "%.2f") << "\" x2=\""
          << fmt(px(xb), "%.2f") << "\" y2=\"" << fmt(py(yb), "%.2f") << "\" style=\"" << style << "\"/>\n";
  }
  void circle(double x, double y, double r_px, const char* style) {
    body_ << "<circle cx=\"" << fmt(px(x), "%.2f") << "\" cy=\"" << fmt(py(y), "%.2f") << "\" r=\""
          << fmt(r_px, "%.2f") << "\" style=\"" << style << "\"/>\n";
  }
  void rect(double x, double y, double w, double h, const char* style) {
    body_ << "<rect x=\"" << fmt(px(x), "%.2f") << "\" y=\"" << fmt(py(y + h), "%.2f") << "\" width=\""
          << fmt(w * scale_x(), "%.2f") << "\" height=\"" << fmt(py(y) - py(y + h), "%.2f") << "\" style=\""
          << style << "\"/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const char* style) {
    body_ << "<polyline style=\"" << style << "\" points=\"";
    for (const auto& [x, y] : pts) body_ << fmt(px(x), "%.2f") << ',' << fmt(py(y), "%.2f") << ' ';
    body_ << "\"/>\n";
  }
  void label(double x_px, double y_px, const std::string& s, const char* anchor = "middle") {
    body_ << "<text x=\"" << fmt(x_px, "%.1f") << "\" y=\"" << fmt(y_px, "%.1f")
          << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" << anchor << "\">" << s << "</text>\n";
  }
  void axes(const std::string& xlabel, const std::string& ylabel, int ticks = 5) {
    line(x0_, y0_, x1_, y0_, "stroke:#000;stroke-width:1");
    line(x0_, y0_, x0_, y1_, "stroke:#000;stroke-width:1");
    for (int i = 0; i <= ticks; ++i) {
      const double xv = x0_ + (x1_ - x0_) * i / ticks;
      const double yv = y0_ + (y1_ - y0_) * i / ticks;
      label(px(xv), py(y0_) + 16, fmt(xv, "%.3g"));
      label(px(x0_) - 6, py(yv) + 4, fmt(yv, "%.3g"), "end");
    }
    label(left_ + w_ / 2.0, top_ + h_ + 34, xlabel);
    body_ << "<text x=\"" << (left_ - 40) << "\" y=\"" << (top_ + h_ / 2)
          << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
          << (left_ - 40) << ' ' << (top_ + h_ / 2) << ")\">" << ylabel << "</text>\n";
  }
  std::string str() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
       << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" style=\"fill:#fff\"/>\n"
       << body_.str() << "</svg>\n";
    return os.str();
  }

 private:
  int width_, height_;
  double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;
  int left_ = 0, top_ = 0, w_ = 1, h_ = 1;
  std::ostringstream body_;
};

fs::path input_or(const std::vector<fs::path>& inputs, const fs::path& fallback) {
  return inputs.empty() ? fallback : inputs.front();
}

}  // namespace

// ---------------------------------------------------------------------------

double RunConfig::resolved_theta3() const { return theta3 ? *theta3 : reference_third_angle(collisions); }

std::int64_t RunConfig::resolved_shots() const { return shots ? *shots : default_shots(collisions); }

std::array<MeasurementStrategy, 3> RunConfig::strategies() const {
  return builtin_strategies(collision(), resolved_theta3());
}

RunConfig parse_run_config(const json& doc) {
  only_keys(doc, "", {"version", "experiment", "strategies", "noise", "shots", "seed", "tolerances", "tomography",
                      "estimation", "lb", "search", "output"});
  if (!doc.contains("version")) bad("/version", "missing schema version");
  if (integer<int>(doc, "version", "", 0) != kConfigSchemaVersion) {
    bad("/version", "unsupported schema version (expected " + std::to_string(kConfigSchemaVersion) + ")");
  }
  RunConfig c;
  if (doc.contains("experiment")) {
    const auto& e = doc.at("experiment");
    only_keys(e, "/experiment", {"N", "T"});
    c.collisions = integer<int>(e, "N", "/experiment", c.collisions);
    c.total_time = number(e, "T", "/experiment", c.total_time);
  }
  if (c.collisions < 1) bad("/experiment/N", "at least one collision is required");
  if (!(c.total_time > 0.0)) bad("/experiment/T", "total time must be positive");
  if (doc.contains("strategies")) {
    const auto& s = doc.at("strategies");
    only_keys(s, "/strategies", {"theta3"});
    if (s.contains("theta3")) c.theta3 = number(s, "theta3", "/strategies", 0.0);
  }
  if (doc.contains("noise")) {
    const auto& n = doc.at("noise");
    only_keys(n, "/noise", {"two_qubit_depolarizing", "extra_two_qubit_after", "readout", "white_noise"});
    c.noise.two_qubit_depolarizing = number(n, "two_qubit_depolarizing", "/noise", 0.0);
    c.noise.white_noise = number(n, "white_noise", "/noise", 0.0);
    if (n.contains("extra_two_qubit_after")) {
      const auto& v = n.at("extra_two_qubit_after");
      if (!v.is_array()) bad("/noise/extra_two_qubit_after", "expected an array of collision indices");
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer()) bad("/noise/extra_two_qubit_after/" + std::to_string(i), "expected an integer");
        c.noise.extra_two_qubit_after.push_back(v[i].get<int>());
      }
    }
    if (n.contains("readout")) {
      const auto& v = n.at("readout");
      if (!v.is_array()) bad("/noise/readout", "expected an array of {p01, p10} objects");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string at = "/noise/readout/" + std::to_string(i);
        only_keys(v[i], at, {"p01", "p10"});
        c.noise.readout.push_back({number(v[i], "p01", at, 0.0), number(v[i], "p10", at, 0.0)});
      }
    }
    try {
      c.noise.validate(c.collisions);
    } catch (const DomainError& e) {
      bad("/noise", e.what());
    }
  }
  if (doc.contains("shots")) {
    c.shots = integer<std::int64_t>(doc, "shots", "", 0);
    if (*c.shots < 1) bad("/shots", "must be positive");
  }
  c.seed = integer<std::uint64_t>(doc, "seed", "", c.seed);
  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    only_keys(t, "/tolerances",
              {"gap", "feasibility", "max_iterations", "signaling_gate", "signaling_warn", "validity", "completeness",
               "lift"});
    c.steering.gap_tol = number(t, "gap", "/tolerances", c.steering.gap_tol);
    c.steering.feasibility_tol = number(t, "feasibility", "/tolerances", c.steering.feasibility_tol);
    c.steering.max_iterations = integer<int>(t, "max_iterations", "/tolerances", c.steering.max_iterations);
    c.steering.signaling_gate = number(t, "signaling_gate", "/tolerances", c.steering.signaling_gate);
    c.steering.signaling_warn = number(t, "signaling_warn", "/tolerances", c.steering.signaling_warn);
    c.steering.policy.validity_tol = number(t, "validity", "/tolerances", c.steering.policy.validity_tol);
    c.steering.policy.completeness_tol = number(t, "completeness", "/tolerances", c.steering.policy.completeness_tol);
    c.steering.policy.lift_tol = number(t, "lift", "/tolerances", c.steering.policy.lift_tol);
  }
  if (doc.contains("tomography")) {
    const auto& t = doc.at("tomography");
    only_keys(t, "/tomography", {"theta1", "theta2", "phi2", "bias", "lengths"});
    const CanonicalAngles angles{number(t, "theta1", "/tomography", std::numbers::pi / 2),
                                 number(t, "theta2", "/tomography", std::numbers::pi / 2),
                                 number(t, "phi2", "/tomography", 0.0)};
    c.tomography = TomographySet::from_canonical(angles, triple(t, "lengths", "/tomography", {1, 1, 1}),
                                                 triple(t, "bias", "/tomography", {1, 1, 1}));
    if (!c.tomography.is_positive()) bad("/tomography", "POVM elements are not positive (b_i > min(b0_i, 2 - b0_i))");
    if (!c.tomography.is_complete(c.steering.policy.completeness_tol)) {
      bad("/tomography", "set is not informationally complete");
    }
  }
  if (doc.contains("estimation")) {
    const auto& e = doc.at("estimation");
    only_keys(e, "/estimation", {"per_setting_marginals", "bootstrap"});
    c.per_setting_marginals = boolean(e, "per_setting_marginals", "/estimation", false);
    c.bootstrap = integer<int>(e, "bootstrap", "/estimation", 0);
    if (c.bootstrap < 0) bad("/estimation/bootstrap", "must be non-negative");
  }
  if (doc.contains("lb")) {
    const auto& l = doc.at("lb");
    only_keys(l, "/lb", {"mode", "restarts", "method"});
    try {
      c.lb.mode = parse_lb_mode(text(l, "mode", "/lb", "projective3"));
    } catch (const InputError& e) {
      bad("/lb/mode", e.what());
    }
    c.lb.restarts = integer<int>(l, "restarts", "/lb", -1);
    const std::string m = text(l, "method", "/lb", "auto");
    if (m == "nelder_mead") c.lb.method = LocalMethod::nelder_mead;
    else if (m == "gradient_descent") c.lb.method = LocalMethod::gradient_descent;
    else if (m != "auto") bad("/lb/method", "expected auto, nelder_mead or gradient_descent");
  }
  if (doc.contains("search")) {
    const auto& s = doc.at("search");
    only_keys(s, "/search", {"white_noise", "noise_target", "shared_angles", "azimuth", "restarts"});
    c.search.white_noise = number(s, "white_noise", "/search", c.search.white_noise);
    if (!(c.search.white_noise >= 0.0 && c.search.white_noise <= 1.0)) bad("/search/white_noise", "must lie in [0, 1]");
    const std::string target = text(s, "noise_target", "/search", "joint_state");
    if (target == "joint_state") c.search.noise_target = NoiseTarget::joint_state;
    else if (target == "members") c.search.noise_target = NoiseTarget::members;
    else bad("/search/noise_target", "expected joint_state or members");
    c.search.shared_angles = boolean(s, "shared_angles", "/search", false);
    if (s.contains("azimuth") && !s.at("azimuth").is_null()) c.search.azimuth = number(s, "azimuth", "/search", 0.0);
    c.search.restarts = integer<int>(s, "restarts", "/search", c.search.restarts);
    if (c.search.restarts < 1) bad("/search/restarts", "must be at least 1");
  }
  c.output = text(doc, "output", "", c.output);
  c.lb.steering = c.steering;
  c.search.steering = c.steering;
  c.lb.seed = c.search.seed = c.seed;
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw InputError("config " + path.string() + ": " + e.what());
  }
  return parse_run_config(doc);
}

json to_json(const RunConfig& c) {
  json readout = json::array();
  for (const auto& r : c.noise.readout) readout.push_back({{"p01", r.p01}, {"p10", r.p10}});
  const CanonicalAngles a = c.tomography.canonical_angles();
  std::array<double, 3> lengths{};
  for (std::size_t i = 0; i < 3; ++i) lengths[i] = c.tomography.vectors[i].norm();
  json doc{
      {"version", kConfigSchemaVersion},
      {"experiment", {{"N", c.collisions}, {"T", c.total_time}}},
      {"noise",
       {{"two_qubit_depolarizing", c.noise.two_qubit_depolarizing},
        {"extra_two_qubit_after", c.noise.extra_two_qubit_after},
        {"readout", readout},
        {"white_noise", c.noise.white_noise}}},
      {"seed", c.seed},
      {"tolerances",
       {{"gap", c.steering.gap_tol},
        {"feasibility", c.steering.feasibility_tol},
        {"max_iterations", c.steering.max_iterations},
        {"signaling_gate", c.steering.signaling_gate},
        {"signaling_warn", c.steering.signaling_warn},
        {"validity", c.steering.policy.validity_tol},
        {"completeness", c.steering.policy.completeness_tol},
        {"lift", c.steering.policy.lift_tol}}},
      {"tomography",
       {{"theta1", a.theta1}, {"theta2", a.theta2}, {"phi2", a.phi2}, {"bias", c.tomography.bias}, {"lengths", lengths}}},
      {"estimation", {{"per_setting_marginals", c.per_setting_marginals}, {"bootstrap", c.bootstrap}}},
      {"lb", {{"mode", to_string(c.lb.mode)}, {"restarts", c.lb.restarts}, {"method", method_name(c.lb.method)}}},
      {"search",
       {{"white_noise", c.search.white_noise},
        {"noise_target", c.search.noise_target == NoiseTarget::joint_state ? "joint_state" : "members"},
        {"shared_angles", c.search.shared_angles},
        {"azimuth", c.search.azimuth ? json(*c.search.azimuth) : json(nullptr)},
        {"restarts", c.search.restarts}}},
      {"output", c.output}};
  try {
    doc["strategies"] = {{"theta3", c.resolved_theta3()}};
  } catch (const DomainError&) {
    doc["strategies"] = json::object();
  }
  try {
    doc["shots"] = c.resolved_shots();
  } catch (const DomainError&) {
    doc["shots"] = nullptr;
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Stages

std::vector<fs::path> cmd_simulate(const RunConfig& config, const fs::path& out) {
  const CollisionConfig cc = config.collision();
  const DensityMatrix joint = evolve_joint(DensityMatrix::ground_state(1), cc);
  const auto strategies = config.strategies();
  Assemblage asm_ideal = ideal_assemblage(joint, strategies);
  asm_ideal.meta = provenance(config);
  asm_ideal.meta["kind"] = "ideal";
  asm_ideal.meta["no_signaling_defect"] = no_signaling_defect(asm_ideal);

  fs::create_directories(out);
  const fs::path asm_path = out / "assemblage.json";
  write_json(asm_path, to_json(asm_ideal));

  const auto trajectory = stroboscopic_trajectory(cc);
  std::ostringstream csv;
  csv << "k,t,z_theory,z_simulated\n";
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const double t = static_cast<double>(k) * cc.step();
    csv << k << ',' << fmt(t) << ',' << fmt(std::exp(-t)) << ',' << fmt(trajectory[k].r.z()) << '\n';
  }
  const fs::path traj_path = out / "trajectory.csv";
  write_text(traj_path, csv.str());
  return {asm_path, traj_path};
}

std::vector<fs::path> cmd_sample(const RunConfig& config, const fs::path& out) {
  const auto strategies = config.strategies();
  CountsFile file;
  file.collisions = config.collisions;
  file.total_time = config.total_time;
  file.records = sample_experiment(config.collision(), strategies, config.noise, config.resolved_shots(), config.seed);
  file.meta = provenance(config);
  fs::create_directories(out);
  const fs::path path = out / "counts.json";
  write_counts(file, path);
  return {path};
}

std::vector<fs::path> cmd_tomo(const RunConfig& config, const fs::path& counts, const fs::path& out) {
  const CountsFile file = read_counts(counts);
  const ProbabilityEstimates est = estimate_probabilities(file.records, config.per_setting_marginals);
  const Reconstruction rec = reconstruct_assemblage(config.tomography, est, config.steering.policy);

  Assemblage asm_out = rec.assemblage;
  asm_out.meta = provenance(config);
  asm_out.meta["kind"] = "tomography";
  asm_out.meta["source"] = counts.filename().string();

  json report = provenance(config);
  report["source"] = counts.filename().string();
  report["valid"] = rec.valid;
  report["worst_violation"] = rec.worst_violation;
  report["empty_members"] = rec.empty_members;
  report["no_signaling_defect"] = no_signaling_defect(rec.assemblage);
  report["warnings"] = file.warnings;

  if (config.bootstrap > 0) {
    // Resample every circuit from its observed frequencies and repeat the
    // reconstruction; reports the spread of SW over valid resamples.
    std::vector<double> weights;
    int valid = 0;
    for (int k = 1; k <= config.bootstrap; ++k) {
      std::vector<CountsRecord> resampled;
      for (const auto& r : file.records) {
        std::vector<double> freq(r.table.size());
        for (std::size_t i = 0; i < freq.size(); ++i) {
          freq[i] = static_cast<double>(r.table[i]) / static_cast<double>(r.shots);
        }
        resampled.push_back(sample_counts(freq, r.outcome_bits, r.x, r.bob_setting, r.shots,
                                          config.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(k)));
      }
      const Reconstruction br =
          reconstruct_assemblage(config.tomography, estimate_probabilities(resampled, config.per_setting_marginals),
                                 config.steering.policy);
      if (!br.valid) continue;
      ++valid;
      weights.push_back(steering_weight(br.assemblage, config.steering).steering_weight);
    }
    double mean = 0.0, var = 0.0;
    for (double w : weights) mean += w / static_cast<double>(std::max<std::size_t>(1, weights.size()));
    for (double w : weights) var += (w - mean) * (w - mean) / static_cast<double>(std::max<std::size_t>(2, weights.size()) - 1);
    report["bootstrap"] = {{"resamples", config.bootstrap},
                           {"valid", valid},
                           {"sw_mean", weights.empty() ? json(nullptr) : json(mean)},
                           {"sw_std", weights.size() < 2 ? json(nullptr) : json(std::sqrt(var))}};
  }

  fs::create_directories(out);
  const fs::path asm_path = out / "tomo_assemblage.json";
  const fs::path report_path = out / "tomo.json";
  write_json(asm_path, to_json(asm_out));
  write_json(report_path, report);
  return {asm_path, report_path};
}

std::vector<fs::path> cmd_sw(const RunConfig& config, const fs::path& assemblage, const fs::path& out) {
  const Assemblage asm_in = assemblage_from_json(read_json(assemblage));
  const SdpSolution sol = steering_weight(asm_in, config.steering);
  const CertificateCheck cert = dual_certificate_check(asm_in, sol);
  json report = provenance(config);
  report["source"] = assemblage.filename().string();
  report["solution"] = to_json(sol);
  report["certificate"] = {{"passed", cert.passed},
                           {"dual_psd_margin", cert.dual_psd_margin},
                           {"dual_cover_margin", cert.dual_cover_margin},
                           {"dual_value", cert.dual_value},
                           {"gap", cert.gap}};
  fs::create_directories(out);
  const fs::path path = out / "report.json";
  write_json(path, report);
  return {path};
}

std::vector<fs::path> cmd_lb(const RunConfig& config, const fs::path& counts, const fs::path& out) {
  const CountsFile file = read_counts(counts);
  const ProbabilityEstimates est = estimate_probabilities(file.records, config.per_setting_marginals);
  const LbResult r = lower_bound(est, config.lb);
  json report = provenance(config);
  report["source"] = counts.filename().string();
  report["N"] = file.collisions;
  report["result"] = to_json(r);
  report["warnings"] = file.warnings;
  fs::create_directories(out);
  const fs::path path = out / "lb.json";
  write_json(path, report);
  return {path};
}

std::vector<fs::path> cmd_find_strategy(const RunConfig& config, const fs::path& out) {
  const StrategySearchResult r = find_third_strategy(config.collision(), config.search);
  json report = provenance(config);
  report["N"] = config.collisions;
  report["result"] = to_json(r);
  fs::create_directories(out);
  const fs::path path = out / "strategy.json";
  write_json(path, report);
  return {path};
}

std::vector<fs::path> cmd_plot(const RunConfig& config, const std::vector<fs::path>& inputs, const fs::path& out) {
  fs::create_directories(out);
  std::vector<fs::path> written;

  // (i) Stroboscopic decay of the z component.
  {
    const CollisionConfig cc = config.collision();
    const auto trajectory = stroboscopic_trajectory(cc);
    Svg svg(560, 380);
    svg.frame(0.0, cc.total_time(), 0.0, 1.0, 70, 30, 450, 290);
    svg.axes("t", "z");
    std::vector<std::pair<double, double>> curve;
    for (int i = 0; i <= 200; ++i) {
      const double t = cc.total_time() * i / 200.0;
      curve.emplace_back(t, std::exp(-t));
    }
    svg.polyline(curve, "fill:none;stroke:#1f77b4;stroke-width:1.5");
    std::ostringstream csv;
    csv << "k,t,z_theory,z_simulated\n";
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
      const double t = static_cast<double>(k) * cc.step();
      if (k > 0) {
        svg.line(t - cc.step(), trajectory[k - 1].r.z(), t, trajectory[k].r.z(),
                 "stroke:#555;stroke-width:1;stroke-dasharray:4,3");
      }
      svg.circle(t, trajectory[k].r.z(), 4.0, "fill:#d62728");
      csv << k << ',' << fmt(t) << ',' << fmt(std::exp(-t)) << ',' << fmt(trajectory[k].r.z()) << '\n';
    }
    write_text(out / "decay.svg", svg.str());
    write_text(out / "decay.csv", csv.str());
    written.push_back(out / "decay.svg");
    written.push_back(out / "decay.csv");
  }

  // (ii) Ensembles in the Bloch plane, dot area proportional to p(a|x).
  const fs::path asm_path = out / "assemblage.json";
  if (fs::exists(asm_path)) {
    const Assemblage a = assemblage_from_json(read_json(asm_path));
    const int panels = static_cast<int>(a.num_settings());
    Svg svg(40 + 260 * panels, 320);
    std::ostringstream csv;
    csv << "x,a,p,rx,ry,rz\n";
    for (int x = 0; x < panels; ++x) {
      const auto& s = a.settings[static_cast<std::size_t>(x)];
      // Horizontal axis: whichever of r_x, r_y carries more weight.
      double wx = 0.0, wy = 0.0;
      for (const auto& m : s.members) {
        wx += m.p * std::abs(m.bloch.x());
        wy += m.p * std::abs(m.bloch.y());
      }
      const bool use_y = wy > wx;
      svg.frame(-1.1, 1.1, -1.1, 1.1, 30 + 260 * x, 30, 240, 240);
      svg.circle(0.0, 0.0, 120.0 / 1.1, "fill:none;stroke:#999");
      svg.line(-1.1, 0, 1.1, 0, "stroke:#ccc");
      svg.line(0, -1.1, 0, 1.1, "stroke:#ccc");
      svg.label(150 + 260 * x, 20, s.label + (use_y ? " (y-z plane)" : " (x-z plane)"));
      ComplexMatrix avg = ComplexMatrix::Zero(2, 2);
      for (std::size_t i = 0; i < s.members.size(); ++i) {
        const auto& m = s.members[i];
        avg += m.sigma();
        if (m.p > 0.0) {
          svg.circle(use_y ? m.bloch.y() : m.bloch.x(), m.bloch.z(), 18.0 * std::sqrt(m.p), "fill:#d62728;fill-opacity:0.6");
        }
        csv << s.label << ',' << outcome_label(i, a.outcome_bits) << ',' << fmt(m.p) << ',' << fmt(m.bloch.x()) << ','
            << fmt(m.bloch.y()) << ',' << fmt(m.bloch.z()) << '\n';
      }
      const Eigen::Vector4d v = pauli_coefficients(avg);
      const double hx = use_y ? v(2) : v(1), hz = v(3);
      const double r = 5.0;
      std::ostringstream tri;
      tri << "<polygon style=\"fill:#d62728\" points=\"" << fmt(svg.px(hx), "%.2f") << ',' << fmt(svg.py(hz) - r, "%.2f")
          << ' ' << fmt(svg.px(hx) - r, "%.2f") << ',' << fmt(svg.py(hz) + r, "%.2f") << ' '
          << fmt(svg.px(hx) + r, "%.2f") << ',' << fmt(svg.py(hz) + r, "%.2f") << "\"/>";
      svg.raw(tri.str());
    }
    write_text(out / "ensembles.svg", svg.str());
    write_text(out / "ensembles.csv", csv.str());
    written.push_back(out / "ensembles.svg");
    written.push_back(out / "ensembles.csv");
  }

  // (iii) LB against N from one or more lb.json reports.
  std::vector<fs::path> lb_files = inputs;
  if (lb_files.empty() && fs::exists(out / "lb.json")) lb_files.push_back(out / "lb.json");
  if (!lb_files.empty()) {
    std::map<int, double> lb_by_n;
    for (const auto& p : lb_files) {
      const json doc = read_json(p);
      if (!doc.contains("N") || !doc.contains("result") || !doc.at("result").contains("lb")) {
        throw InputError(p.string() + ": not a lower-bound report");
      }
      lb_by_n[doc.at("N").get<int>()] = doc.at("result").at("lb").get<double>();
    }
    const int nmax = lb_by_n.rbegin()->first;
    Svg svg(560, 380);
    svg.frame(0.5, nmax + 0.5, 0.0, 1.0, 70, 30, 450, 290);
    svg.axes("N", "LB", nmax);
    std::ostringstream csv;
    csv << "N,lb\n";
    for (const auto& [n, lb] : lb_by_n) {
      svg.rect(n - 0.3, 0.0, 0.6, lb, "fill:#1f77b4");
      csv << n << ',' << fmt(lb) << '\n';
    }
    write_text(out / "lb_vs_n.svg", svg.str());
    write_text(out / "lb_vs_n.csv", csv.str());
    written.push_back(out / "lb_vs_n.svg");
    written.push_back(out / "lb_vs_n.csv");
  }
  return written;
}

// ---------------------------------------------------------------------------

int run_command(const CommandLine& cli, std::ostream& log) {
  try {
    RunConfig config = cli.config ? load_run_config(*cli.config) : RunConfig{};
    if (cli.seed) config.seed = config.lb.seed = config.search.seed = *cli.seed;
    if (cli.mode) config.lb.mode = parse_lb_mode(*cli.mode);
    if (cli.shots) {
      if (*cli.shots < 1) throw InputError("--shots must be positive");
      config.shots = *cli.shots;
    }
    if (cli.bootstrap) {
      if (*cli.bootstrap < 0) throw InputError("--bootstrap must be non-negative");
      config.bootstrap = *cli.bootstrap;
    }
    if (cli.out) config.output = cli.out->string();
    const fs::path out = config.output;

    std::vector<fs::path> written;
    if (cli.command == "simulate") written = cmd_simulate(config, out);
    else if (cli.command == "sample") written = cmd_sample(config, out);
    else if (cli.command == "tomo") written = cmd_tomo(config, input_or(cli.inputs, out / "counts.json"), out);
    else if (cli.command == "sw") written = cmd_sw(config, input_or(cli.inputs, out / "assemblage.json"), out);
    else if (cli.command == "lb") written = cmd_lb(config, input_or(cli.inputs, out / "counts.json"), out);
    else if (cli.command == "find-strategy") written = cmd_find_strategy(config, out);
    else if (cli.command == "plot") written = cmd_plot(config, cli.inputs, out);
    else throw InputError("unknown command '" + cli.command + "'");
    for (const auto& p : written) log << "wrote " << p.string() << '\n';
    return kExitOk;
  } catch (const ResourceError& e) {
    log << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const SolverError& e) {
    log << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const SearchError& e) {
    log << "search failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const InputError& e) {
    log << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    log << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const json::exception& e) {
    log << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    log << "input error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace steerlab
