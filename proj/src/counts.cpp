#include "steerlab/counts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "steerlab/errors.hpp"

namespace steerlab {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// (1 - p) rho + p * (Tr_pair rho) (x) I/4, written as a Pauli twirl.
void depolarize_pair(ComplexMatrix& rho, int first, int second, int qubits, double p) {
  if (p == 0.0) return;
  ComplexMatrix twirled = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const ComplexMatrix pp = embed_two(kron(pauli::sigma(i), pauli::sigma(j)), first, second, qubits);
      twirled += pp * rho * pp.adjoint();
    }
  }
  rho = (1.0 - p) * rho + (p / 16.0) * twirled;
}

ReadoutError readout_for(const NoiseModel& noise, int qubit) {
  if (noise.readout.empty()) return {};
  if (noise.readout.size() == 1) return noise.readout.front();
  return noise.readout[static_cast<std::size_t>(qubit)];
}

std::string count_key(std::size_t a, int bits, int b) { return outcome_label(a, bits) + "|" + std::to_string(b); }

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError("counts" + where + ": " + what);
}

}  // namespace

bool NoiseModel::is_ideal() const {
  const bool ideal_readout = std::all_of(readout.begin(), readout.end(),
                                         [](const ReadoutError& r) { return r.p01 == 0.0 && r.p10 == 0.0; });
  return two_qubit_depolarizing == 0.0 && white_noise == 0.0 && ideal_readout;
}

void NoiseModel::validate(int collisions) const {
  if (!is_probability(two_qubit_depolarizing)) throw DomainError("noise: depolarizing probability outside [0, 1]");
  if (!is_probability(white_noise)) throw DomainError("noise: white noise outside [0, 1]");
  for (int k : extra_two_qubit_after) {
    if (k < 1 || k > collisions) {
      throw DomainError("noise: extra depolarizing location " + std::to_string(k) + " is not a collision index");
    }
  }
  if (readout.size() > 1 && static_cast<int>(readout.size()) != collisions + 1) {
    throw DomainError("noise: readout list needs 1 or " + std::to_string(collisions + 1) + " entries");
  }
  for (const auto& r : readout) {
    if (!is_probability(r.p01) || !is_probability(r.p10)) throw DomainError("noise: readout flip outside [0, 1]");
  }
}

ComplexMatrix premeasurement_rotation(const Vec3& direction) {
  const double theta = std::acos(std::clamp(direction.z() / direction.norm(), -1.0, 1.0));
  const double phi = std::atan2(direction.y(), direction.x());
  if (phi == 0.0) return rotation_y(-theta);
  return rotation_y(-theta) * rotation_z(-phi);
}

ComplexMatrix bob_premeasurement_rotation(int bob_setting) {
  switch (bob_setting) {
    case 1: return rotation_y(-std::numbers::pi / 2);
    case 2: return rotation_x(std::numbers::pi / 2);
    case 3: return pauli::identity();
    default: throw DomainError("Bob setting must be 1, 2 or 3");
  }
}

DensityMatrix noisy_joint_state(const CollisionConfig& config, const NoiseModel& noise) {
  const int n = config.collisions();
  noise.validate(n);
  if (n > kDefaultMaxCollisions) {
    throw ResourceError("noisy_joint_state: " + std::to_string(n) + " collisions exceed the budget of " +
                        std::to_string(kDefaultMaxCollisions));
  }
  const int qubits = n + 1;
  ComplexMatrix rho = DensityMatrix::ground_state(qubits).matrix();
  ComplexMatrix rotations = pauli::identity();
  const ComplexMatrix ry = rotation_y(config.coupling());
  for (int i = 0; i < n; ++i) rotations = kron(rotations, ry);
  rho = rotations * rho * rotations.adjoint();
  for (int i = 1; i <= n; ++i) {
    const ComplexMatrix cx = cnot(i, 0, qubits);
    rho = cx * rho * cx.adjoint();
    depolarize_pair(rho, i, 0, qubits, noise.two_qubit_depolarizing);
    const auto extra = std::count(noise.extra_two_qubit_after.begin(), noise.extra_two_qubit_after.end(), i);
    for (std::ptrdiff_t r = 0; r < extra; ++r) depolarize_pair(rho, i, 0, qubits, noise.two_qubit_depolarizing);
  }
  if (noise.white_noise > 0.0) {
    const double d = static_cast<double>(rho.rows());
    rho = (1.0 - noise.white_noise) * rho +
          (noise.white_noise / d) * ComplexMatrix::Identity(rho.rows(), rho.cols());
  }
  return DensityMatrix::trusted(std::move(rho));
}

std::vector<double> outcome_distribution(const DensityMatrix& joint, const MeasurementStrategy& strategy,
                                         int bob_setting, const NoiseModel& noise) {
  const int qubits = joint.qubit_count();
  const int n = qubits - 1;
  if (static_cast<int>(strategy.directions.size()) != n) {
    throw DomainError("outcome_distribution: strategy " + strategy.label + " does not match the ancilla count");
  }
  strategy.validate();
  noise.validate(n);
  ComplexMatrix u = bob_premeasurement_rotation(bob_setting);
  for (const auto& dir : strategy.directions) u = kron(u, premeasurement_rotation(dir));
  const ComplexMatrix rotated = u * joint.matrix() * u.adjoint();

  // Basis index = b << n | a because qubit 0 (Bob) is most significant.
  const std::size_t dim = std::size_t{1} << qubits;
  std::vector<double> basis(dim);
  for (std::size_t k = 0; k < dim; ++k) basis[k] = std::max(0.0, rotated(k, k).real());

  for (int q = 0; q < qubits; ++q) {
    const ReadoutError err = readout_for(noise, q);
    if (err.p01 == 0.0 && err.p10 == 0.0) continue;
    const std::size_t bit = std::size_t{1} << (qubits - 1 - q);
    for (std::size_t k = 0; k < dim; ++k) {
      if (k & bit) continue;
      const double p0 = basis[k], p1 = basis[k | bit];
      basis[k] = (1.0 - err.p01) * p0 + err.p10 * p1;
      basis[k | bit] = err.p01 * p0 + (1.0 - err.p10) * p1;
    }
  }

  const std::size_t outcomes = std::size_t{1} << n;
  std::vector<double> out(outcomes * 2);
  double total = 0.0;
  for (std::size_t a = 0; a < outcomes; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      out[a * 2 + b] = basis[(b << n) | a];
      total += out[a * 2 + b];
    }
  }
  for (double& p : out) p /= total;
  return out;
}

CountsRecord sample_counts(std::span<const double> distribution, int outcome_bits, const std::string& label,
                           int bob_setting, std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw DomainError("sample_counts: shots must be at least 1");
  if (distribution.size() != (std::size_t{2} << outcome_bits)) {
    throw DomainError("sample_counts: distribution size does not match the outcome count");
  }
  const std::uint64_t stream =
      splitmix64(splitmix64(seed ^ splitmix64(fnv1a(label))) ^ static_cast<std::uint64_t>(bob_setting));
  std::mt19937_64 rng(stream);

  CountsRecord rec{label, bob_setting, shots, outcome_bits, std::vector<std::int64_t>(distribution.size(), 0)};
  std::int64_t remaining = shots;
  double mass = 1.0;
  for (std::size_t k = 0; k + 1 < distribution.size() && remaining > 0; ++k) {
    const double p = distribution[k];
    if (p <= 0.0) continue;
    const double q = std::clamp(p / mass, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> draw(remaining, q);
    const std::int64_t c = draw(rng);
    rec.table[k] = c;
    remaining -= c;
    mass -= p;
    if (mass <= 0.0) break;
  }
  rec.table.back() += remaining;
  return rec;
}

std::vector<CountsRecord> sample_experiment(const CollisionConfig& config,
                                            std::span<const MeasurementStrategy> strategies,
                                            const NoiseModel& noise, std::int64_t shots, std::uint64_t seed) {
  const DensityMatrix joint = noisy_joint_state(config, noise);
  std::vector<CountsRecord> out;
  for (const auto& s : strategies) {
    for (int i = 1; i <= kBobSettings; ++i) {
      const auto dist = outcome_distribution(joint, s, i, noise);
      out.push_back(sample_counts(dist, config.collisions(), s.label, i, shots, seed));
    }
  }
  return out;
}

std::int64_t default_shots(int collisions) {
  static constexpr std::int64_t kJobRepetitions[] = {10, 16, 30, 60};
  if (collisions < 1 || collisions > 4) {
    throw DomainError("no default shot budget for N = " + std::to_string(collisions));
  }
  return kJobRepetitions[collisions - 1] * 8 * 8192;
}

bool OutcomeEstimate::empty() const {
  return std::any_of(bob_zero.begin(), bob_zero.end(), [](const auto& v) { return !v.has_value(); });
}

ProbabilityEstimates estimate_probabilities(std::span<const CountsRecord> records, bool per_setting_marginals) {
  if (records.empty()) throw InputError("estimate_probabilities: no records");
  ProbabilityEstimates out;
  out.outcome_bits = records.front().outcome_bits;
  std::vector<std::string> labels;
  std::map<std::string, std::array<const CountsRecord*, 3>> grouped;
  for (const auto& r : records) {
    if (r.outcome_bits != out.outcome_bits) throw InputError("estimate_probabilities: mixed outcome widths");
    if (r.bob_setting < 1 || r.bob_setting > 3) {
      throw InputError("estimate_probabilities: record " + r.x + " has Bob setting " + std::to_string(r.bob_setting));
    }
    auto [it, inserted] = grouped.try_emplace(r.x, std::array<const CountsRecord*, 3>{});
    if (inserted) labels.push_back(r.x);
    auto& slot = it->second[static_cast<std::size_t>(r.bob_setting - 1)];
    if (slot != nullptr) {
      throw InputError("estimate_probabilities: duplicate record for " + r.x + ", Bob setting " +
                       std::to_string(r.bob_setting));
    }
    slot = &r;
  }
  const std::size_t outcomes = std::size_t{1} << out.outcome_bits;
  for (const auto& label : labels) {
    const auto& group = grouped.at(label);
    for (int i = 0; i < 3; ++i) {
      if (group[static_cast<std::size_t>(i)] == nullptr) {
        throw InputError("estimate_probabilities: strategy " + label + " lacks Bob setting " + std::to_string(i + 1));
      }
    }
    StrategyEstimate est{label, std::vector<OutcomeEstimate>(outcomes)};
    std::int64_t pooled_shots = 0;
    for (const auto* r : group) pooled_shots += r->shots;
    for (std::size_t a = 0; a < outcomes; ++a) {
      auto& o = est.outcomes[a];
      std::int64_t pooled = 0;
      double mean_freq = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        const CountsRecord& r = *group[i];
        const std::int64_t n0 = r.count(a, 0), n_a = n0 + r.count(a, 1);
        pooled += n_a;
        mean_freq += static_cast<double>(n_a) / static_cast<double>(r.shots) / 3.0;
        if (n_a > 0) o.bob_zero[i] = static_cast<double>(n0) / static_cast<double>(n_a);
      }
      o.p = per_setting_marginals ? mean_freq : static_cast<double>(pooled) / static_cast<double>(pooled_shots);
    }
    out.settings.push_back(std::move(est));
  }
  return out;
}

ProbabilityEstimates exact_estimates(const CollisionConfig& config, std::span<const MeasurementStrategy> strategies,
                                     const NoiseModel& noise) {
  const DensityMatrix joint = noisy_joint_state(config, noise);
  ProbabilityEstimates out;
  out.outcome_bits = config.collisions();
  const std::size_t outcomes = std::size_t{1} << out.outcome_bits;
  for (const auto& s : strategies) {
    StrategyEstimate est{s.label, std::vector<OutcomeEstimate>(outcomes)};
    for (int i = 1; i <= kBobSettings; ++i) {
      const auto dist = outcome_distribution(joint, s, i, noise);
      for (std::size_t a = 0; a < outcomes; ++a) {
        const double pa = dist[a * 2] + dist[a * 2 + 1];
        // Pooling three settings of equal weight averages the three marginals.
        est.outcomes[a].p += pa / 3.0;
        if (pa > 0.0) est.outcomes[a].bob_zero[static_cast<std::size_t>(i - 1)] = dist[a * 2] / pa;
      }
    }
    out.settings.push_back(std::move(est));
  }
  return out;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const CountsFile& file) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : file.records) {
    nlohmann::json counts = nlohmann::json::object();
    const std::size_t outcomes = std::size_t{1} << r.outcome_bits;
    for (std::size_t a = 0; a < outcomes; ++a) {
      for (int b = 0; b < 2; ++b) counts[count_key(a, r.outcome_bits, b)] = r.count(a, b);
    }
    records.push_back({{"x", r.x}, {"bob_setting", r.bob_setting}, {"shots", r.shots}, {"counts", counts}});
  }
  nlohmann::json doc{{"experiment", {{"N", file.collisions}, {"T", file.total_time}}}, {"records", records}};
  if (!file.meta.is_null()) doc["meta"] = file.meta;
  return doc;
}

CountsFile counts_from_json(const nlohmann::json& doc) {
  static const std::set<std::string> kTop{"experiment", "records", "meta"};
  static const std::set<std::string> kExperiment{"N", "T"};
  static const std::set<std::string> kRecord{"x", "bob_setting", "shots", "counts"};
  CountsFile out;
  if (!doc.is_object()) fail("", "document must be an object");
  const auto warn_unknown = [&](const nlohmann::json& obj, const std::set<std::string>& known,
                                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
      if (!known.contains(key)) out.warnings.push_back("ignoring unknown field " + where + "/" + key);
    }
  };
  warn_unknown(doc, kTop, "");
  if (doc.contains("meta")) out.meta = doc.at("meta");
  if (!doc.contains("experiment") || !doc.at("experiment").is_object()) fail("/experiment", "missing object");
  const auto& exp = doc.at("experiment");
  warn_unknown(exp, kExperiment, "/experiment");
  if (!exp.contains("N") || !exp.at("N").is_number_integer()) fail("/experiment/N", "missing integer");
  if (!exp.contains("T") || !exp.at("T").is_number()) fail("/experiment/T", "missing number");
  out.collisions = exp.at("N").get<int>();
  out.total_time = exp.at("T").get<double>();
  if (out.collisions < 1 || out.collisions > 16) fail("/experiment/N", "must lie in 1..16");

  if (!doc.contains("records") || !doc.at("records").is_array()) fail("/records", "missing array");
  const auto& records = doc.at("records");
  const std::size_t outcomes = std::size_t{1} << out.collisions;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const std::string where = "/records/" + std::to_string(k);
    const auto& r = records[k];
    if (!r.is_object()) fail(where, "must be an object");
    warn_unknown(r, kRecord, where);
    if (!r.contains("x") || !r.at("x").is_string()) fail(where + "/x", "missing string");
    if (!r.contains("bob_setting") || !r.at("bob_setting").is_number_integer()) {
      fail(where + "/bob_setting", "missing integer");
    }
    if (!r.contains("shots") || !r.at("shots").is_number_integer()) fail(where + "/shots", "missing integer");
    if (!r.contains("counts") || !r.at("counts").is_object()) fail(where + "/counts", "missing object");
    CountsRecord rec;
    rec.x = r.at("x").get<std::string>();
    rec.bob_setting = r.at("bob_setting").get<int>();
    if (rec.bob_setting < 1 || rec.bob_setting > 3) fail(where + "/bob_setting", "must be 1, 2 or 3");
    rec.shots = r.at("shots").get<std::int64_t>();
    if (rec.shots < 1) fail(where + "/shots", "must be positive");
    rec.outcome_bits = out.collisions;
    rec.table.assign(outcomes * 2, 0);
    std::int64_t total = 0;
    for (const auto& [key, value] : r.at("counts").items()) {
      const std::string at = where + "/counts/" + key;
      const auto bar = key.find('|');
      if (bar == std::string::npos || bar != static_cast<std::size_t>(out.collisions) || key.size() != bar + 2) {
        fail(at, "key must look like '<" + std::to_string(out.collisions) + " Alice bits>|<Bob bit>'");
      }
      std::size_t a = 0;
      try {
        a = outcome_index(key.substr(0, bar));
      } catch (const InputError&) {
        fail(at, "Alice outcome is not a bit string");
      }
      const char b = key[bar + 1];
      if (b != '0' && b != '1') fail(at, "Bob outcome must be 0 or 1");
      if (!value.is_number_integer()) fail(at, "count must be an integer");
      const auto c = value.get<std::int64_t>();
      if (c < 0) fail(at, "count must be non-negative");
      rec.table[a * 2 + static_cast<std::size_t>(b - '0')] = c;
      total += c;
    }
    if (total != rec.shots) {
      fail(where + "/counts", "counts sum to " + std::to_string(total) + " but shots = " + std::to_string(rec.shots));
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

void write_counts(const CountsFile& file, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot write " + path.string());
  os << to_json(file).dump(2) << '\n';
}

CountsFile read_counts(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return counts_from_json(doc);
}

}  // namespace steerlab
