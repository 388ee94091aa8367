#include "steerlab/assemblage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "steerlab/errors.hpp"

namespace steerlab {

namespace {

ComplexMatrix local_projector(const Vec3& direction, bool outcome_one) {
  const double sign = outcome_one ? -1.0 : 1.0;
  return from_pauli_coefficients({1.0, sign * direction.x(), sign * direction.y(), sign * direction.z()});
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError("assemblage" + where + ": " + what);
}

}  // namespace

void MeasurementStrategy::validate(const NumericPolicy& policy) const {
  for (std::size_t i = 0; i < directions.size(); ++i) {
    if (std::abs(directions[i].norm() - 1.0) > policy.unit_norm_tol) {
      throw DomainError("strategy " + label + ": direction " + std::to_string(i + 1) + " is not a unit vector");
    }
  }
}

Vec3 direction_from_angles(double polar, double azimuth) {
  return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar)};
}

std::array<MeasurementStrategy, 3> builtin_strategies(const CollisionConfig& config, double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi)) {
    throw DomainError("builtin_strategies: theta must lie in (0, pi)");
  }
  const int n = config.collisions();
  const double g = config.coupling();
  std::array<MeasurementStrategy, 3> out{
      MeasurementStrategy{"x1", std::vector<Vec3>(n, Vec3(0, 0, 1))},
      MeasurementStrategy{"x2", std::vector<Vec3>(n, Vec3(std::sin(g), 0, std::cos(g)))},
      MeasurementStrategy{"x3", std::vector<Vec3>(n, Vec3(0, std::sin(theta), std::cos(theta)))},
  };
  return out;
}

double reference_third_angle(int collisions) {
  switch (collisions) {
    case 1: return 1.570;
    case 2: return 0.748;
    case 3: return 0.456;
    case 4: return 0.334;
    default:
      throw DomainError("no reference third-strategy angle for N = " + std::to_string(collisions) +
                        "; supply one explicitly");
  }
}

ComplexMatrix Member::sigma() const {
  return from_pauli_coefficients({p, p * bloch.x(), p * bloch.y(), p * bloch.z()});
}

Member Member::from_operator(const ComplexMatrix& sigma) {
  const Eigen::Vector4d v = pauli_coefficients(sigma);
  Member m;
  m.p = v(0);
  if (m.p > 0.0) m.bloch = v.tail<3>() / m.p;
  return m;
}

std::vector<int> Assemblage::outcome_counts() const {
  std::vector<int> out;
  out.reserve(settings.size());
  for (const auto& s : settings) out.push_back(static_cast<int>(s.members.size()));
  return out;
}

ComplexMatrix Assemblage::marginal(std::size_t setting) const {
  ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
  for (const auto& m : settings.at(setting).members) sum += m.sigma();
  return sum;
}

std::string outcome_label(std::size_t a, int bits) {
  if (bits <= 0) return std::to_string(a);
  std::string s(static_cast<std::size_t>(bits), '0');
  for (int i = 0; i < bits; ++i) {
    if ((a >> (bits - 1 - i)) & 1U) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

std::size_t outcome_index(const std::string& label) {
  std::size_t a = 0;
  for (char c : label) {
    if (c != '0' && c != '1') throw InputError("outcome label '" + label + "' is not a bit string");
    a = (a << 1) | static_cast<std::size_t>(c == '1');
  }
  return a;
}

Assemblage ideal_assemblage(const DensityMatrix& joint, std::span<const MeasurementStrategy> strategies) {
  const int n = joint.qubit_count() - 1;
  if (n < 1) throw DomainError("ideal_assemblage: joint state needs at least one ancilla");
  Assemblage out;
  out.outcome_bits = n;
  const int keep_system[] = {0};
  const std::size_t outcomes = std::size_t{1} << n;
  for (const auto& strategy : strategies) {
    if (static_cast<int>(strategy.directions.size()) != n) {
      throw DomainError("ideal_assemblage: strategy " + strategy.label + " has " +
                        std::to_string(strategy.directions.size()) + " directions for " + std::to_string(n) +
                        " ancillas");
    }
    strategy.validate();
    Setting setting{strategy.label, {}};
    setting.members.reserve(outcomes);
    for (std::size_t a = 0; a < outcomes; ++a) {
      ComplexMatrix effect = pauli::identity();
      for (int i = 0; i < n; ++i) {
        const bool one = (a >> (n - 1 - i)) & 1U;
        effect = kron(effect, local_projector(strategy.directions[static_cast<std::size_t>(i)], one));
      }
      const ComplexMatrix weighted = joint.matrix() * effect;
      ComplexMatrix sigma = partial_trace_operator(weighted, n + 1, keep_system);
      sigma = 0.5 * (sigma + sigma.adjoint());
      setting.members.push_back(Member::from_operator(sigma));
    }
    out.settings.push_back(std::move(setting));
  }
  return out;
}

Assemblage add_white_noise(const Assemblage& asm_in, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("add_white_noise: lambda must lie in [0, 1]");
  Assemblage out = asm_in;
  for (auto& s : out.settings) {
    for (auto& m : s.members) m.bloch *= (1.0 - lambda);
  }
  return out;
}

double no_signaling_defect(const Assemblage& asm_in) {
  double worst = 0.0;
  for (std::size_t x = 0; x < asm_in.num_settings(); ++x) {
    const ComplexMatrix mx = asm_in.marginal(x);
    for (std::size_t y = x + 1; y < asm_in.num_settings(); ++y) {
      worst = std::max(worst, 0.5 * trace_norm(mx - asm_in.marginal(y)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const Assemblage& a) {
  nlohmann::json settings = nlohmann::json::array();
  nlohmann::json members = nlohmann::json::array();
  for (const auto& s : a.settings) {
    settings.push_back(s.label);
    for (std::size_t i = 0; i < s.members.size(); ++i) {
      const auto& m = s.members[i];
      members.push_back({{"x", s.label},
                         {"a", outcome_label(i, a.outcome_bits)},
                         {"p", m.p},
                         {"bloch", {m.bloch.x(), m.bloch.y(), m.bloch.z()}}});
    }
  }
  nlohmann::json meta = a.meta.is_object() ? a.meta : nlohmann::json::object();
  meta["outcome_bits"] = a.outcome_bits;
  meta["outcomes"] = a.outcome_counts();
  return {{"settings", settings}, {"members", members}, {"meta", meta}};
}

Assemblage assemblage_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) fail("", "document must be an object");
  for (const char* key : {"settings", "members"}) {
    if (!doc.contains(key) || !doc.at(key).is_array()) fail(std::string("/") + key, "missing array");
  }
  Assemblage out;
  if (doc.contains("meta")) {
    if (!doc.at("meta").is_object()) fail("/meta", "must be an object");
    out.meta = doc.at("meta");
    if (out.meta.contains("outcome_bits")) {
      if (!out.meta.at("outcome_bits").is_number_integer()) fail("/meta/outcome_bits", "must be an integer");
      out.outcome_bits = out.meta.at("outcome_bits").get<int>();
    }
    out.meta.erase("outcome_bits");
    out.meta.erase("outcomes");
  }
  const auto& labels = doc.at("settings");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_string()) fail("/settings/" + std::to_string(i), "must be a string");
    out.settings.push_back(Setting{labels[i].get<std::string>(), {}});
  }
  const auto& members = doc.at("members");
  for (std::size_t k = 0; k < members.size(); ++k) {
    const std::string where = "/members/" + std::to_string(k);
    const auto& m = members[k];
    if (!m.is_object()) fail(where, "must be an object");
    if (!m.contains("x") || !m.at("x").is_string()) fail(where + "/x", "missing string");
    if (!m.contains("a") || !m.at("a").is_string()) fail(where + "/a", "missing string");
    if (!m.contains("p") || !m.at("p").is_number()) fail(where + "/p", "missing number");
    if (!m.contains("bloch") || !m.at("bloch").is_array() || m.at("bloch").size() != 3) {
      fail(where + "/bloch", "expected three numbers");
    }
    const auto label = m.at("x").get<std::string>();
    const auto it = std::find_if(out.settings.begin(), out.settings.end(),
                                 [&](const Setting& s) { return s.label == label; });
    if (it == out.settings.end()) fail(where + "/x", "unknown setting '" + label + "'");
    const auto a_str = m.at("a").get<std::string>();
    std::size_t a = 0;
    try {
      a = out.outcome_bits > 0 ? outcome_index(a_str) : static_cast<std::size_t>(std::stoul(a_str));
    } catch (const std::exception&) {
      fail(where + "/a", "invalid outcome label '" + a_str + "'");
    }
    if (out.outcome_bits > 0 && a_str.size() != static_cast<std::size_t>(out.outcome_bits)) {
      fail(where + "/a", "outcome label has the wrong number of bits");
    }
    Member member;
    member.p = m.at("p").get<double>();
    for (int c = 0; c < 3; ++c) {
      if (!m.at("bloch")[static_cast<std::size_t>(c)].is_number()) fail(where + "/bloch", "expected numbers");
      member.bloch(c) = m.at("bloch")[static_cast<std::size_t>(c)].get<double>();
    }
    if (member.p < 0.0) fail(where + "/p", "probability must be non-negative");
    auto& list = it->members;
    if (list.size() <= a) list.resize(a + 1);
    list[a] = member;
  }
  for (std::size_t x = 0; x < out.settings.size(); ++x) {
    if (out.settings[x].members.empty()) fail("/settings/" + std::to_string(x), "setting has no members");
  }
  return out;
}

}  // namespace steerlab
