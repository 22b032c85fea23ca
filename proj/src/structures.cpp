#include "eqpl/structures.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace eqpl {
namespace {

std::string show(const QubitSet& s) { return render(ast::non_etg(s)); }

void require_width(const QubitSet& s) {
  if (s.size() > kMaxFrame) throw Error("qubit set too large to enumerate: " + std::to_string(s.size()));
}

}  // namespace

Mask remap(Mask v, const QubitSet& from, const QubitSet& to) {
  Mask out = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < to.size(); ++i) {
    while (j < from.size() && from[j] < to[i]) ++j;
    if (j < from.size() && from[j] == to[i] && (v >> j & 1U)) out |= Mask{1} << i;
  }
  return out;
}

std::string bitstring(Mask v, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i)
    if (v >> i & 1U) s[i] = '1';
  return s;
}

Mask parse_bitstring(std::string_view bits) {
  Mask v = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      v |= Mask{1} << i;
    else if (bits[i] != '0')
      throw Error("bad bitstring '" + std::string(bits) + "'");
  }
  return v;
}

double StateVector::norm() const {
  double s = 0;
  for (const auto& a : amps) s += std::norm(a);
  return std::sqrt(s);
}

StateVector make_vector(QubitSet carrier, const std::map<Mask, Complex>& entries, double eps_norm) {
  require_width(carrier);
  StateVector v{std::move(carrier), {}};
  v.amps.assign(std::size_t{1} << v.carrier.size(), Complex{});
  for (const auto& [m, a] : entries) {
    if (m >= v.amps.size()) throw Error("valuation outside the carrier " + show(v.carrier));
    v.amps[m] = a;
  }
  const double n = v.norm();
  if (std::abs(n - 1.0) > eps_norm) throw NotUnitNorm(n);
  return v;
}

StateVector unit_scalar() { return StateVector{{}, {Complex{1.0}}}; }

StateVector tensor(const StateVector& a, const StateVector& b) {
  if (!set_intersection(a.carrier, b.carrier).empty())
    throw OverlappingCarriers("tensor of vectors over " + show(a.carrier) + " and " + show(b.carrier));
  StateVector r{set_union(a.carrier, b.carrier), {}};
  require_width(r.carrier);
  r.amps.assign(std::size_t{1} << r.carrier.size(), Complex{});
  for (Mask m = 0; m < r.amps.size(); ++m)
    r.amps[m] = a.amps[remap(m, r.carrier, a.carrier)] * b.amps[remap(m, r.carrier, b.carrier)];
  return r;
}

std::vector<Mask> project_valuations(const QubitSet& frame, const std::vector<Mask>& v, const QubitSet& s,
                                     Side side) {
  const QubitSet target = side == Side::Inside ? set_intersection(frame, s) : set_minus(frame, s);
  std::vector<Mask> out;
  out.reserve(v.size());
  for (Mask m : v) out.push_back(remap(m, frame, target));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Factorization schmidt_factor(const StateVector& v, const QubitSet& part, double eps_rank) {
  const QubitSet rest = set_minus(v.carrier, part);
  const std::size_t rows = std::size_t{1} << part.size();
  const std::size_t cols = std::size_t{1} << rest.size();
  Eigen::MatrixXcd m(rows, cols);
  for (Mask k = 0; k < v.amps.size(); ++k)
    m(remap(k, v.carrier, part), remap(k, v.carrier, rest)) = v.amps[k];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return {};
  if (sv.size() > 1 && sv(1) / sv(0) >= eps_rank) return {};

  Eigen::VectorXcd left = svd.matrixU().col(0) * sv(0);
  Eigen::VectorXcd right = svd.matrixV().col(0).conjugate();
  // Right factor: first non-negligible amplitude real positive.
  Eigen::Index lead = 0;
  const double cutoff = right.cwiseAbs().maxCoeff() * 1e-9;
  while (std::abs(right(lead)) <= cutoff) ++lead;
  const Complex phase = right(lead) / std::abs(right(lead));
  right /= phase;
  left *= phase;
  left.normalize();

  Factorization f{true, StateVector{part, {}}, StateVector{rest, {}}};
  f.left->amps.assign(left.data(), left.data() + left.size());
  f.right->amps.assign(right.data(), right.data() + right.size());
  return f;
}

bool QuantumStructure::is_union_of_blocks(const QubitSet& g) const {
  QubitSet covered;
  for (const auto& b : partition) {
    const QubitSet common = set_intersection(b, g);
    if (common.empty()) continue;
    if (common.size() != b.size()) return false;
    covered = set_union(covered, b);
  }
  return covered == g;
}

StateVector QuantumStructure::state_of(const QubitSet& r) const {
  if (!is_union_of_blocks(r)) throw Error(show(r) + " is not a union of partition blocks");
  StateVector acc = unit_scalar();
  for (std::size_t i = 0; i < partition.size(); ++i)
    if (is_subset(partition[i], r)) acc = tensor(acc, blocks[i]);
  return acc;
}

Complex QuantumStructure::nu(const QubitSet& g, const QubitSet& a) const {
  require_in_frame(g);
  if (is_union_of_blocks(g)) return state_of(g).amplitude(valuation_of(g, a));
  auto it = nu_overrides.find({g, a});
  return it == nu_overrides.end() ? Complex{} : it->second;
}

void QuantumStructure::require_in_frame(const QubitSet& s) const {
  if (!is_subset(s, frame)) throw OutOfFrame("qubits " + show(set_minus(s, frame)) + " lie outside the frame");
}

std::string_view diagnostic_name(DiagnosticKind k) {
  switch (k) {
    case DiagnosticKind::PartitionViolation: return "PartitionViolation";
    case DiagnosticKind::CarrierMismatch: return "CarrierMismatch";
    case DiagnosticKind::NormViolation: return "NormViolation";
    case DiagnosticKind::NonFactorizableBlockViolation: return "NonFactorizableBlockViolation";
    case DiagnosticKind::AdmissibilityViolation: return "AdmissibilityViolation";
    case DiagnosticKind::EmptyAdmissibleSet: return "EmptyAdmissibleSet";
    case DiagnosticKind::OverrideOnUnionOfBlocks: return "OverrideOnUnionOfBlocks";
  }
  return "?";
}

std::vector<Diagnostic> validate_structure(const QuantumStructure& w, const Tolerances& tol) {
  std::vector<Diagnostic> out;
  auto report = [&](DiagnosticKind k, std::string msg) { out.push_back({k, std::move(msg)}); };

  if (w.frame.size() > kMaxFrame) {
    report(DiagnosticKind::PartitionViolation, "frame too large");
    return out;
  }
  // The partition must cover the frame with disjoint nonempty blocks.
  QubitSet covered;
  bool partition_ok = true;
  for (const auto& b : w.partition) {
    if (b.empty() || !set_intersection(covered, b).empty()) {
      report(DiagnosticKind::PartitionViolation, "block " + show(b) + " is empty or overlaps another block");
      partition_ok = false;
    }
    covered = set_union(covered, b);
  }
  if (covered != w.frame) {
    report(DiagnosticKind::PartitionViolation, "blocks cover " + show(covered) + ", frame is " + show(w.frame));
    partition_ok = false;
  }
  if (w.blocks.size() != w.partition.size()) {
    report(DiagnosticKind::CarrierMismatch, "one state vector is required per partition block");
    return out;
  }
  for (std::size_t i = 0; i < w.blocks.size(); ++i) {
    const auto& s = w.blocks[i];
    if (s.carrier != w.partition[i] || s.amps.size() != (std::size_t{1} << s.carrier.size())) {
      report(DiagnosticKind::CarrierMismatch, "state of block " + show(w.partition[i]) + " has the wrong carrier");
      partition_ok = false;
      continue;
    }
    const double n = s.norm();
    if (std::abs(n - 1.0) > tol.norm)
      report(DiagnosticKind::NormViolation, "state of block " + show(s.carrier) + " has norm " + std::to_string(n));
    // Every bipartition {S, block minus S}, each counted once (S holds the first qubit).
    const QubitSet tail(s.carrier.begin() + (s.carrier.empty() ? 0 : 1), s.carrier.end());
    for (const auto& t : all_subsets(tail)) {
      if (t.size() == tail.size()) continue;
      QubitSet part = set_union({s.carrier.front()}, t);
      if (schmidt_factor(s, part, tol.rank).factorizable) {
        report(DiagnosticKind::NonFactorizableBlockViolation,
               "state of block " + show(s.carrier) + " factorizes along " + show(part));
        break;
      }
    }
  }
  if (w.admissible.empty()) report(DiagnosticKind::EmptyAdmissibleSet, "the admissible set is empty");
  for (Mask v : w.admissible)
    if (v >> w.frame.size() != 0) report(DiagnosticKind::CarrierMismatch, "admissible valuation outside the frame");
  for (const auto& [key, value] : w.nu_overrides) {
    if (!is_subset(key.second, key.first) || !is_subset(key.first, w.frame))
      report(DiagnosticKind::CarrierMismatch, "amplitude default for " + show(key.first) + " is malformed");
    else if (partition_ok && w.is_union_of_blocks(key.first))
      report(DiagnosticKind::OverrideOnUnionOfBlocks,
             "amplitude default given for " + show(key.first) + ", which is a union of blocks");
  }
  if (!partition_ok) return out;

  std::vector<Mask> admissible = w.admissible;
  std::sort(admissible.begin(), admissible.end());
  const StateVector full = w.full_state();
  for (Mask v = 0; v < full.amps.size(); ++v) {
    if (std::binary_search(admissible.begin(), admissible.end(), v)) continue;
    if (std::abs(full.amps[v]) > tol.norm) {
      report(DiagnosticKind::AdmissibilityViolation,
             "valuation " + bitstring(v, w.frame.size()) + " is not admissible but has amplitude of modulus " +
                 std::to_string(std::abs(full.amps[v])));
    }
  }
  return out;
}

double Assignment::real(int k) const {
  auto it = reals.find(k);
  if (it == reals.end()) throw UnboundVariable("real variable x" + std::to_string(k) + " is unassigned");
  return it->second;
}

Complex Assignment::complex(int k) const {
  auto it = complexes.find(k);
  if (it == complexes.end()) throw UnboundVariable("complex variable z" + std::to_string(k) + " is unassigned");
  return it->second;
}

}  // namespace eqpl
