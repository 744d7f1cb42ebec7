#include "holgr/wedderburn.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace holgr {

namespace {

std::string row_key(const ClassFunction& row) {
  std::string k;
  for (const auto& v : row) {
    k += std::to_string(v.conductor());
    for (const auto& c : v.coeffs()) {
      k += ',';
      k += c.get_str();
    }
    k += ';';
  }
  return k;
}

std::vector<long> units_mod(long m) {
  std::vector<long> u;
  for (long k = 1; k <= std::max(1L, m); ++k)
    if (gcd_l(k, m) == 1) u.push_back(k % m);
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

long product_size(const std::vector<long>& a, const std::vector<long>& b, long m) {
  std::set<long> s;
  for (long x : a)
    for (long y : b) s.insert((x * y) % m);
  return static_cast<long>(s.size());
}

std::vector<long> intersect(const std::vector<long>& a, const std::vector<long>& b) {
  std::vector<long> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string ring_name(const PadicBlock& b) {
  const auto& F = b.field;
  std::string o = "Z_" + std::to_string(b.p);
  if (F.f != 1 || F.e_ram != 1) o = "O(f=" + std::to_string(F.f) + ",e=" + std::to_string(F.e_ram) + ")";
  return o;
}

}  // namespace

LocalFieldData local_field_data(long m, long p, const std::vector<long>& stabilizer_in_units) {
  LocalFieldData F;
  F.p = p;
  F.m = m;
  const long a = vp(m, p);
  long pa = 1;
  for (long i = 0; i < a; ++i) pa *= p;
  const long mp = m / pa;
  std::set<long> frob;
  for (long x = 1 % mp, i = 0; i == 0 || x != 1 % mp; x = (x * p) % mp, ++i) frob.insert(x);
  std::vector<long> D, I;
  for (long k : units_mod(m)) {
    if (frob.count(k % mp)) D.push_back(k);
    if (k % mp == 1 % mp) I.push_back(k);
  }
  std::vector<long> S = stabilizer_in_units;
  std::sort(S.begin(), S.end());
  S = intersect(S, D);
  F.decomposition = D;
  F.stabilizer = S;
  const long nD = static_cast<long>(D.size()), nS = static_cast<long>(S.size());
  const long nIS = static_cast<long>(intersect(I, S).size());
  F.e_ram = static_cast<long>(I.size()) / nIS;
  F.f = nD / product_size(I, S, m);
  if (F.f * F.e_ram * nS != nD) throw InternalError("local degree mismatch");
  F.d = different_valuation(F);
  return F;
}

long different_valuation(const LocalFieldData& F) {
  const long m = F.m, p = F.p;
  const long a = vp(m, p);
  if (a == 0) return 0;
  long pa = 1;
  for (long i = 0; i < a; ++i) pa *= p;
  const long mp = m / pa;
  const long nD = static_cast<long>(F.decomposition.size()), nS = static_cast<long>(F.stabilizer.size());
  // Conductor-discriminant: sum over characters of D/S of their conductor exponents, by levels U^j.
  long disc = 0;
  long pj = 1;
  for (long j = 0; j < a; ++j) {
    std::vector<long> U;
    for (long k : F.decomposition)
      if (k % mp == 1 % mp && (j == 0 || k % pj == 1 % pj)) U.push_back(k);
    disc += nD / nS - nD / product_size(U, F.stabilizer, m);
    pj *= p;
  }
  if (disc % F.f != 0) throw InternalError("discriminant exponent not divisible by the residue degree");
  return disc / F.f;
}

ClassFunction galois_conjugate(const ClassFunction& row, long k) {
  ClassFunction out;
  out.reserve(row.size());
  for (const auto& v : row) out.push_back(v.galois(k));
  return out;
}

int find_row(const CharTable& t, const ClassFunction& row) {
  auto key = row_key(row);
  for (std::size_t i = 0; i < t.count(); ++i)
    if (row_key(t.chars[i].values) == key) return static_cast<int>(i);
  return -1;
}

std::vector<PadicBlock> padic_blocks(const CharTable& t, long p) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  const auto& G = *t.group;
  const long e = G.exponent();
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < t.count(); ++i) index[row_key(t.chars[i].values)] = static_cast<int>(i);
  const long a = vp(e, p);
  long pa = 1;
  for (long i = 0; i < a; ++i) pa *= p;
  const long mp = e / pa;
  std::set<long> frob;
  for (long x = 1 % mp, i = 0; i == 0 || x != 1 % mp; x = (x * p) % mp, ++i) frob.insert(x);
  std::vector<long> D;
  for (long k : units_mod(e))
    if (frob.count(k % mp)) D.push_back(k);

  std::vector<int> block_of(t.count(), -1);
  std::vector<PadicBlock> out;
  const long vg = vp(G.order(), p);
  for (std::size_t i = 0; i < t.count(); ++i) {
    if (block_of[i] >= 0) continue;
    PadicBlock b;
    b.id = static_cast<int>(out.size());
    b.p = p;
    b.n = t.chars[i].degree;
    std::vector<long> stab;
    std::set<int> orbit;
    for (long k : D) {
      auto it = index.find(row_key(galois_conjugate(t.chars[i].values, k)));
      if (it == index.end()) throw InternalError("Galois conjugate of a character is missing from the table");
      orbit.insert(it->second);
      if (it->second == static_cast<int>(i)) stab.push_back(k);
    }
    b.orbit.assign(orbit.begin(), orbit.end());
    for (int c : b.orbit) {
      block_of[static_cast<std::size_t>(c)] = b.id;
      if (t.chars[static_cast<std::size_t>(c)].degree != b.n) throw InternalError("degrees differ inside a Galois orbit");
    }
    b.field = local_field_data(e, p, stab);
    if (static_cast<long>(b.orbit.size()) != b.field.local_degree()) throw InternalError("orbit size differs from the local degree");
    b.idempotent_integral = vp(b.n, p) == vg;
    if (b.idempotent_integral) {
      b.schur_index = 1;
      b.matrix_size = b.n;
    }
    out.push_back(b);
  }
  return out;
}

IdempotentCertificate idempotent_integral(const PadicBlock& b, const CharTable& t) {
  const auto& G = *t.group;
  IdempotentCertificate c;
  c.vp_degree = vp(b.n, b.p);
  c.vp_order = vp(G.order(), b.p);
  c.integral = c.vp_degree == c.vp_order;
  c.unramified = b.field.e_ram == 1 && b.field.d == 0;
  c.checked_classes = p_singular_classes(G, b.p);
  c.vanishes_on_p_singular = true;
  for (int chi : b.orbit)
    for (int s : c.checked_classes)
      if (!t.chars[static_cast<std::size_t>(chi)].values[static_cast<std::size_t>(s)].is_zero()) c.vanishes_on_p_singular = false;
  if (c.integral && !c.unramified) throw InternalError("defect zero block with ramified centre");
  if (c.integral && !c.vanishes_on_p_singular) throw InternalError("defect zero character does not vanish on p-singular classes");
  return c;
}

HybridReport is_hybrid(const CharTable& t, const SubgroupHandle& N, long p) {
  const auto& G = *t.group;
  if (!is_normal(G, N)) throw GroupError("subgroup is not normal");
  HybridReport r;
  r.group = G.spec().name();
  r.normal_order = N.order();
  r.p = p;
  const long vg = vp(G.order(), p);
  r.is_hybrid = true;
  for (std::size_t i = 0; i < t.count(); ++i) {
    const auto& c = t.chars[i];
    bool n_in_ker = std::all_of(N.members.begin(), N.members.end(), [&](int x) { return c.kernel.contains(x); });
    if (n_in_ker) continue;
    if (vp(c.degree, p) != vg) {
      r.is_hybrid = false;
      r.witness = HybridWitness{static_cast<int>(i), c.degree, vp(c.degree, p), vg};
      break;
    }
  }
  auto blocks = padic_blocks(t, p);
  for (const auto& b : blocks) {
    const auto& c = t.chars[static_cast<std::size_t>(b.orbit[0])];
    bool n_in_ker = std::all_of(N.members.begin(), N.members.end(), [&](int x) { return c.kernel.contains(x); });
    if (!n_in_ker) r.block_split.push_back(b.id);
  }
  if (r.is_hybrid) {
    if (N.order() % p == 0) throw InternalError("hybrid verdict with p dividing |N|");
    std::string s = "Z_" + std::to_string(p) + "[G/N]";
    for (int id : r.block_split) {
      const auto& b = blocks[static_cast<std::size_t>(id)];
      s += " (+) M_" + std::to_string(b.n) + "x" + std::to_string(b.n) + "(" + ring_name(b) + ")";
    }
    r.quotient_order_desc = s;
  }
  return r;
}

nlohmann::json HybridReport::to_json() const {
  nlohmann::json j;
  j["group"] = group;
  j["normal_order"] = normal_order;
  j["p"] = p;
  j["hybrid"] = is_hybrid;
  j["block_split"] = block_split;
  if (witness)
    j["witness"] = {{"character", witness->character}, {"degree", witness->degree}, {"vp_degree", witness->vp_degree}, {"vp_order", witness->vp_order}};
  else
    j["witness"] = nullptr;
  if (is_hybrid) j["decomposition"] = quotient_order_desc;
  return j;
}

ConductorData central_conductor(const CharTable& t, const std::vector<PadicBlock>& blocks) {
  ConductorData c;
  const long order = t.group->order();
  c.p = blocks.empty() ? 2 : blocks[0].p;
  for (const auto& b : blocks) {
    long ex = b.field.e_ram * vp(order / b.n, b.p) - b.field.d;
    if (ex < 0) throw InternalError("negative conductor exponent");
    if ((ex == 0) != b.idempotent_integral) throw InternalError("conductor exponent disagrees with the defect zero criterion");
    c.entries.push_back({b.id, ex});
  }
  return c;
}

ConductorData central_conductor(const CharTable& t, long p) {
  auto c = central_conductor(t, padic_blocks(t, p));
  c.p = p;
  return c;
}

bool ConductorData::maximal() const {
  return std::all_of(entries.begin(), entries.end(), [](const ConductorEntry& e) { return e.exponent == 0; });
}

nlohmann::json block_json(const PadicBlock& b, const CharTable& t, std::optional<long> conductor_exponent) {
  nlohmann::json j;
  j["block"] = b.id;
  j["orbit"] = b.orbit;
  std::vector<long> degs;
  for (int c : b.orbit) degs.push_back(t.chars[static_cast<std::size_t>(c)].degree);
  j["orbit_degrees"] = degs;
  j["f"] = b.field.f;
  j["e_ram"] = b.field.e_ram;
  j["d"] = b.field.d;
  j["integral_idempotent"] = b.idempotent_integral;
  j["schur_index"] = b.schur_index ? nlohmann::json(*b.schur_index) : nlohmann::json("unknown");
  if (conductor_exponent) j["conductor_exponent"] = *conductor_exponent;
  return j;
}

nlohmann::json ConductorData::to_json(const std::vector<PadicBlock>& blocks) const {
  nlohmann::json j;
  j["p"] = p;
  j["exponent_unit"] = "valuation in the prime of O_i";
  j["maximal"] = maximal();
  j["blocks"] = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json rec;
    rec["block"] = e.block;
    rec["conductor_exponent"] = e.exponent;
    if (static_cast<std::size_t>(e.block) < blocks.size()) {
      const auto& b = blocks[static_cast<std::size_t>(e.block)];
      rec["f"] = b.field.f;
      rec["e_ram"] = b.field.e_ram;
      rec["d"] = b.field.d;
      rec["integral_idempotent"] = b.idempotent_integral;
    }
    j["blocks"].push_back(rec);
  }
  return j;
}

}  // namespace holgr
