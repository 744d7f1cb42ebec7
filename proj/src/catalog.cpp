#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "holgr/cyclo.hpp"
#include "holgr/group.hpp"

namespace holgr {

FiniteField::FiniteField(long q) : q_(q) {
  auto pp = prime_power(q);
  if (!pp) throw GroupError("q = " + std::to_string(q) + " is not a prime power");
  p_ = pp->first;
  k_ = pp->second;
  // Smallest monic irreducible of degree k, found by trial division over F_p.
  auto poly_of = [&](long code, long deg) {
    std::vector<long> c(static_cast<std::size_t>(deg + 1), 0);
    for (long i = 0; i < deg; ++i) {
      c[static_cast<std::size_t>(i)] = code % p_;
      code /= p_;
    }
    c[static_cast<std::size_t>(deg)] = 1;
    return c;
  };
  auto divides = [&](const std::vector<long>& d, std::vector<long> f) {
    long dd = static_cast<long>(d.size()) - 1;
    for (long k = static_cast<long>(f.size()) - 1; k >= dd; --k) {
      long c = f[static_cast<std::size_t>(k)];
      if (c == 0) continue;
      for (long i = 0; i <= dd; ++i)
        f[static_cast<std::size_t>(k - dd + i)] = mod_l(f[static_cast<std::size_t>(k - dd + i)] - c * d[static_cast<std::size_t>(i)], p_);
    }
    for (long i = 0; i < dd; ++i)
      if (f[static_cast<std::size_t>(i)] != 0) return false;
    return true;
  };
  long count = 1;
  for (long i = 0; i < k_; ++i) count *= p_;
  for (long code = 0; code < count; ++code) {
    auto f = poly_of(code, k_);
    bool irreducible = true;
    for (long deg = 1; deg <= k_ / 2 && irreducible; ++deg) {
      long cnt = 1;
      for (long i = 0; i < deg; ++i) cnt *= p_;
      for (long dc = 0; dc < cnt && irreducible; ++dc)
        if (divides(poly_of(dc, deg), f)) irreducible = false;
    }
    if (irreducible) {
      modulus_ = f;
      break;
    }
  }
  mul_table_.assign(static_cast<std::size_t>(q_ * q_), 0);
  for (long a = 0; a < q_; ++a)
    for (long b = 0; b < q_; ++b) {
      std::vector<long> pa(static_cast<std::size_t>(k_)), pb(static_cast<std::size_t>(k_));
      long x = a, y = b;
      for (long i = 0; i < k_; ++i) {
        pa[static_cast<std::size_t>(i)] = x % p_;
        x /= p_;
        pb[static_cast<std::size_t>(i)] = y % p_;
        y /= p_;
      }
      std::vector<long> prod(static_cast<std::size_t>(2 * k_), 0);
      for (long i = 0; i < k_; ++i)
        for (long j = 0; j < k_; ++j) prod[static_cast<std::size_t>(i + j)] += pa[static_cast<std::size_t>(i)] * pb[static_cast<std::size_t>(j)];
      for (long t = 2 * k_ - 1; t >= k_; --t) {
        long c = mod_l(prod[static_cast<std::size_t>(t)], p_);
        prod[static_cast<std::size_t>(t)] = 0;
        for (long i = 0; i < k_; ++i) prod[static_cast<std::size_t>(t - k_ + i)] -= c * modulus_[static_cast<std::size_t>(i)];
      }
      long code = 0;
      for (long i = k_ - 1; i >= 0; --i) code = code * p_ + mod_l(prod[static_cast<std::size_t>(i)], p_);
      mul_table_[static_cast<std::size_t>(a * q_ + b)] = code;
    }
  for (long g = 1; g < q_; ++g) {
    long x = g, ord = 1;
    while (x != 1) {
      x = mul(x, g);
      ++ord;
    }
    if (ord == q_ - 1) {
      prim_ = g;
      break;
    }
  }
}

long FiniteField::add(long a, long b) const {
  long r = 0, scale = 1;
  for (long i = 0; i < k_; ++i) {
    r += mod_l(a % p_ + b % p_, p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return r;
}

long FiniteField::neg(long a) const {
  long r = 0, scale = 1;
  for (long i = 0; i < k_; ++i) {
    r += mod_l(-(a % p_), p_) * scale;
    a /= p_;
    scale *= p_;
  }
  return r;
}

long FiniteField::mul(long a, long b) const { return mul_table_[static_cast<std::size_t>(a * q_ + b)]; }

namespace {

Perm perm_from(const std::vector<long>& img) {
  Perm p(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) p[i] = static_cast<std::uint16_t>(img[i]);
  return p;
}

std::vector<Perm> regular_dihedral(long n) {
  // Elements (k, e) coded k + n*e acting by right multiplication, r = (1,0), s = (0,1).
  long N = 2 * n;
  std::vector<long> r(static_cast<std::size_t>(N)), s(static_cast<std::size_t>(N));
  for (long k = 0; k < n; ++k)
    for (long e = 0; e < 2; ++e) {
      long x = k + n * e;
      r[static_cast<std::size_t>(x)] = (e == 0 ? mod_l(k + 1, n) : mod_l(k - 1, n)) + n * e;
      s[static_cast<std::size_t>(x)] = k + n * (1 - e);
    }
  return {perm_from(r), perm_from(s)};
}

std::vector<Perm> catalog_generators(const GroupSpec& spec, long bound, std::string* tag) {
  const auto& f = spec.family;
  *tag = f;
  if (f == "cyclic") {
    if (spec.n < 1) throw GroupError("cyclic order must be positive");
    if (spec.n > bound) throw GroupError("group order exceeds the configured bound of " + std::to_string(bound));
    std::vector<long> img(static_cast<std::size_t>(spec.n));
    for (long i = 0; i < spec.n; ++i) img[static_cast<std::size_t>(i)] = (i + 1) % spec.n;
    return {perm_from(img)};
  }
  if (f == "dihedral") {
    long n = spec.n;
    if (n < 1) throw GroupError("dihedral parameter must be positive");
    if (2 * n > bound) throw GroupError("group order exceeds the configured bound of " + std::to_string(bound));
    if (n < 3) return regular_dihedral(n);
    std::vector<long> r(static_cast<std::size_t>(n)), s(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
      r[static_cast<std::size_t>(i)] = (i + 1) % n;
      s[static_cast<std::size_t>(i)] = mod_l(-i, n);
    }
    return {perm_from(r), perm_from(s)};
  }
  if (f == "symmetric" || f == "alternating") {
    long n = spec.n;
    if (n < 1 || n > 6) throw GroupError(f + " groups are supported for degree 1..6");
    if (n <= 2 && f == "alternating") return {perm_from({0})};
    if (n == 1) return {perm_from({0})};
    std::vector<Perm> gens;
    if (f == "symmetric") {
      std::vector<long> t(static_cast<std::size_t>(n)), c(static_cast<std::size_t>(n));
      std::iota(t.begin(), t.end(), 0);
      std::swap(t[0], t[1]);
      for (long i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = (i + 1) % n;
      gens = {perm_from(t), perm_from(c)};
    } else {
      for (long k = 2; k < n; ++k) {
        std::vector<long> c(static_cast<std::size_t>(n));
        std::iota(c.begin(), c.end(), 0);
        c[0] = 1;
        c[1] = k;
        c[static_cast<std::size_t>(k)] = 0;
        gens.push_back(perm_from(c));
      }
    }
    return gens;
  }
  if (f == "quaternion") {
    // Regular action of Q8 = {+-1, +-i, +-j, +-k}; code unit u in {1,i,j,k} with sign bit.
    static const int tab[4][4][2] = {
        {{0, 0}, {1, 0}, {2, 0}, {3, 0}},
        {{1, 0}, {0, 1}, {3, 0}, {2, 1}},
        {{2, 0}, {3, 1}, {0, 1}, {1, 0}},
        {{3, 0}, {2, 0}, {1, 1}, {0, 1}},
    };
    auto right_mul = [&](int by) {
      std::vector<long> img(8);
      for (int x = 0; x < 8; ++x) {
        int u = x % 4, sg = x / 4;
        int w = tab[u][by][0], s2 = tab[u][by][1];
        img[static_cast<std::size_t>(x)] = w + 4 * ((sg + s2) % 2);
      }
      return perm_from(img);
    };
    return {right_mul(1), right_mul(2)};
  }
  if (f == "affine") {
    FiniteField F(spec.q);
    long q = spec.q;
    if (q * (q - 1) > bound) throw GroupError("group order exceeds the configured bound of " + std::to_string(bound));
    *tag = "affine(" + std::to_string(q) + ")";
    std::vector<Perm> gens;
    long basis = 1;
    for (long b = 1; b < q; b *= F.characteristic()) {
      std::vector<long> t(static_cast<std::size_t>(q));
      for (long x = 0; x < q; ++x) t[static_cast<std::size_t>(x)] = F.add(x, b);
      gens.push_back(perm_from(t));
      basis = b;
    }
    (void)basis;
    if (q > 2) {
      std::vector<long> m(static_cast<std::size_t>(q));
      for (long x = 0; x < q; ++x) m[static_cast<std::size_t>(x)] = F.mul(F.primitive_element(), x);
      gens.push_back(perm_from(m));
    }
    return gens;
  }
  if (f == "inversion") {
    long A = 1;
    for (long a : spec.abelian) {
      if (a < 1 || a % 2 == 0) throw GroupError("inversion groups need odd cyclic factors");
      A *= a;
    }
    if (2 * A > bound) throw GroupError("group order exceeds the configured bound of " + std::to_string(bound));
    if (A == 1) return {perm_from({1, 0})};
    auto digits = [&](long x) {
      std::vector<long> d;
      for (long a : spec.abelian) {
        d.push_back(x % a);
        x /= a;
      }
      return d;
    };
    auto code = [&](const std::vector<long>& d) {
      long x = 0;
      for (long i = static_cast<long>(spec.abelian.size()) - 1; i >= 0; --i)
        x = x * spec.abelian[static_cast<std::size_t>(i)] + d[static_cast<std::size_t>(i)];
      return x;
    };
    std::vector<Perm> gens;
    for (std::size_t i = 0; i < spec.abelian.size(); ++i) {
      std::vector<long> t(static_cast<std::size_t>(A));
      for (long x = 0; x < A; ++x) {
        auto d = digits(x);
        d[i] = (d[i] + 1) % spec.abelian[i];
        t[static_cast<std::size_t>(x)] = code(d);
      }
      gens.push_back(perm_from(t));
    }
    std::vector<long> inv(static_cast<std::size_t>(A));
    for (long x = 0; x < A; ++x) {
      auto d = digits(x);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = mod_l(-d[i], spec.abelian[i]);
      inv[static_cast<std::size_t>(x)] = code(d);
    }
    gens.push_back(perm_from(inv));
    return gens;
  }
  if (f == "metacyclic") {
    long l = spec.ell, p = spec.p;
    if (!is_prime(l) || !is_prime(p) || (l - 1) % p != 0)
      throw GroupError("metacyclic C_l : C_p needs primes with p | l - 1");
    if (l * p > bound) throw GroupError("group order exceeds the configured bound of " + std::to_string(bound));
    long a = 1;
    for (long g = 2; g < l; ++g)
      if (pow_mod(g, p, l) == 1) {
        a = g;
        break;
      }
    std::vector<long> t(static_cast<std::size_t>(l)), m(static_cast<std::size_t>(l));
    for (long x = 0; x < l; ++x) {
      t[static_cast<std::size_t>(x)] = (x + 1) % l;
      m[static_cast<std::size_t>(x)] = (a * x) % l;
    }
    return {perm_from(t), perm_from(m)};
  }
  if (f == "frob72") {
    // Affine maps v -> A v + b on F_3^2 with A in a quaternion subgroup of SL(2,3).
    auto lin = [](int a, int b, int c, int d) {
      std::vector<long> img(9);
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) img[static_cast<std::size_t>(x + 3 * y)] = (a * x + b * y) % 3 + 3 * ((c * x + d * y) % 3);
      return perm_from(img);
    };
    std::vector<long> tx(9), ty(9);
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) {
        tx[static_cast<std::size_t>(x + 3 * y)] = (x + 1) % 3 + 3 * y;
        ty[static_cast<std::size_t>(x + 3 * y)] = x + 3 * ((y + 1) % 3);
      }
    return {perm_from(tx), perm_from(ty), lin(0, 2, 1, 0), lin(1, 1, 1, 2)};
  }
  if (f == "product") {
    if (spec.factors.empty()) throw GroupError("product needs factors");
    std::vector<std::vector<Perm>> parts;
    long total_order = 1;
    int total_degree = 0;
    for (const auto& fs : spec.factors) {
      auto g = build_group(fs, bound);
      total_order *= g->order();
      if (total_order > bound) throw GroupError("group order exceeds the configured bound of " + std::to_string(bound));
      std::vector<Perm> gp;
      for (int id : g->generators()) gp.push_back(g->perm(id));
      parts.push_back(gp);
      total_degree += g->degree();
    }
    std::vector<Perm> gens;
    int offset = 0;
    for (const auto& gp : parts) {
      int deg = static_cast<int>(gp[0].size());
      for (const auto& g : gp) {
        Perm p(static_cast<std::size_t>(total_degree));
        std::iota(p.begin(), p.end(), 0);
        for (int i = 0; i < deg; ++i) p[static_cast<std::size_t>(offset + i)] = static_cast<std::uint16_t>(offset + g[static_cast<std::size_t>(i)]);
        gens.push_back(p);
      }
      offset += deg;
    }
    return gens;
  }
  if (f == "generators") {
    if (spec.generators.empty()) throw GroupError("malformed generators: empty list");
    return spec.generators;
  }
  throw GroupError("unknown group family: " + f);
}

long parse_long(const std::string& s, std::size_t& pos) {
  std::size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == start) throw GroupError("malformed group descriptor: " + s);
  return std::stol(s.substr(start, pos - start));
}

GroupSpec parse_atom(const std::string& s) {
  GroupSpec g;
  std::size_t pos = 0;
  auto rest_number = [&](std::size_t from) {
    pos = from;
    long v = parse_long(s, pos);
    if (pos != s.size()) throw GroupError("malformed group descriptor: " + s);
    return v;
  };
  if (s.rfind("Aff", 0) == 0) {
    g.family = "affine";
    std::size_t p0 = 3;
    bool paren = p0 < s.size() && s[p0] == '(';
    pos = paren ? p0 + 1 : p0;
    g.q = parse_long(s, pos);
    if (paren) {
      if (pos >= s.size() || s[pos] != ')') throw GroupError("malformed group descriptor: " + s);
      ++pos;
    }
    if (pos != s.size()) throw GroupError("malformed group descriptor: " + s);
    return g;
  }
  if (s == "Frob72") {
    g.family = "frob72";
    return g;
  }
  if (s == "Q8") {
    g.family = "quaternion";
    return g;
  }
  if (s == "V4") {
    g.family = "product";
    g.factors = {parse_atom("C2"), parse_atom("C2")};
    return g;
  }
  if (s.rfind("Inv(", 0) == 0) {
    g.family = "inversion";
    pos = 4;
    while (true) {
      g.abelian.push_back(parse_long(s, pos));
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        continue;
      }
      break;
    }
    if (pos + 1 != s.size() || s[pos] != ')') throw GroupError("malformed group descriptor: " + s);
    return g;
  }
  auto colon = s.find(':');
  if (colon != std::string::npos) {
    auto a = parse_atom(s.substr(0, colon)), b = parse_atom(s.substr(colon + 1));
    if (a.family != "cyclic" || b.family != "cyclic") throw GroupError("metacyclic descriptor must be C<l>:C<p>");
    g.family = "metacyclic";
    g.ell = a.n;
    g.p = b.n;
    return g;
  }
  if (s.empty()) throw GroupError("empty group descriptor");
  switch (s[0]) {
    case 'C':
      g.family = "cyclic";
      g.n = rest_number(1);
      return g;
    case 'D': {
      long ord = rest_number(1);
      if (ord % 2 != 0 || ord < 2) throw GroupError("dihedral descriptor D<2n> needs an even order");
      g.family = "dihedral";
      g.n = ord / 2;
      return g;
    }
    case 'S':
      g.family = "symmetric";
      g.n = rest_number(1);
      return g;
    case 'A':
      g.family = "alternating";
      g.n = rest_number(1);
      return g;
    default:
      throw GroupError("malformed group descriptor: " + s);
  }
}

}  // namespace

GroupSpec GroupSpec::parse(const std::string& descriptor) {
  std::string s;
  for (char c : descriptor)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == 'x' || c == '*') && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() == 1) return parse_atom(parts[0]);
  GroupSpec g;
  g.family = "product";
  for (const auto& p : parts) g.factors.push_back(parse_atom(p));
  return g;
}

std::string GroupSpec::name() const {
  if (family == "cyclic") return "C" + std::to_string(n);
  if (family == "dihedral") return "D" + std::to_string(2 * n);
  if (family == "symmetric") return "S" + std::to_string(n);
  if (family == "alternating") return "A" + std::to_string(n);
  if (family == "quaternion") return "Q8";
  if (family == "affine") return "Aff(" + std::to_string(q) + ")";
  if (family == "frob72") return "Frob72";
  if (family == "metacyclic") return "C" + std::to_string(ell) + ":C" + std::to_string(p);
  if (family == "inversion") {
    std::string s = "Inv(";
    for (std::size_t i = 0; i < abelian.size(); ++i) s += (i ? "," : "") + std::to_string(abelian[i]);
    return s + ")";
  }
  if (family == "product") {
    std::string s;
    for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? "x" : "") + factors[i].name();
    return s;
  }
  return "Perm(" + std::to_string(generators.size()) + " generators)";
}

nlohmann::json GroupSpec::to_json() const {
  nlohmann::json j;
  if (family == "generators") {
    j["generators"] = nlohmann::json::array();
    for (const auto& g : generators) j["generators"].push_back(std::vector<int>(g.begin(), g.end()));
    return j;
  }
  j["family"] = family;
  if (family == "cyclic" || family == "dihedral" || family == "symmetric" || family == "alternating") j["n"] = n;
  if (family == "affine") j["q"] = q;
  if (family == "metacyclic") {
    j["ell"] = ell;
    j["p"] = p;
  }
  if (family == "inversion") j["abelian"] = abelian;
  if (family == "product") {
    j["factors"] = nlohmann::json::array();
    for (const auto& f : factors) j["factors"].push_back(f.to_json());
  }
  return j;
}

GroupSpec GroupSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw GroupError("group spec must be a JSON object");
  GroupSpec g;
  if (j.contains("generators")) {
    g.family = "generators";
    const auto& gens = j.at("generators");
    if (!gens.is_array() || gens.empty()) throw GroupError("malformed generators: expected a nonempty array");
    for (const auto& row : gens) {
      if (!row.is_array() || row.empty()) throw GroupError("malformed generators: each generator is an array of images");
      Perm p;
      for (const auto& v : row) {
        if (!v.is_number_integer() || v.get<long>() < 0 || v.get<long>() > 65535)
          throw GroupError("malformed generators: images must be small nonnegative integers");
        p.push_back(static_cast<std::uint16_t>(v.get<long>()));
      }
      g.generators.push_back(p);
    }
    return g;
  }
  if (!j.contains("family") || !j.at("family").is_string()) throw GroupError("group spec needs a family or generators");
  g.family = j.at("family").get<std::string>();
  auto num = [&](const char* key) -> long {
    if (!j.contains(key) || !j.at(key).is_number_integer()) throw GroupError(std::string("group spec needs integer field ") + key);
    return j.at(key).get<long>();
  };
  if (g.family == "cyclic" || g.family == "dihedral" || g.family == "symmetric" || g.family == "alternating") g.n = num("n");
  else if (g.family == "affine") g.q = num("q");
  else if (g.family == "metacyclic") {
    g.ell = num("ell");
    g.p = num("p");
  } else if (g.family == "inversion") g.abelian = j.at("abelian").get<std::vector<long>>();
  else if (g.family == "product") {
    for (const auto& f : j.at("factors")) g.factors.push_back(from_json(f));
  } else if (g.family != "quaternion" && g.family != "frob72") {
    throw GroupError("unknown group family: " + g.family);
  }
  return g;
}

GroupPtr build_group(const GroupSpec& spec, long bound) {
  std::string tag;
  auto gens = catalog_generators(spec, bound, &tag);
  return std::make_shared<FiniteGroup>(std::move(gens), bound, tag, spec);
}

GroupPtr build_group(const std::string& descriptor, long bound) { return build_group(GroupSpec::parse(descriptor), bound); }

}  // namespace holgr
