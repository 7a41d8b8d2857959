#include "ad/groups.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ad {

Permutation::Permutation(std::vector<int> map) : map_(std::move(map)) {
  const int n = static_cast<int>(map_.size());
  if (n == 0) throw std::invalid_argument("Permutation: empty map");
  std::vector<char> seen(n, 0);
  for (int v : map_) {
    if (v < 0 || v >= n || seen[v]) {
      throw std::invalid_argument("Permutation: map is not a bijection");
    }
    seen[v] = 1;
  }
}

Permutation Permutation::identity(int degree) {
  std::vector<int> m(degree);
  std::iota(m.begin(), m.end(), 0);
  return Permutation(std::move(m));
}

Permutation Permutation::from_cycles(int degree, const std::string& cycles) {
  std::vector<int> m(degree);
  std::iota(m.begin(), m.end(), 0);
  std::size_t pos = 0;
  while (pos < cycles.size()) {
    if (std::isspace(static_cast<unsigned char>(cycles[pos]))) {
      ++pos;
      continue;
    }
    if (cycles[pos] != '(') {
      throw std::invalid_argument("from_cycles: expected '(' in \"" + cycles + "\"");
    }
    const std::size_t close = cycles.find(')', pos);
    if (close == std::string::npos) {
      throw std::invalid_argument("from_cycles: unbalanced parenthesis");
    }
    std::istringstream body(cycles.substr(pos + 1, close - pos - 1));
    std::vector<int> cyc;
    int v = 0;
    while (body >> v) {
      if (v < 0 || v >= degree) {
        throw std::invalid_argument("from_cycles: index out of range");
      }
      cyc.push_back(v);
    }
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      m[cyc[i]] = cyc[(i + 1) % cyc.size()];
    }
    pos = close + 1;
  }
  return Permutation(std::move(m));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (degree() != other.degree()) {
    throw std::invalid_argument("Permutation::compose: degree mismatch");
  }
  std::vector<int> m(map_.size());
  for (std::size_t k = 0; k < map_.size(); ++k) m[k] = map_[other.map_[k]];
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<int> m(map_.size());
  for (std::size_t k = 0; k < map_.size(); ++k) m[map_[k]] = static_cast<int>(k);
  return Permutation(std::move(m));
}

bool Permutation::is_identity() const {
  for (std::size_t k = 0; k < map_.size(); ++k) {
    if (map_[k] != static_cast<int>(k)) return false;
  }
  return true;
}

std::string Permutation::cycle_notation() const {
  const int n = degree();
  std::vector<char> done(n, 0);
  std::string out;
  for (int start = 0; start < n; ++start) {
    if (done[start] || map_[start] == start) {
      done[start] = 1;
      continue;
    }
    out += '(';
    int cur = start;
    bool first = true;
    while (!done[cur]) {
      if (!first) out += ' ';
      out += std::to_string(cur);
      done[cur] = 1;
      cur = map_[cur];
      first = false;
    }
    out += ')';
  }
  if (out.empty()) out = "()";
  return out;
}

bool FiniteGroup::contains(const Permutation& p) const {
  return index_of(p).has_value();
}

std::optional<std::size_t> FiniteGroup::index_of(const Permutation& p) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] == p) return i;
  }
  return std::nullopt;
}

namespace {

Permutation shift_perm(int M) {
  std::vector<int> m(M);
  for (int j = 0; j < M; ++j) m[j] = (j + 1) % M;
  return Permutation(std::move(m));
}

void append_unique(std::vector<Permutation>& list, const Permutation& p) {
  for (const Permutation& q : list) {
    if (q == p) return;
  }
  list.push_back(p);
}

}  // namespace

FiniteGroup cyclic_group(int M) {
  if (M < 1) throw std::invalid_argument("cyclic_group: M >= 1 required");
  FiniteGroup g;
  g.degree = M;
  g.label = "Z" + std::to_string(M);
  Permutation s = shift_perm(M);
  Permutation cur = Permutation::identity(M);
  for (int k = 0; k < M; ++k) {
    g.elements.push_back(cur);
    cur = s.compose(cur);
  }
  if (M > 1) g.generators.push_back(s);
  return g;
}

FiniteGroup dihedral_group(int M) {
  if (M < 1) throw std::invalid_argument("dihedral_group: M >= 1 required");
  FiniteGroup g;
  g.degree = M;
  g.label = "D" + std::to_string(M);
  for (int k = 0; k < M; ++k) {
    std::vector<int> m(M);
    for (int j = 0; j < M; ++j) m[j] = (j + k) % M;
    append_unique(g.elements, Permutation(std::move(m)));
  }
  for (int k = 0; k < M; ++k) {
    std::vector<int> m(M);
    for (int j = 0; j < M; ++j) m[j] = ((k - j) % M + M) % M;
    append_unique(g.elements, Permutation(std::move(m)));
  }
  if (M > 1) {
    g.generators.push_back(shift_perm(M));
    std::vector<int> refl(M);
    for (int j = 0; j < M; ++j) refl[j] = (M - j) % M;
    g.generators.push_back(Permutation(std::move(refl)));
  }
  return g;
}

FiniteGroup product_group(const std::vector<int>& factors) {
  if (factors.empty()) throw std::invalid_argument("product_group: empty factor list");
  long long m = 1;
  for (int f : factors) {
    if (f < 1) throw std::invalid_argument("product_group: factors must be >= 1");
    m *= f;
  }
  const int M = static_cast<int>(m);
  const int k = static_cast<int>(factors.size());

  // Row-major strides of the factor tensor.
  std::vector<int> stride(k, 1);
  for (int a = k - 2; a >= 0; --a) stride[a] = stride[a + 1] * factors[a + 1];

  auto perm_for_shift = [&](const std::vector<int>& s) {
    std::vector<int> map(M);
    for (int idx = 0; idx < M; ++idx) {
      int rem = idx;
      int out = 0;
      for (int a = 0; a < k; ++a) {
        const int ia = rem / stride[a];
        rem %= stride[a];
        out += ((ia + s[a]) % factors[a]) * stride[a];
      }
      map[idx] = out;
    }
    return Permutation(std::move(map));
  };

  FiniteGroup g;
  g.degree = M;
  std::string label;
  for (int a = 0; a < k; ++a) {
    if (a) label += "x";
    label += "Z" + std::to_string(factors[a]);
  }
  g.label = label;

  std::vector<int> s(k, 0);
  for (int idx = 0; idx < M; ++idx) {
    int rem = idx;
    for (int a = 0; a < k; ++a) {
      s[a] = rem / stride[a];
      rem %= stride[a];
    }
    g.elements.push_back(perm_for_shift(s));
  }
  for (int a = 0; a < k; ++a) {
    if (factors[a] == 1) continue;
    std::vector<int> unit(k, 0);
    unit[a] = 1;
    g.generators.push_back(perm_for_shift(unit));
  }
  return g;
}

FiniteGroup elementary2_group(int M) {
  int k = 0;
  int m = M;
  while (m > 1 && m % 2 == 0) {
    m /= 2;
    ++k;
  }
  if (m != 1 || M < 2) {
    throw std::invalid_argument("elementary2_group: M must be a power of two >= 2");
  }
  FiniteGroup g = product_group(std::vector<int>(k, 2));
  g.label = "E2^" + std::to_string(k);
  return g;
}

FiniteGroup trivial_group(int M) {
  FiniteGroup g;
  g.degree = M;
  g.label = "trivial";
  g.elements.push_back(Permutation::identity(M));
  return g;
}

FiniteGroup make_group(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupSpec::Kind::cyclic:
      return cyclic_group(spec.M);
    case GroupSpec::Kind::dihedral:
      return dihedral_group(spec.M);
    case GroupSpec::Kind::product: {
      long long m = 1;
      for (int f : spec.factors) m *= f;
      if (m != spec.M) {
        throw std::invalid_argument("make_group: product factors do not multiply to M");
      }
      return product_group(spec.factors);
    }
    case GroupSpec::Kind::elementary2:
      return elementary2_group(spec.M);
    case GroupSpec::Kind::trivial:
      return trivial_group(spec.M);
  }
  throw std::invalid_argument("make_group: unknown kind");
}

FiniteGroup group_from_generators(int degree, const std::vector<Permutation>& gens,
                                  std::size_t cap, const std::string& label) {
  for (const Permutation& g : gens) {
    if (g.degree() != degree) {
      throw std::invalid_argument("group_from_generators: generator degree mismatch");
    }
  }
  FiniteGroup out;
  out.degree = degree;
  out.label = label;
  out.generators = gens;

  std::set<std::vector<int>> seen;
  std::vector<Permutation> order;
  const Permutation e = Permutation::identity(degree);
  order.push_back(e);
  seen.insert(e.map());
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Permutation cur = order[head];
    for (const Permutation& g : gens) {
      const Permutation next = cur.compose(g);
      if (seen.insert(next.map()).second) {
        order.push_back(next);
        if (order.size() > cap) {
          throw std::runtime_error("group order cap exceeded (partial count " +
                                   std::to_string(order.size()) + ")");
        }
      }
    }
  }
  out.elements = std::move(order);
  return out;
}

namespace {

std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  // Descending-part partitions via recursion.
  auto rec = [&](auto&& self, int rem, int maxpart) -> void {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(rem, maxpart); p >= 1; --p) {
      cur.push_back(p);
      self(self, rem - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

std::map<int, int> prime_factorization(int m) {
  std::map<int, int> out;
  for (int p = 2; p * p <= m; ++p) {
    while (m % p == 0) {
      ++out[p];
      m /= p;
    }
  }
  if (m > 1) ++out[m];
  return out;
}

}  // namespace

std::vector<FiniteGroup> enumerate_abelian_groups(int M) {
  if (M < 2) throw std::invalid_argument("enumerate_abelian_groups: M >= 2 required");
  const std::map<int, int> fact = prime_factorization(M);

  // Per-prime partition choices; each choice contributes factors p^part.
  std::vector<std::vector<std::vector<int>>> per_prime;  // [prime][choice] -> factor list
  for (const auto& [p, e] : fact) {
    std::vector<std::vector<int>> choices;
    for (const std::vector<int>& part : partitions(e)) {
      std::vector<int> factors;
      for (int lambda : part) {
        int f = 1;
        for (int i = 0; i < lambda; ++i) f *= p;
        factors.push_back(f);
      }
      choices.push_back(factors);
    }
    per_prime.push_back(choices);
  }

  std::vector<std::vector<int>> classes;  // sorted-descending factor lists
  std::vector<int> pick(per_prime.size(), 0);
  while (true) {
    std::vector<int> factors;
    for (std::size_t i = 0; i < per_prime.size(); ++i) {
      const auto& ch = per_prime[i][pick[i]];
      factors.insert(factors.end(), ch.begin(), ch.end());
    }
    std::sort(factors.begin(), factors.end(), std::greater<int>());
    classes.push_back(factors);
    std::size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < static_cast<int>(per_prime[i].size())) break;
      pick[i] = 0;
    }
    if (i == pick.size()) break;
  }

  std::sort(classes.begin(), classes.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) { return a > b; });

  std::vector<FiniteGroup> out;
  out.reserve(classes.size());
  for (const std::vector<int>& factors : classes) {
    out.push_back(product_group(factors));
  }
  return out;
}

bool is_subgroup(const FiniteGroup& h, const FiniteGroup& g) {
  if (h.degree != g.degree) throw std::invalid_argument("is_subgroup: degree mismatch");
  std::set<std::vector<int>> gset;
  for (const Permutation& p : g.elements) gset.insert(p.map());
  for (const Permutation& p : h.elements) {
    if (!gset.count(p.map())) return false;
  }
  return true;
}

AbelianizationResult abelianization(const FiniteGroup& g, std::size_t cap) {
  if (g.size() > cap) throw std::runtime_error("abelianization: group order cap exceeded");
  std::vector<Permutation> comm_gens;
  for (const Permutation& a : g.elements) {
    for (const Permutation& b : g.elements) {
      const Permutation c =
          a.compose(b).compose(a.inverse()).compose(b.inverse());
      if (!c.is_identity()) append_unique(comm_gens, c);
    }
  }
  AbelianizationResult out;
  out.commutator = group_from_generators(g.degree, comm_gens, cap, "commutator");
  out.quotient_order = g.size() / out.commutator.size();

  std::set<std::vector<int>> comm_set;
  for (const Permutation& p : out.commutator.elements) comm_set.insert(p.map());
  for (const Permutation& x : g.elements) {
    bool fresh = true;
    for (const Permutation& rep : out.coset_reps) {
      if (comm_set.count(rep.inverse().compose(x).map())) {
        fresh = false;
        break;
      }
    }
    if (fresh) out.coset_reps.push_back(x);
  }
  return out;
}

Representation::Representation(FiniteGroup group)
    : group_(std::move(group)), kind_(Kind::permutation) {}

Representation::Representation(FiniteGroup group, std::vector<cplx> conjugator_diag)
    : group_(std::move(group)), kind_(Kind::conjugated),
      diag_(std::move(conjugator_diag)) {
  if (static_cast<int>(diag_.size()) != group_.degree) {
    throw std::invalid_argument("Representation: conjugator length mismatch");
  }
  for (const cplx& d : diag_) {
    if (std::abs(std::abs(d) - 1.0) > 1e-10) {
      throw std::invalid_argument("Representation: conjugator must be unit-modulus");
    }
  }
}

std::vector<cplx> Representation::apply(std::size_t g, const std::vector<cplx>& x) const {
  if (static_cast<int>(x.size()) != group_.degree) {
    throw std::invalid_argument("Representation::apply: dimension mismatch");
  }
  const Permutation& sigma = group_.elements.at(g);
  std::vector<cplx> y(x.size());
  if (kind_ == Kind::permutation) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      y[sigma(static_cast<int>(k))] = x[k];
    }
  } else {
    // pi_g = D P_g D^H.
    for (std::size_t k = 0; k < x.size(); ++k) {
      const int j = sigma(static_cast<int>(k));
      y[j] = diag_[j] * std::conj(diag_[k]) * x[k];
    }
  }
  return y;
}

ComplexMatrix Representation::matrix(std::size_t g) const {
  const Permutation& sigma = group_.elements.at(g);
  const int n = group_.degree;
  ComplexMatrix m(n, n);
  for (int k = 0; k < n; ++k) {
    const int j = sigma(k);
    m(j, k) = (kind_ == Kind::permutation)
                  ? cplx(1.0, 0.0)
                  : diag_[j] * std::conj(diag_[k]);
  }
  return m;
}

std::vector<std::vector<cplx>> orbit(const Representation& rep,
                                     const std::vector<cplx>& x) {
  std::vector<std::vector<cplx>> out;
  out.reserve(rep.size());
  for (std::size_t g = 0; g < rep.size(); ++g) out.push_back(rep.apply(g, x));
  return out;
}

std::size_t effective_group_order(const Representation& rep, OrbitStatistic stat,
                                  const std::vector<cplx>& x, double tol) {
  const std::size_t n = rep.size();
  std::vector<std::vector<cplx>> rows;
  rows.reserve(n);
  for (std::size_t g = 0; g < n; ++g) {
    const std::vector<cplx> v = rep.apply(g, x);
    std::vector<cplx> row;
    switch (stat) {
      case OrbitStatistic::outer_product:
        row.reserve(v.size() * v.size());
        for (const cplx& vi : v) {
          for (const cplx& vj : v) row.push_back(vi * std::conj(vj));
        }
        break;
      case OrbitStatistic::component0:
        row.push_back(v[0]);
        break;
      case OrbitStatistic::squared_norm: {
        double s = 0.0;
        for (const cplx& vi : v) s += std::norm(vi);
        row.push_back(s);
        break;
      }
    }
    rows.push_back(std::move(row));
  }

  // Numeric rank via modified Gram-Schmidt with reorthogonalization.
  double max_norm = 0.0;
  for (const auto& r : rows) {
    double s = 0.0;
    for (const cplx& z : r) s += std::norm(z);
    max_norm = std::max(max_norm, std::sqrt(s));
  }
  if (max_norm == 0.0) return 0;

  std::vector<std::vector<cplx>> q;
  for (auto& r : rows) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qi : q) {
        cplx dot = 0.0;
        for (std::size_t t = 0; t < r.size(); ++t) dot += std::conj(qi[t]) * r[t];
        for (std::size_t t = 0; t < r.size(); ++t) r[t] -= dot * qi[t];
      }
    }
    double s = 0.0;
    for (const cplx& z : r) s += std::norm(z);
    const double nr = std::sqrt(s);
    if (nr > tol * max_norm) {
      for (cplx& z : r) z /= nr;
      q.push_back(r);
    }
  }
  return q.size();
}

FiniteGroup parse_group_spec(const std::string& spec, int degree_hint) {
  if (spec == "trivial") {
    if (degree_hint < 1) {
      throw std::invalid_argument("parse_group_spec: trivial requires a degree");
    }
    return trivial_group(degree_hint);
  }
  if (spec.rfind("gen:", 0) == 0) {
    const std::string cycles = spec.substr(4);
    int degree = degree_hint;
    if (degree < 1) {
      // Infer degree from the largest index mentioned.
      int maxidx = -1;
      std::string digits;
      for (char c : cycles + " ") {
        if (std::isdigit(static_cast<unsigned char>(c))) {
          digits += c;
        } else if (!digits.empty()) {
          maxidx = std::max(maxidx, std::stoi(digits));
          digits.clear();
        }
      }
      if (maxidx < 0) throw std::invalid_argument("parse_group_spec: empty gen spec");
      degree = maxidx + 1;
    }
    return group_from_generators(degree, {Permutation::from_cycles(degree, cycles)});
  }
  if (spec.rfind("E2^", 0) == 0) {
    const int k = std::stoi(spec.substr(3));
    return elementary2_group(1 << k);
  }
  if (!spec.empty() && spec[0] == 'D') {
    return dihedral_group(std::stoi(spec.substr(1)));
  }
  if (!spec.empty() && spec[0] == 'Z') {
    std::vector<int> factors;
    std::size_t pos = 0;
    while (pos < spec.size()) {
      if (spec[pos] != 'Z') {
        throw std::invalid_argument("parse_group_spec: bad product spec " + spec);
      }
      std::size_t end = spec.find('x', pos);
      if (end == std::string::npos) end = spec.size();
      factors.push_back(std::stoi(spec.substr(pos + 1, end - pos - 1)));
      pos = (end == spec.size()) ? end : end + 1;
    }
    if (factors.size() == 1) return cyclic_group(factors[0]);
    return product_group(factors);
  }
  throw std::invalid_argument("parse_group_spec: unrecognized spec " + spec);
}

}  // namespace ad
