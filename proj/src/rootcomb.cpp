#include "logahoric/rootcomb.hpp"

#include "logahoric/linalg.hpp"
#include "logahoric/types.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace logahoric::rootcomb {

bool valid_rank(char t, int r) {
  switch (t) {
    case 'A': return r >= 1;
    case 'B': return r >= 2;
    case 'C': return r >= 2;
    case 'D': return r >= 4;
    case 'E': return r >= 6 && r <= 8;
    case 'F': return r == 4;
    case 'G': return r == 2;
    default: return false;
  }
}

IMat canonical_cartan(char t, int r) {
  if (!valid_rank(t, r))
    throw precondition_error(std::string("invalid rank ") + std::to_string(r) + " for type " + t);
  IMat a = IMat::Zero(r, r);
  for (int i = 0; i < r; ++i) a(i, i) = 2;
  auto link = [&](int i, int j) { a(i, j) = a(j, i) = -1; };
  switch (t) {
    case 'A':
      for (int i = 0; i + 1 < r; ++i) link(i, i + 1);
      break;
    case 'B':
      for (int i = 0; i + 1 < r; ++i) link(i, i + 1);
      a(r - 1, r - 2) = -2;  // alpha_r short
      break;
    case 'C':
      for (int i = 0; i + 1 < r; ++i) link(i, i + 1);
      a(r - 2, r - 1) = -2;  // alpha_r long
      break;
    case 'D':
      for (int i = 0; i + 2 < r; ++i) link(i, i + 1);
      link(r - 3, r - 1);
      break;
    case 'E':
      link(0, 2);
      link(1, 3);
      for (int i = 2; i + 1 < r; ++i) link(i, i + 1);
      break;
    case 'F':
      link(0, 1);
      link(1, 2);
      link(2, 3);
      a(2, 1) = -2;
      break;
    case 'G':
      a(0, 1) = -3;
      a(1, 0) = -1;
      break;
  }
  return a;
}

namespace {

// Squared root lengths d_i with d_i a_ij = d_j a_ji, normalized so the
// shortest is 1; empty if not symmetrizable.
std::vector<Rational> symmetrizer(const IMat& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<Rational> d(n, Rational(0));
  for (int s = 0; s < n; ++s) {
    if (d[s] != 0) continue;
    d[s] = 1;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        if (i == j || (a(i, j) == 0 && a(j, i) == 0)) continue;
        if (a(i, j) == 0 || a(j, i) == 0) return {};
        Rational dj = d[i] * Rational(a(i, j)) / Rational(a(j, i));
        if (d[j] == 0) {
          d[j] = dj;
          stack.push_back(j);
        } else if (d[j] != dj) {
          return {};
        }
      }
    }
  }
  return d;
}

}  // namespace

bool is_valid_cartan(const IMat& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || n == 0) return false;
  for (int i = 0; i < n; ++i) {
    if (a(i, i) != 2) return false;
    for (int j = 0; j < n; ++j)
      if (i != j && a(i, j) > 0) return false;
  }
  auto d = symmetrizer(a);
  if (d.empty()) return false;
  for (int k = 1; k <= n; ++k) {
    MatQ s(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) s(i, j) = d[i] * Rational(a(i, j));
    if (determinant(s) <= Rational(0)) return false;
  }
  return true;
}

std::vector<IVec> positive_roots(const IMat& a) {
  const int n = static_cast<int>(a.rows());
  auto key = [](const IVec& v) { return std::vector<int>(v.data(), v.data() + v.size()); };
  std::set<std::vector<int>> seen;
  std::vector<IVec> queue;
  for (int i = 0; i < n; ++i) {
    IVec e = IVec::Zero(n);
    e(i) = 1;
    seen.insert(key(e));
    queue.push_back(e);
  }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    IVec beta = queue[q];
    for (int i = 0; i < n; ++i) {
      int pairing = 0;  // <alpha_i^vee, beta>
      for (int j = 0; j < n; ++j) pairing += a(i, j) * beta(j);
      IVec img = beta;
      img(i) -= pairing;
      if (seen.insert(key(img)).second) {
        queue.push_back(img);
        if (queue.size() > 100000) throw postcondition_error("root system is not finite");
      }
    }
  }
  std::vector<IVec> pos;
  for (const auto& r : queue)
    if (r.minCoeff() >= 0) pos.push_back(r);
  return pos;
}

IVec highest_root(const IMat& a) {
  auto roots = positive_roots(a);
  return *std::max_element(roots.begin(), roots.end(),
                           [](const IVec& x, const IVec& y) { return x.sum() < y.sum(); });
}

IMat affine_extension(const IMat& a) {
  const int n = static_cast<int>(a.rows());
  auto d = symmetrizer(a);
  if (d.empty()) throw precondition_error("Cartan matrix is not symmetrizable");
  IVec th = highest_root(a);
  // (alpha_i, alpha_j) = d_i a_ij / 2 up to a common factor.
  auto form = [&](const std::vector<Rational>& x, const std::vector<Rational>& y) {
    Rational s(0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += x[i] * y[j] * d[i] * Rational(a(i, j));
    return s;
  };
  std::vector<Rational> tv(n);
  for (int i = 0; i < n; ++i) tv[i] = Rational(th(i));
  Rational tt = form(tv, tv);
  IMat ext = IMat::Zero(n + 1, n + 1);
  ext.bottomRightCorner(n, n) = a;
  ext(0, 0) = 2;
  for (int j = 0; j < n; ++j) {
    std::vector<Rational> ej(n, Rational(0));
    ej[j] = 1;
    Rational tj = form(tv, ej);
    ext(0, j + 1) = static_cast<int>((Rational(-2) * tj / tt).to_ll());
    ext(j + 1, 0) = static_cast<int>((Rational(-2) * tj / form(ej, ej)).to_ll());
  }
  return ext;
}

RootDatum make_root_datum(char t, int r) {
  RootDatum d;
  d.type_letter = t;
  d.rank = r;
  d.cartan = canonical_cartan(t, r);
  d.affine_cartan = affine_extension(d.cartan);
  return d;
}

long long parabolic_class_count(const RootDatum& d) {
  if (!valid_rank(d.type_letter, d.rank)) throw precondition_error("invalid root datum");
  return 1LL << d.rank;
}

long long parahoric_class_count(const RootDatum& d) {
  if (!valid_rank(d.type_letter, d.rank)) throw precondition_error("invalid root datum");
  return (1LL << (d.rank + 1)) - 1;
}

std::string LeviType::str() const {
  std::string s;
  for (const auto& c : components) {
    if (!s.empty()) s += "+";
    s += c.type_letter + std::to_string(c.rank);
  }
  if (torus_rank > 0) s += (s.empty() ? "" : "+") + std::string("T") + std::to_string(torus_rank);
  return s.empty() ? "0" : s;
}

namespace {

// Backtracking search for a permutation p with block(p[i], p[j]) = ref(i, j).
bool matches_up_to_permutation(const IMat& block, const IMat& ref) {
  const int n = static_cast<int>(block.rows());
  if (ref.rows() != n) return false;
  std::vector<int> p(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> place = [&](int i) {
    if (i == n) return true;
    for (int c = 0; c < n; ++c) {
      if (used[c]) continue;
      bool ok = true;
      for (int k = 0; k < i && ok; ++k)
        ok = block(c, p[k]) == ref(i, k) && block(p[k], c) == ref(k, i);
      if (!ok) continue;
      used[c] = true;
      p[i] = c;
      if (place(i + 1)) return true;
      used[c] = false;
    }
    return false;
  };
  return place(0);
}

std::vector<std::vector<int>> components_of(const IMat& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> members{s};
    comp[s] = static_cast<int>(out.size());
    for (std::size_t q = 0; q < members.size(); ++q)
      for (int j = 0; j < n; ++j)
        if (comp[j] < 0 && (a(members[q], j) != 0 || a(j, members[q]) != 0)) {
          comp[j] = comp[s];
          members.push_back(j);
        }
    std::sort(members.begin(), members.end());
    out.push_back(members);
  }
  return out;
}

}  // namespace

CartanComponent classify_indecomposable(const IMat& block) {
  const int r = static_cast<int>(block.rows());
  for (char t : {'A', 'B', 'C', 'D', 'E', 'F', 'G'}) {
    if (!valid_rank(t, r)) continue;
    if (matches_up_to_permutation(block, canonical_cartan(t, r))) {
      std::vector<int> nodes(r);
      std::iota(nodes.begin(), nodes.end(), 0);
      return {t, r, nodes};
    }
  }
  throw precondition_error("Cartan block is not of finite type");
}

std::vector<CartanComponent> classify_cartan(const IMat& a) {
  std::vector<CartanComponent> out;
  for (const auto& members : components_of(a)) {
    const int k = static_cast<int>(members.size());
    IMat block(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) block(i, j) = a(members[i], members[j]);
    CartanComponent c = classify_indecomposable(block);
    c.nodes = members;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const CartanComponent& x, const CartanComponent& y) {
    if (x.type_letter != y.type_letter) return x.type_letter < y.type_letter;
    if (x.rank != y.rank) return x.rank > y.rank;
    return x.nodes < y.nodes;
  });
  return out;
}

LeviType levi_type_of_affine_subset(const RootDatum& d, const std::vector<int>& nodes) {
  std::vector<int> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int v : sorted)
    if (v < 0 || v > d.rank) throw precondition_error("node index out of range");
  if (static_cast<int>(sorted.size()) == d.rank + 1)
    throw precondition_error("subset must be proper in the affine node set");
  LeviType lt;
  lt.torus_rank = d.rank - static_cast<int>(sorted.size());
  if (sorted.empty()) return lt;
  const int k = static_cast<int>(sorted.size());
  IMat sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub(i, j) = d.affine_cartan(sorted[i], sorted[j]);
  lt.components = classify_cartan(sub);
  for (auto& c : lt.components)
    for (auto& v : c.nodes) v = sorted[v];
  return lt;
}

std::vector<unsigned> proper_affine_subsets(const RootDatum& d) {
  std::vector<unsigned> out;
  const unsigned full = (1u << (d.rank + 1)) - 1;
  for (unsigned m = 0; m < full; ++m) out.push_back(m);
  return out;
}

std::vector<int> nodes_of_mask(unsigned mask, int count) {
  std::vector<int> v;
  for (int i = 0; i < count; ++i)
    if (mask & (1u << i)) v.push_back(i);
  return v;
}

}  // namespace logahoric::rootcomb
