#include "fmtk/bsg.hpp"

#include "fmtk/counters.hpp"
#include "fmtk/products.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace fmtk {

namespace {

using List = std::vector<std::pair<ExtInt, std::int64_t>>;

List make_list(const IndexedSet& A, std::int64_t h) {
  List L;
  for (std::int64_t i = A.lo; i < A.hi(); ++i)
    if (A.has(i) && A.has(i + h)) L.push_back({sub(A.at(i + h), A.at(i)), i});
  std::sort(L.begin(), L.end());
  return L;
}

double lnp(std::uint64_t n) { return std::log(static_cast<double>(n) + 2.0); }
std::uint64_t up(double x) { return static_cast<std::uint64_t>(std::ceil(x - 1e-9)); }

// Integer code of (index, value) pairs whose differences decode uniquely.
struct Encoder {
  ExtInt K = 1;
  explicit Encoder(const IndexedSet& A) {
    ExtInt m = 0;
    for (auto v : A.vals)
      if (v != INF) m = std::max(m, v < 0 ? neg(v) : v);
    K = add(mul(4, m), 2);
  }
  std::int64_t code(std::int64_t i, ExtInt v) const { return add(mul(i, K), v); }
};

std::uint64_t diff_size(const IndexedSet& A, const Encoder& E, const std::vector<std::int64_t>& idx, Rng& rng) {
  std::vector<std::int64_t> X, Y;
  for (auto i : idx) {
    X.push_back(E.code(i, A.at(i)));
    Y.push_back(neg(X.back()));
  }
  return sumset(X, Y, rng).size();
}

// pop_A(x), estimated from a fixed sample of A (exact when the sample is all of A), memoized per x.
class PopEstimator {
 public:
  PopEstimator(const IndexedSet& A, std::size_t m, Rng& rng, std::uint64_t& ops) : A_(A), ops_(ops) {
    for (std::int64_t i = A.lo; i < A.hi(); ++i)
      if (A.has(i)) all_.push_back(i);
    if (m >= all_.size()) {
      sample_ = all_;
    } else {
      for (auto p : rng.sample(all_.size(), m)) sample_.push_back(all_[p]);
    }
  }
  double operator()(std::int64_t dx, ExtInt dv) {
    auto key = std::make_pair(dx, dv);
    auto it = memo_.find(key);
    ++ops_;
    if (it != memo_.end()) return it->second;
    std::uint64_t c = 0;
    for (auto i : sample_) c += A_.contains(i - dx, A_.at(i) - dv);
    ops_ += sample_.size();
    double est = static_cast<double>(c) * all_.size() / sample_.size();
    memo_.emplace(key, est);
    return est;
  }

 private:
  struct Hash {
    std::size_t operator()(const std::pair<std::int64_t, ExtInt>& p) const {
      return std::hash<std::int64_t>()(p.first * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(p.second));
    }
  };
  const IndexedSet& A_;
  std::uint64_t& ops_;
  std::vector<std::int64_t> all_, sample_;
  std::unordered_map<std::pair<std::int64_t, ExtInt>, double, Hash> memo_;
};

enum class Mode { Simple, Gowers, Popular };

struct Params {
  Mode mode;
  std::size_t s, r, t;  // t: popularity threshold n/t for the Gowers step
};

struct Attempt {
  std::vector<std::vector<std::int64_t>> subsets;
  std::vector<IndexPair> R;
  std::uint64_t ops = 0;
};

// One randomized construction. C is null in popular mode.
Attempt construct(const IndexedSet& A, const IndexedSet* C, const OffsetTable* T, const Params& P, Rng& rng) {
  Attempt out;
  const std::uint64_t n = A.size();
  const std::int64_t N = A.n();
  auto qualifies = [&](std::int64_t j, std::int64_t i) { return !C || C->contains(j - i, A.at(j) - A.at(i)); };

  if (C) {
    // few witnesses
    for (std::int64_t k = C->lo; k < C->hi(); ++k) {
      if (!C->has(k) || k <= -N || k >= N) continue;
      const List& L = T->at(k);
      auto lo = std::lower_bound(L.begin(), L.end(), std::make_pair(C->at(k), std::numeric_limits<std::int64_t>::min()));
      auto hi = lo;
      while (hi != L.end() && hi->first == C->at(k)) ++hi;
      if (static_cast<std::uint64_t>(hi - lo) * P.s <= n)
        for (auto it = lo; it != hi; ++it) out.R.push_back({it->second + k, it->second});
    }
  }

  if (N >= 2) {
    const std::size_t m = std::min<std::uint64_t>(2 * N - 2, up(8.0 * P.s * lnp(n)));
    std::vector<std::int64_t> H;
    for (auto p : rng.sample(2 * N - 2, m)) {
      std::int64_t h = static_cast<std::int64_t>(p) - (N - 1);
      H.push_back(h >= 0 ? h + 1 : h);
    }
    std::unique_ptr<PopEstimator> pop;
    if (P.mode != Mode::Simple) pop = std::make_unique<PopEstimator>(A, up(8.0 * P.t * lnp(n)), rng, out.ops);

    for (auto h : H) {
      List own;
      const List* Lp;
      if (T) {
        Lp = &T->at(h);
      } else {
        own = make_list(A, h);
        Lp = &own;
      }
      const List& L = *Lp;
      out.ops += L.size();
      for (std::size_t a = 0; a < L.size();) {
        std::size_t b = a;
        while (b < L.size() && L[b].first == L[a].first) ++b;
        const std::uint64_t g = b - a;
        if (g * P.r <= n) {
          // low frequency: every pair sharing this difference
          out.ops += g * g;
          for (std::size_t x = a; x < b; ++x)
            for (std::size_t y = a; y < b; ++y)
              if (qualifies(L[x].second, L[y].second)) out.R.push_back({L[x].second, L[y].second});
        } else {
          std::vector<std::int64_t> S;
          for (std::size_t x = a; x < b; ++x) S.push_back(L[x].second);
          std::sort(S.begin(), S.end());
          if (P.mode != Mode::Simple) {
            // Z: elements whose estimated degree among unpopular differences exceeds |S|/4
            const std::size_t m2 = std::min<std::size_t>(S.size(), up(8.0 * lnp(n)));
            std::vector<std::int64_t> probe;
            for (auto p : rng.sample(S.size(), m2)) probe.push_back(S[p]);
            std::vector<std::int64_t> Z, keep;
            for (auto x : S) {
              std::size_t deg = 0;
              for (auto y : probe) deg += (*pop)(x - y, A.at(x) - A.at(y)) * P.t <= static_cast<double>(n);
              if (4.0 * deg * S.size() > static_cast<double>(S.size()) * m2) {
                Z.push_back(x);
              } else {
                keep.push_back(x);
              }
            }
            for (auto z : Z)
              for (auto x : S) {
                if (qualifies(z, x)) out.R.push_back({z, x});
                if (qualifies(x, z)) out.R.push_back({x, z});
              }
            out.ops += 2 * Z.size() * S.size();
            S = std::move(keep);
          }
          if (!S.empty()) out.subsets.push_back(std::move(S));
        }
        a = b;
      }
    }
  }
  // offset 0 is never sampled: diagonal pairs of elements outside every subset go to R
  if (C ? C->contains(0, 0) : P.s > 1) {
    std::vector<char> in(A.n(), 0);
    for (const auto& S : out.subsets)
      for (auto i : S) in[i - A.lo] = 1;
    for (std::int64_t i = A.lo; i < A.hi(); ++i)
      if (A.has(i) && !in[i - A.lo]) out.R.push_back({i, i});
    out.ops += A.n();
  }
  std::sort(out.R.begin(), out.R.end());
  out.R.erase(std::unique(out.R.begin(), out.R.end()), out.R.end());
  return out;
}

// Pairs that must be covered: qualifying pairs, or pairs of popularity above n / s.
std::vector<IndexPair> required_pairs(const OffsetTable& T, const IndexedSet* C, std::uint64_t n, std::size_t s) {
  std::vector<IndexPair> out;
  const IndexedSet& A = T.A;
  for (const auto& [k, L] : T.lists)
    for (std::size_t a = 0; a < L.size();) {
      std::size_t b = a;
      while (b < L.size() && L[b].first == L[a].first) ++b;
      bool need = C ? C->contains(k, L[a].first) : (b - a) * s > n;
      if (need)
        for (std::size_t x = a; x < b; ++x) out.push_back({L[x].second + k, L[x].second});
      a = b;
    }
  (void)A;
  return out;
}

std::size_t uncovered(const std::vector<IndexPair>& need, const Attempt& at, const IndexedSet& A) {
  std::vector<std::vector<std::size_t>> member(A.n());
  for (std::size_t l = 0; l < at.subsets.size(); ++l)
    for (auto i : at.subsets[l]) member[i - A.lo].push_back(l);
  std::size_t miss = 0;
  for (const auto& p : need) {
    if (std::binary_search(at.R.begin(), at.R.end(), p)) continue;
    const auto& x = member[p.first - A.lo];
    const auto& y = member[p.second - A.lo];
    std::size_t u = 0, v = 0;
    bool hit = false;
    while (u < x.size() && v < y.size() && !hit) {
      if (x[u] == y[v])
        hit = true;
      else if (x[u] < y[v])
        ++u;
      else
        ++v;
    }
    miss += !hit;
  }
  return miss;
}

BsgCover run(const IndexedSet& A, const IndexedSet* C, const OffsetTable* T, const Params& P, std::size_t s_hat,
             Rng& rng, bool verify) {
  if (P.s < 1) throw std::invalid_argument("bsg cover: s < 1");
  const std::uint64_t n = A.size();
  const double nd = static_cast<double>(n), L = lnp(n), s = P.s;
  BsgCover cov;
  switch (P.mode) {
    case Mode::Simple:
      cov.pair_budget = up(8.0 * nd * nd * L / s);
      cov.sumset_budget = up(64.0 * s * s * std::pow(nd, 1.5) * L * L * L);
      cov.subset_budget = up(8.0 * s * s * s * L * L);
      break;
    case Mode::Gowers:
      cov.pair_budget = up(8.0 * nd * nd * L / s);
      cov.sumset_budget = up(64.0 * std::pow(s, 6) * nd * std::pow(L, 4));
      cov.subset_budget = up(8.0 * s * s * s * L * L);
      break;
    case Mode::Popular: {
      const double sh = static_cast<double>(s_hat);
      cov.pair_budget = up(8.0 * nd * nd * L / sh);
      cov.sumset_budget = up(64.0 * std::pow(s, 5) * std::pow(sh, 4) * nd * std::pow(L, 4));
      cov.subset_budget = up(8.0 * s * s * sh * L * L);
      cov.op_budget = up(8.0 * nd * nd * L / sh) + up(64.0 * s * s * sh * nd * L * L);
      break;
    }
  }

  std::shared_ptr<const OffsetTable> own;
  if (verify && !T) {
    own = offset_table(A);
    T = own.get();
  }

  if (std::pow(s, 4) >= nd) {
    if (!T) {
      own = offset_table(A);
      T = own.get();
    }
    cov.trivial = true;
    cov.attempts = 1;
    if (!C)
      for (const auto& [k, L] : T->lists) cov.pair_checks += L.size();
    counters().pair_checks += cov.pair_checks;
    cov.remainder = required_pairs(*T, C, n, P.s);
    std::sort(cov.remainder.begin(), cov.remainder.end());
    return cov;
  }

  std::vector<IndexPair> need;
  if (verify) need = required_pairs(*T, C, n, P.s);
  const Encoder E(A);
  std::ostringstream diag;
  for (std::size_t attempt = 1; attempt <= 10; ++attempt) {
    Attempt at = construct(A, C, P.mode == Mode::Popular ? nullptr : T, P, rng);
    std::uint64_t total = 0, mx = 0;
    for (const auto& S : at.subsets) {
      std::uint64_t d = diff_size(A, E, S, rng);
      total += d;
      mx = std::max(mx, d);
    }
    const std::size_t miss = verify ? uncovered(need, at, A) : 0;
    const bool sums_ok = P.mode == Mode::Gowers ? mx <= cov.sumset_budget : total <= cov.sumset_budget;
    const bool ok = miss == 0 && at.R.size() <= cov.pair_budget && at.subsets.size() <= cov.subset_budget && sums_ok &&
                    (cov.op_budget == 0 || at.ops <= cov.op_budget);
    diag << " [attempt " << attempt << ": uncovered " << miss << ", |R| " << at.R.size() << "/" << cov.pair_budget
         << ", subsets " << at.subsets.size() << "/" << cov.subset_budget << ", sumsets "
         << (P.mode == Mode::Gowers ? mx : total) << "/" << cov.sumset_budget << ", ops " << at.ops << "]";
    if (ok) {
      cov.subsets = std::move(at.subsets);
      cov.remainder = std::move(at.R);
      cov.sumset_total = total;
      cov.sumset_max = mx;
      cov.pair_checks = at.ops;
      counters().pair_checks += at.ops;
      cov.attempts = attempt;
      return cov;
    }
    ++counters().resamples;
  }
  throw BsgBudgetError("bsg cover: budgets unmet after 10 attempts;" + diag.str());
}

}  // namespace

std::uint64_t popularity(const IndexedSet& A, std::int64_t dx, ExtInt dv) {
  std::uint64_t c = 0;
  for (std::int64_t i = A.lo; i < A.hi(); ++i)
    if (A.has(i) && A.contains(i - dx, sub(A.at(i), dv))) ++c;
  return c;
}

const std::vector<std::pair<ExtInt, std::int64_t>>& OffsetTable::at(std::int64_t h) const {
  static const std::vector<std::pair<ExtInt, std::int64_t>> empty;
  auto it = lists.find(h);
  return it == lists.end() ? empty : it->second;
}

std::shared_ptr<const OffsetTable> offset_table(const IndexedSet& A) {
  auto T = std::make_shared<OffsetTable>();
  T->A = A;
  const std::int64_t N = A.n();
  for (std::int64_t h = -(N - 1); h <= N - 1; ++h) {
    List L = make_list(A, h);
    if (!L.empty()) T->lists.emplace(h, std::move(L));
  }
  return T;
}

std::uint64_t difference_set_size(const IndexedSet& A, const std::vector<std::int64_t>& idx, Rng& rng) {
  return diff_size(A, Encoder(A), idx, rng);
}

BsgCover bsg_cover_simple(const IndexedSet& A, const IndexedSet& C, std::size_t s, Rng& rng) {
  auto T = offset_table(A);
  return bsg_cover_simple(*T, C, s, rng);
}

BsgCover bsg_cover_simple(const OffsetTable& T, const IndexedSet& C, std::size_t s, Rng& rng) {
  return run(T.A, &C, &T, Params{Mode::Simple, s, s * s, s * s}, 0, rng, true);
}

BsgCover bsg_cover_gowers(const IndexedSet& A, const IndexedSet& C, std::size_t s, Rng& rng) {
  auto T = offset_table(A);
  return run(A, &C, T.get(), Params{Mode::Gowers, s, s * s, s * s}, 0, rng, true);
}

BsgCover bsg_cover_popular_fast(const IndexedSet& A, std::size_t s, std::size_t s_hat, Rng& rng, bool verify) {
  if (s < 1 || s_hat < 1) throw std::invalid_argument("bsg_cover_popular_fast: s, s_hat >= 1");
  return run(A, nullptr, nullptr, Params{Mode::Popular, s, s * s_hat, s * s_hat}, s_hat, rng, verify);
}

BsgSingle bsg_extract_single(const std::vector<std::int64_t>& Ain, const std::vector<std::int64_t>& Cin, std::size_t s,
                             Rng& rng) {
  if (s < 1) throw std::invalid_argument("bsg_extract_single: s < 1");
  std::vector<std::int64_t> A = Ain, C = Cin;
  std::sort(A.begin(), A.end());
  A.erase(std::unique(A.begin(), A.end()), A.end());
  std::sort(C.begin(), C.end());
  C.erase(std::unique(C.begin(), C.end()), C.end());
  const std::uint64_t n = A.size();
  if (n == 0) throw std::invalid_argument("bsg_extract_single: empty A");

  std::map<std::int64_t, std::uint64_t> pop;
  for (auto a : A)
    for (auto b : A) ++pop[sub(a, b)];
  std::uint64_t qual = 0;
  for (auto c : C) {
    auto it = pop.find(c);
    if (it != pop.end()) qual += it->second;
  }
  if (qual * s < n * n)
    throw std::invalid_argument("bsg_extract_single: " + std::to_string(qual) + " qualifying pairs, need n^2/s = " +
                                std::to_string(n * n) + "/" + std::to_string(s));

  std::vector<std::int64_t> F;
  for (auto [x, p] : pop)
    if (2 * s * p > n) F.push_back(x);

  BsgSingle out;
  out.budget = up(16.0 * std::sqrt(static_cast<double>(s)) * std::pow(static_cast<double>(n), 1.5));
  for (std::size_t d = 1; d <= 20; ++d) {
    const std::int64_t h = F[rng.below(F.size())];
    std::vector<std::int64_t> sub_set;
    for (auto a : A)
      if (std::binary_search(A.begin(), A.end(), a - h)) sub_set.push_back(a);
    std::vector<std::int64_t> neg_set;
    for (auto it = sub_set.rbegin(); it != sub_set.rend(); ++it) neg_set.push_back(-*it);
    const std::uint64_t ds = sumset(sub_set, neg_set, rng).size();
    if (ds <= out.budget && 2 * s * sub_set.size() >= n) {
      out.subset = std::move(sub_set);
      out.h = h;
      out.diff_size = ds;
      out.draws = d;
      return out;
    }
  }
  throw BsgBudgetError("bsg_extract_single: 20 draws of h exhausted");
}

Preprocessed3SumRand preprocessed_3sum_rand_build(const std::vector<std::int64_t>& A,
                                                  const std::vector<std::int64_t>& B, Rng& rng, std::size_t s) {
  Preprocessed3SumRand h;
  h.A = A;
  h.B = B;
  for (auto* v : {&h.A, &h.B}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  const std::uint64_t n = std::max<std::uint64_t>({3, h.A.size(), h.B.size()});
  h.s = s ? s : std::max<std::size_t>(1, std::lround(std::pow(static_cast<double>(2 * n), 1.0 / 6.0)));
  if (h.A.empty() || h.B.empty()) return h;
  const std::int64_t R = random_prime_in(n, 2 * n, rng);
  h.modulus = R;

  auto layer_of = [R](const std::vector<std::int64_t>& X) {
    std::vector<std::vector<std::int64_t>> bucket(R);
    for (std::size_t e = 0; e < X.size(); ++e) bucket[mod_pos(X[e], R)].push_back(e);
    std::size_t depth = 0;
    for (auto& b : bucket) depth = std::max(depth, b.size());
    std::vector<std::vector<std::int64_t>> L(depth, std::vector<std::int64_t>(R, -1));
    for (std::int64_t u = 0; u < R; ++u)
      for (std::size_t t = 0; t < bucket[u].size(); ++t) L[t][u] = bucket[u][t];
    return L;
  };
  auto LA = layer_of(h.A), LB = layer_of(h.B);
  for (std::size_t rho = 0; rho < LA.size(); ++rho)
    for (std::size_t sig = 0; sig < LB.size(); ++sig) {
      Preprocessed3SumRand::Part part;
      part.rho = rho;
      part.sigma = sig;
      part.elem.assign(2 * R, -1);
      std::vector<ExtInt> vals(2 * R, INF);
      for (std::int64_t u = 0; u < R; ++u)
        if (LA[rho][u] >= 0) {
          part.elem[u + R] = LA[rho][u];
          vals[u + R] = h.A[LA[rho][u]];
        }
      for (std::int64_t v = 0; v < R; ++v)
        if (LB[sig][v] >= 0) {
          part.elem[R - 1 - v] = LB[sig][v];
          vals[R - 1 - v] = neg(h.B[LB[sig][v]]);
        }
      part.table = offset_table(IndexedSet(vals, 0));
      h.parts.push_back(std::move(part));
    }
  return h;
}

std::vector<char> preprocessed_3sum_rand_query(Preprocessed3SumRand& h, const std::vector<std::int64_t>& Ap,
                                               const std::vector<std::int64_t>& Bp,
                                               const std::vector<std::int64_t>& Cq, Rng& rng) {
  auto member = [](const std::vector<std::int64_t>& U, const std::vector<std::int64_t>& sub, const char* name) {
    std::vector<char> in(U.size(), 0);
    for (auto x : sub) {
      auto it = std::lower_bound(U.begin(), U.end(), x);
      if (it == U.end() || *it != x)
        throw std::invalid_argument(std::string("preprocessed_3sum_rand_query: ") + name + " element " +
                                    std::to_string(x) + " outside the universe");
      in[it - U.begin()] = 1;
    }
    return in;
  };
  auto inA = member(h.A, Ap, "A'"), inB = member(h.B, Bp, "B'");
  std::vector<char> flags(Cq.size(), 0);
  if (h.parts.empty() || Cq.empty()) return flags;
  const std::int64_t R = h.modulus;

  // C' layers: element of C' at index w + 1 for w in {c mod R, c mod R + R}
  std::vector<std::vector<std::size_t>> bucket(R);
  for (std::size_t e = 0; e < Cq.size(); ++e) bucket[mod_pos(Cq[e], R)].push_back(e);
  std::size_t depth = 0;
  for (auto& b : bucket) depth = std::max(depth, b.size());

  for (const auto& part : h.parts) {
    const IndexedSet& D = part.table->A;
    bool anyA = false, anyB = false;
    for (std::int64_t x = 0; x < 2 * R; ++x)
      if (part.elem[x] >= 0) (x >= R ? anyA : anyB) |= x >= R ? inA[part.elem[x]] : inB[part.elem[x]];
    if (!anyA || !anyB) continue;
    for (std::size_t tau = 0; tau < depth; ++tau) {
      std::vector<ExtInt> cv(2 * R + 1, INF);
      std::vector<std::int64_t> owner(2 * R + 1, -1);
      bool any = false;
      for (std::int64_t t = 0; t < R; ++t)
        if (tau < bucket[t].size()) {
          auto e = bucket[t][tau];
          cv[t + 1] = cv[t + R + 1] = Cq[e];
          owner[t + 1] = owner[t + R + 1] = e;
          any = true;
        }
      if (!any) continue;
      IndexedSet Cstar(cv, 0);
      BsgCover cov = bsg_cover_simple(*part.table, Cstar, h.s, rng);
      ++h.covers_built;

      auto hit = [&](std::int64_t x, std::int64_t y) {
        // x from the A half, y from the negated B half
        if (x < R || y >= R || !inA[part.elem[x]] || !inB[part.elem[y]]) return;
        if (Cstar.contains(x - y, D.at(x) - D.at(y))) flags[owner[x - y]] = 1;
      };
      for (const auto& [x, y] : cov.remainder) hit(x, y);
      h.remainder_scanned += cov.remainder.size();

      const Encoder E(D);
      for (const auto& S : cov.subsets) {
        std::vector<std::int64_t> X, Y;
        for (auto x : S) {
          if (x >= R && inA[part.elem[x]]) X.push_back(E.code(x, D.at(x)));
          if (x < R && inB[part.elem[x]]) Y.push_back(neg(E.code(x, D.at(x))));
        }
        if (X.empty() || Y.empty()) continue;
        ++h.subsets_used;
        for (auto z : sumset(X, Y, rng)) {
          // decode z = idx * K + val with |val| < K / 2
          std::int64_t idx = floor_div(z + E.K / 2, E.K);
          ExtInt val = z - idx * E.K;
          if (idx >= 1 && idx <= 2 * R && Cstar.contains(idx, val)) flags[owner[idx]] = 1;
        }
      }
    }
  }
  return flags;
}

}  // namespace fmtk
