#include "fmtk/counters.hpp"
#include "fmtk/products.hpp"

#include <algorithm>

namespace fmtk {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i128 = __int128;

u64 pw(u64 a, u64 e, u64 m) {
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = r * a % m;
    a = a * a % m;
    e >>= 1;
  }
  return r;
}

struct Ntt {
  u64 mod, root;
  void run(std::vector<u64>& a, bool inverse) const {
    std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
      std::size_t bit = n >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
      u64 w = pw(root, (mod - 1) / len, mod);
      if (inverse) w = pw(w, mod - 2, mod);
      for (std::size_t i = 0; i < n; i += len) {
        u64 wn = 1;
        for (std::size_t j = 0; j < len / 2; ++j) {
          u64 u = a[i + j], v = a[i + j + len / 2] * wn % mod;
          a[i + j] = u + v < mod ? u + v : u + v - mod;
          a[i + j + len / 2] = u >= v ? u - v : u + mod - v;
          wn = wn * w % mod;
        }
      }
    }
    if (inverse) {
      u64 inv = pw(n, mod - 2, mod);
      for (auto& x : a) x = x * inv % mod;
    }
  }
};

constexpr Ntt kPrimes[3] = {{998244353, 3}, {167772161, 3}, {469762049, 3}};
constexpr std::size_t kMaxNtt = std::size_t{1} << 23;

// Garner reconstruction of a value known to lie in [0, m1*m2*m3).
i128 crt(u64 r1, u64 r2, u64 r3) {
  const u64 m1 = kPrimes[0].mod, m2 = kPrimes[1].mod, m3 = kPrimes[2].mod;
  u64 x1 = r1;
  u64 x2 = (r2 + m2 - x1 % m2) % m2 * pw(m1 % m2, m2 - 2, m2) % m2;
  u64 t = (x1 + static_cast<u64>((static_cast<i128>(x2) * m1) % m3)) % m3;
  u64 x3 = (r3 + m3 - t) % m3 * pw(m1 * m2 % m3, m3 - 2, m3) % m3;
  return static_cast<i128>(x1) + static_cast<i128>(x2) * m1 + static_cast<i128>(x3) * m1 * m2;
}

struct Moments {
  std::vector<i128> n, s1, s2;  // per residue class: pair count, sum of sums, sum of squared sums
};

// Folded cyclic convolution moments for residues of shifted values mod p.
Moments class_moments(const std::vector<u64>& A, const std::vector<u64>& B, u64 p) {
  std::size_t N = 1;
  while (N < 2 * p) N <<= 1;
  std::vector<std::vector<u64>> res[3];
  for (int q = 0; q < 3; ++q) {
    const Ntt& f = kPrimes[q];
    auto poly = [&](const std::vector<u64>& S, int power) {
      std::vector<u64> v(N, 0);
      for (u64 x : S) {
        u64 c = power == 0 ? 1 : power == 1 ? x % f.mod : (x % f.mod) * (x % f.mod) % f.mod;
        u64& slot = v[x % p];
        slot = (slot + c) % f.mod;
      }
      f.run(v, false);
      return v;
    };
    auto a0 = poly(A, 0), a1 = poly(A, 1), a2 = poly(A, 2);
    auto b0 = poly(B, 0), b1 = poly(B, 1), b2 = poly(B, 2);
    std::vector<u64> n(N), s1(N), s2(N);
    for (std::size_t i = 0; i < N; ++i) {
      u64 m = f.mod;
      n[i] = a0[i] * b0[i] % m;
      s1[i] = (a1[i] * b0[i] + a0[i] * b1[i]) % m;
      s2[i] = (a2[i] * b0[i] % m + 2 * (a1[i] * b1[i] % m) + a0[i] * b2[i] % m) % m;
    }
    f.run(n, true);
    f.run(s1, true);
    f.run(s2, true);
    for (auto* v : {&n, &s1, &s2}) {
      std::vector<u64> folded(p);
      for (std::size_t i = 0; i < N; ++i) folded[i % p] = (folded[i % p] + (*v)[i]) % f.mod;
      res[q].push_back(std::move(folded));
    }
  }
  Moments m;
  for (int which = 0; which < 3; ++which) {
    auto& dst = which == 0 ? m.n : which == 1 ? m.s1 : m.s2;
    dst.resize(p);
    for (u64 r = 0; r < p; ++r) dst[r] = crt(res[0][which][r], res[1][which][r], res[2][which][r]);
  }
  counters().big_digit_ops += 27 * N;
  return m;
}

void dedup(std::vector<std::int64_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<std::int64_t> sumset_direct(std::vector<std::int64_t> A, std::vector<std::int64_t> B) {
  dedup(A);
  dedup(B);
  std::vector<std::int64_t> out;
  out.reserve(A.size() * B.size());
  for (auto a : A)
    for (auto b : B) out.push_back(add(a, b));
  counters().pair_checks += A.size() * B.size();
  dedup(out);
  return out;
}

std::vector<std::int64_t> sumset(std::vector<std::int64_t> A, std::vector<std::int64_t> B, Rng& rng,
                                  SumsetOptions opt) {
  dedup(A);
  dedup(B);
  if (A.empty() || B.empty()) return {};
  // overflow of any a + b is reported, as in the direct path
  add(A.back(), B.back());
  add(A.front(), B.front());
  const std::size_t na = A.size(), nb = B.size();
  if (!opt.force_fft && na * nb <= opt.direct_threshold) return sumset_direct(A, B);

  const u64 Da = static_cast<u64>(A.back()) - static_cast<u64>(A.front());
  const u64 Db = static_cast<u64>(B.back()) - static_cast<u64>(B.front());
  const u64 D = Da + Db;
  // exactness of the moments needs |A||B| D^2 below the CRT modulus (about 2^86)
  const long double bound = static_cast<long double>(na) * nb * (static_cast<long double>(D) + 1) * (D + 1);
  if (D > (u64{1} << 40) || bound >= 7.0e25L) return sumset_direct(A, B);

  std::vector<u64> As(na), Bs(nb);
  for (std::size_t i = 0; i < na; ++i) As[i] = static_cast<u64>(A[i]) - static_cast<u64>(A.front());
  for (std::size_t i = 0; i < nb; ++i) Bs[i] = static_cast<u64>(B[i]) - static_cast<u64>(B.front());
  const std::int64_t shift = A.front() + B.front();

  u64 guess = 4 * (na + nb);
  while (true) {
    u64 p = random_prime_in(std::max<u64>(guess, 3), 2 * std::max<u64>(guess, 3), rng);
    Moments m = class_moments(As, Bs, p);
    std::vector<u64> bad;
    std::vector<std::int64_t> out;
    for (u64 r = 0; r < p; ++r) {
      if (m.n[r] == 0) continue;
      i128 n = m.n[r], s1 = m.s1[r], s2 = m.s2[r];
      // Cauchy-Schwarz: n * sum(s^2) = (sum s)^2 iff every sum in the class is equal
      if (s1 % n == 0) {
        i128 s = s1 / n;
        if (n * s * s == s2) {
          out.push_back(static_cast<std::int64_t>(s) + shift);
          continue;
        }
      }
      bad.push_back(r);
    }
    bool retry = bad.size() * 8 > p && 4 * guess <= na * nb && 4 * p <= kMaxNtt;
    if (retry) {
      ++counters().resamples;
      guess *= 4;
      continue;
    }
    if (!bad.empty()) {
      std::vector<std::vector<u64>> byres(p);
      for (u64 b : Bs) byres[b % p].push_back(b);
      for (u64 r : bad)
        for (u64 a : As) {
          for (u64 b : byres[(r + p - a % p) % p]) out.push_back(static_cast<std::int64_t>(a + b) + shift);
          counters().pair_checks += byres[(r + p - a % p) % p].size();
        }
    }
    dedup(out);
    return out;
  }
}

}  // namespace fmtk
