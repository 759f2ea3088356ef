#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "simd/tables.hpp"

namespace its::simd::detail {
namespace {

using V = __m256d;
using I = __m256i;

inline V set1(double x) { return _mm256_set1_pd(x); }
inline I set1i(std::int64_t x) { return _mm256_set1_epi64x(x); }
inline bool all(V mask) { return _mm256_movemask_pd(mask) == 0xF; }

template <class F>
inline V per_lane(V x, F f) {
  alignas(32) double buf[4];
  _mm256_store_pd(buf, x);
  for (double& v : buf) v = f(v);
  return _mm256_load_pd(buf);
}

// Round-to-nearest integer in a double, returned as int64 lanes.
inline I to_int64(V n) {
  const V magic = set1(0x1.8p52);
  return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)), _mm256_castpd_si256(magic));
}

V exp_pd(V x) {
  const V fast = _mm256_and_pd(_mm256_cmp_pd(x, set1(-708.0), _CMP_GE_OQ), _mm256_cmp_pd(x, set1(708.0), _CMP_LE_OQ));
  const V zero = _mm256_cmp_pd(x, set1(-745.2), _CMP_LT_OQ);
  if (!all(_mm256_or_pd(fast, zero))) return per_lane(x, [](double v) { return std::exp(v); });
  const V xc = _mm256_max_pd(x, set1(-708.0));

  const V n = _mm256_round_pd(_mm256_mul_pd(xc, set1(0x1.71547652b82fep+0)), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  V r = _mm256_fnmadd_pd(n, set1(0x1.62e42fee00000p-1), xc);
  r = _mm256_fnmadd_pd(n, set1(0x1.a39ef35793c76p-33), r);

  static constexpr double kCoef[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0,
      1.0 / 40320.0,      1.0 / 5040.0,      1.0 / 720.0,      1.0 / 120.0,     1.0 / 24.0,
      1.0 / 6.0,          0.5,               1.0,              1.0};
  V p = set1(kCoef[0]);
  for (int i = 1; i < 14; ++i) p = _mm256_fmadd_pd(p, r, set1(kCoef[i]));

  const I e = _mm256_slli_epi64(_mm256_add_epi64(to_int64(n), set1i(1023)), 52);
  const V result = _mm256_mul_pd(p, _mm256_castsi256_pd(e));
  return _mm256_blendv_pd(result, _mm256_setzero_pd(), zero);
}

V log_pd(V x) {
  const V normal = _mm256_and_pd(_mm256_cmp_pd(x, set1(std::numeric_limits<double>::min()), _CMP_GE_OQ),
                                 _mm256_cmp_pd(x, set1(std::numeric_limits<double>::max()), _CMP_LE_OQ));
  if (!all(normal)) return per_lane(x, [](double v) { return std::log(v); });

  const I bits = _mm256_castpd_si256(x);
  const I exp_bits = _mm256_srli_epi64(bits, 52);
  V m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, set1i(0x000fffffffffffffLL)),
                                            set1i(0x3ff0000000000000LL)));
  V e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(exp_bits, set1i(0x4330000000000000LL))),
                      set1(0x1p52 + 1023.0));
  const V big = _mm256_cmp_pd(m, set1(0x1.6a09e667f3bcdp+0), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, set1(0.5)), big);
  e = _mm256_blendv_pd(e, _mm256_add_pd(e, set1(1.0)), big);

  const V f = _mm256_sub_pd(m, set1(1.0));
  const V s = _mm256_div_pd(f, _mm256_add_pd(f, set1(2.0)));
  const V z = _mm256_mul_pd(s, s);
  V p = set1(1.0 / 23.0);
  for (int k = 10; k >= 0; --k) p = _mm256_fmadd_pd(p, z, set1(1.0 / (2 * k + 1)));
  const V log_m = _mm256_mul_pd(_mm256_add_pd(s, s), p);
  return _mm256_fmadd_pd(e, set1(0x1.62e42fee00000p-1), _mm256_fmadd_pd(e, set1(0x1.a39ef35793c76p-33), log_m));
}

void sincos_pd(V x, V* sin_out, V* cos_out) {
  const V ax = _mm256_andnot_pd(set1(-0.0), x);
  if (!all(_mm256_cmp_pd(ax, set1(0x1p20), _CMP_LE_OQ))) {
    *sin_out = per_lane(x, [](double v) { return std::sin(v); });
    *cos_out = per_lane(x, [](double v) { return std::cos(v); });
    return;
  }
  const V n = _mm256_round_pd(_mm256_mul_pd(x, set1(0x1.45f306dc9c883p-1)), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  V r = _mm256_fnmadd_pd(n, set1(0x1.921fb54000000p+0), x);
  r = _mm256_fnmadd_pd(n, set1(0x1.10b4611800000p-30), r);
  r = _mm256_fnmadd_pd(n, set1(0x1.313198a2e0370p-61), r);
  const V z = _mm256_mul_pd(r, r);

  // sin r = r + r z S(z), cos r = 1 + z C(z)
  static constexpr double kSin[] = {1.0 / 355687428096000.0, -1.0 / 1307674368000.0, 1.0 / 6227020800.0,
                                    -1.0 / 39916800.0,        1.0 / 362880.0,          -1.0 / 5040.0,
                                    1.0 / 120.0,              -1.0 / 6.0};
  static constexpr double kCos[] = {-1.0 / 6402373705728000.0, 1.0 / 20922789888000.0, -1.0 / 87178291200.0,
                                    1.0 / 479001600.0,         -1.0 / 3628800.0,        1.0 / 40320.0,
                                    -1.0 / 720.0,              1.0 / 24.0,              -0.5};
  V ps = set1(kSin[0]);
  for (int i = 1; i < 8; ++i) ps = _mm256_fmadd_pd(ps, z, set1(kSin[i]));
  V pc = set1(kCos[0]);
  for (int i = 1; i < 9; ++i) pc = _mm256_fmadd_pd(pc, z, set1(kCos[i]));
  const V sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);
  const V cos_r = _mm256_fmadd_pd(z, pc, set1(1.0));

  const I q = to_int64(n);
  const V swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, set1i(1)), set1i(1)));
  const V sin_neg = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(q, set1i(2)), 62));
  const V cos_neg =
      _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(q, set1i(1)), set1i(2)), 62));
  *sin_out = _mm256_xor_pd(_mm256_blendv_pd(sin_r, cos_r, swap), sin_neg);
  *cos_out = _mm256_xor_pd(_mm256_blendv_pd(cos_r, sin_r, swap), cos_neg);
}

template <class Body>
void for_each_block(std::size_t n, Body body) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) body(i, 4);
  if (i < n) body(i, n - i);
}

inline V load(const double* p, std::size_t count, double fill) {
  if (count == 4) return _mm256_loadu_pd(p);
  alignas(32) double buf[4] = {fill, fill, fill, fill};
  for (std::size_t j = 0; j < count; ++j) buf[j] = p[j];
  return _mm256_load_pd(buf);
}

inline void store(double* p, std::size_t count, V v) {
  if (count == 4) {
    _mm256_storeu_pd(p, v);
    return;
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, v);
  for (std::size_t j = 0; j < count; ++j) p[j] = buf[j];
}

void damped_oscillatory(const DampedOscillatory& k, const double* y, double* out, std::size_t n) {
  for_each_block(n, [&](std::size_t i, std::size_t count) {
    const V yv = load(y + i, count, 1.0);
    const V is_zero = _mm256_cmp_pd(yv, _mm256_setzero_pd(), _CMP_EQ_OQ);
    const V ys = _mm256_blendv_pd(yv, set1(1.0), is_zero);
    V w = exp_pd(_mm256_mul_pd(set1(k.beta), log_pd(ys)));
    w = _mm256_blendv_pd(w, _mm256_setzero_pd(), is_zero);
    const V arg = _mm256_fnmadd_pd(set1(k.b), w, _mm256_fnmadd_pd(set1(k.a), yv, set1(k.log_scale)));
    const V env = exp_pd(arg);
    V s, c;
    sincos_pd(_mm256_mul_pd(set1(k.c), w), &s, &c);
    const V osc = _mm256_add_pd(_mm256_mul_pd(_mm256_fmadd_pd(set1(k.p1), w, set1(k.p0)), s),
                                _mm256_mul_pd(_mm256_fmadd_pd(set1(k.q1), w, set1(k.q0)), c));
    const V denom = _mm256_fmadd_pd(set1(k.dy), yv, set1(k.d0));
    store(out + i, count, _mm256_div_pd(_mm256_mul_pd(env, osc), denom));
  });
}

void kanter_stable(double beta, double log_scale, const double* u, const double* w, double* out,
                   std::size_t n) {
  const double r = 1.0 - beta;
  for_each_block(n, [&](std::size_t i, std::size_t count) {
    const V uv = load(u + i, count, 1.0);
    const V wv = load(w + i, count, 1.0);
    V sb, cb, sr, cr, su, cu;
    sincos_pd(_mm256_mul_pd(set1(beta), uv), &sb, &cb);
    sincos_pd(_mm256_mul_pd(set1(r), uv), &sr, &cr);
    sincos_pd(uv, &su, &cu);
    V log_a = _mm256_mul_pd(set1(beta / r), log_pd(sb));
    log_a = _mm256_add_pd(log_a, log_pd(sr));
    log_a = _mm256_sub_pd(log_a, _mm256_div_pd(log_pd(su), set1(r)));
    const V arg = _mm256_fmadd_pd(set1(r / beta), _mm256_sub_pd(log_a, log_pd(wv)), set1(log_scale));
    store(out + i, count, exp_pd(arg));
  });
}

template <class F>
void map_n(const double* x, double* out, std::size_t n, double fill, F f) {
  for_each_block(n, [&](std::size_t i, std::size_t count) { store(out + i, count, f(load(x + i, count, fill))); });
}

void exp_n(const double* x, double* out, std::size_t n) { map_n(x, out, n, 0.0, exp_pd); }
void log_n(const double* x, double* out, std::size_t n) { map_n(x, out, n, 1.0, log_pd); }
void sin_n(const double* x, double* out, std::size_t n) {
  map_n(x, out, n, 0.0, [](V v) {
    V s, c;
    sincos_pd(v, &s, &c);
    return s;
  });
}
void cos_n(const double* x, double* out, std::size_t n) {
  map_n(x, out, n, 0.0, [](V v) {
    V s, c;
    sincos_pd(v, &s, &c);
    return c;
  });
}

} // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{damped_oscillatory, kanter_stable, exp_n, log_n, sin_n, cos_n};
  return &table;
}

} // namespace its::simd::detail
