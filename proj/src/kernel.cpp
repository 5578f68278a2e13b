#include "logitmfg/kernel.hpp"

#include <cmath>
#include <vector>

namespace logitmfg {

namespace {

// x^p for compile-time p >= 0, unrolled square-and-multiply.
template <int P>
inline double fixed_powi(double x) {
  if constexpr (P == 0) {
    return 1.0;
  } else if constexpr (P % 2 == 0) {
    const double h = fixed_powi<P / 2>(x);
    return h * h;
  } else {
    const double h = fixed_powi<P / 2>(x);
    return h * h * x;
  }
}

inline double runtime_powi(double x, long p) {
  const bool inv = p < 0;
  unsigned long n = inv ? static_cast<unsigned long>(-p)
                        : static_cast<unsigned long>(p);
  double acc = 1.0;
  double b = x;
  while (n != 0) {
    if (n & 1UL) acc *= b;
    b *= b;
    n >>= 1UL;
  }
  return inv ? 1.0 / acc : acc;
}

struct Exponents {
  double k;     // 1/(1-q)
  long k_int;   // rounded k, meaningful when is_int
  bool is_int;  // k is an integer of modest size
};

Exponents analyze(const TsallisParams& params) {
  Exponents e;
  e.k = 1.0 / (1.0 - params.q);
  const double r = std::nearbyint(e.k);
  e.is_int = std::fabs(e.k - r) <= 1e-9 * std::max(1.0, std::fabs(e.k)) &&
             std::fabs(r) <= 64.0;
  e.k_int = static_cast<long>(r);
  return e;
}

struct SliceStats {
  double vmax;
  double vmin;
};

SliceStats stats(std::span<const double> v) {
  SliceStats s{v[0], v[0]};
  for (double x : v) {
    if (x > s.vmax) s.vmax = x;
    if (x < s.vmin) s.vmin = x;
  }
  return s;
}

// For q > 1 the smallest column pivot decides whether any entry leaves the
// domain of exp_q; checking the extreme pair up front covers every entry.
void check_domain(const TsallisParams& params, const SliceStats& st) {
  if (params.q <= 1.0) return;
  const double b = (1.0 - params.q) / params.eta;
  if (1.0 + b * (st.vmax - st.vmin) <= 0.0) {
    throw UndefinedDeformedExp(
        "transition kernel: value spread leaves the domain of exp_q (q > 1)");
  }
}

// Column driver for q != 1.  For column r the bases are normalized by the
// pivot 1 + b (Vmax - V_r), the entry maximizing E; normalized bases lie in
// [0, 1] for q < 1 and [1, inf) for q > 1 with the partial sums of their
// powers in [dx, 1], so nothing overflows for any eta.
//
// Body receives (r, pivot, sum of basen^k, basen^{k-1} per destination,
// and, when StoreBase, basen itself).
template <bool StoreBase, class PowKm1, class Body>
void for_each_column(std::span<const double> v, const TsallisParams& params,
                     PowKm1 powkm1, Body body) {
  const int n = static_cast<int>(v.size());
  const double b = (1.0 - params.q) / params.eta;
  const SliceStats st = stats(v);
  check_domain(params, st);
  const bool clip = params.q < 1.0;
  std::vector<double> tkm1(n);  // basen^{k-1}
  std::vector<double> basen(StoreBase ? n : 0);
  for (int r = 0; r < n; ++r) {
    const double vr = v[r];
    const double pivot = 1.0 + b * (st.vmax - vr);
    const double inv = 1.0 / pivot;
    double sk = 0.0;  // sum_d basen^k
    for (int d = 0; d < n; ++d) {
      double base = (1.0 + b * (v[d] - vr)) * inv;
      if (clip && base < 0.0) base = 0.0;
      const double t = powkm1(base);
      tkm1[d] = t;
      if constexpr (StoreBase) basen[d] = base;
      sk += t * base;
    }
    body(r, pivot, sk, std::span<const double>(tkm1),
         std::span<const double>(basen));
  }
}

template <bool StoreBase, class Body>
void run_columns(std::span<const double> v, const TsallisParams& params,
                 Body body) {
  const Exponents e = analyze(params);
  if (e.is_int) {
    switch (e.k_int - 1) {
      case 1:
        return for_each_column<StoreBase>(
            v, params, [](double x) { return fixed_powi<1>(x); }, body);
      case 2:
        return for_each_column<StoreBase>(
            v, params, [](double x) { return fixed_powi<2>(x); }, body);
      case 3:
        return for_each_column<StoreBase>(
            v, params, [](double x) { return fixed_powi<3>(x); }, body);
      case 4:
        return for_each_column<StoreBase>(
            v, params, [](double x) { return fixed_powi<4>(x); }, body);
      case 5:
        return for_each_column<StoreBase>(
            v, params, [](double x) { return fixed_powi<5>(x); }, body);
      case 6:
        return for_each_column<StoreBase>(
            v, params, [](double x) { return fixed_powi<6>(x); }, body);
      case 7:
        return for_each_column<StoreBase>(
            v, params, [](double x) { return fixed_powi<7>(x); }, body);
      case 9:
        return for_each_column<StoreBase>(
            v, params, [](double x) { return fixed_powi<9>(x); }, body);
      default:
        return for_each_column<StoreBase>(
            v, params,
            [p = e.k_int - 1](double x) { return runtime_powi(x, p); }, body);
    }
  }
  return for_each_column<StoreBase>(
      v, params,
      [p = e.k - 1.0](double x) { return x == 0.0 ? 0.0 : std::pow(x, p); },
      body);
}

}  // namespace

std::vector<double> transition_kernel(std::span<const double> values,
                                      const TsallisParams& params, double dx) {
  const int n = static_cast<int>(values.size());
  std::vector<double> kernel(static_cast<size_t>(n) * n);
  if (params.q == 1.0) {
    const double s = 1.0 / params.eta;
    const SliceStats st = stats(values);
    std::vector<double> t(n);
    double total = 0.0;
    for (int d = 0; d < n; ++d) {
      t[d] = std::exp(s * (values[d] - st.vmax));
      total += t[d] * dx;
    }
    // Classical softmax: identical columns.
    for (int d = 0; d < n; ++d) {
      const double kd = t[d] / total;
      for (int r = 0; r < n; ++r) kernel[static_cast<size_t>(d) * n + r] = kd;
    }
    return kernel;
  }
  run_columns<true>(
      values, params,
      [&](int r, double, double sk, std::span<const double> tkm1,
          std::span<const double> basen) {
        const double inv_sd = 1.0 / (sk * dx);
        for (int d = 0; d < n; ++d) {
          kernel[static_cast<size_t>(d) * n + r] = tkm1[d] * basen[d] * inv_sd;
        }
      });
  return kernel;
}

void softmax_log_terms(std::span<const double> values,
                       const TsallisParams& params, double dx,
                       std::span<double> out) {
  const int n = static_cast<int>(values.size());
  if (params.q == 1.0) {
    const double s = 1.0 / params.eta;
    const SliceStats st = stats(values);
    double total = 0.0;
    for (int d = 0; d < n; ++d) {
      total += std::exp(s * (values[d] - st.vmax)) * dx;
    }
    const double log_total = std::log(total) + s * st.vmax;
    for (int r = 0; r < n; ++r) {
      out[r] = params.eta * (log_total - s * values[r]);
    }
    return;
  }
  const double omq = 1.0 - params.q;
  run_columns<false>(
      values, params,
      [&](int r, double pivot, double sk, std::span<const double>,
          std::span<const double>) {
        // D = pivot^k (sk dx)  =>  D^{1-q} = pivot (sk dx)^{1-q}
        const double d_pow = pivot * std::pow(sk * dx, omq);
        out[r] = params.eta * (d_pow - 1.0) / omq;
      });
}

void conservation_step(std::span<const double> values,
                       std::span<const double> mu,
                       const TsallisParams& params, double dx, double dt,
                       std::span<double> mu_next) {
  const int n = static_cast<int>(values.size());
  if (params.q == 1.0) {
    const double s = 1.0 / params.eta;
    const SliceStats st = stats(values);
    std::vector<double> t(n);
    double total = 0.0;
    for (int d = 0; d < n; ++d) {
      t[d] = std::exp(s * (values[d] - st.vmax));
      total += t[d] * dx;
    }
    double mass = 0.0;
    for (int r = 0; r < n; ++r) mass += mu[r];
    double outflow = 0.0;  // identical for every column
    for (int d = 0; d < n; ++d) outflow += (t[d] / total) * dx;
    for (int l = 0; l < n; ++l) {
      const double inflow = (t[l] / total) * mass * dx;
      mu_next[l] = mu[l] * (1.0 - dt * outflow) + dt * inflow;
    }
    return;
  }
  std::vector<double> inflow(n, 0.0);
  std::vector<double> outflow(n, 0.0);
  run_columns<false>(
      values, params,
      [&](int r, double, double sk, std::span<const double> tkm1,
          std::span<const double>) {
        // Kq(d,r) = basen^{k-1} / (sk dx)^q; the pivot powers cancel.
        const double inv_sq = 1.0 / std::pow(sk * dx, params.q);
        const double w = mu[r] * dx * inv_sq;
        double colq = 0.0;
        for (int d = 0; d < n; ++d) {
          colq += tkm1[d];
          inflow[d] += tkm1[d] * w;
        }
        outflow[r] = colq * inv_sq * dx;
      });
  for (int l = 0; l < n; ++l) {
    mu_next[l] = mu[l] * (1.0 - dt * outflow[l]) + dt * inflow[l];
  }
}

std::vector<double> step_with_kernel(std::span<const double> mu,
                                     std::span<const double> kernel,
                                     const TsallisParams& params, double dx,
                                     double dt) {
  const int n = static_cast<int>(mu.size());
  if (kernel.size() != static_cast<size_t>(n) * n) {
    throw ShapeMismatch("step_with_kernel: kernel shape mismatch");
  }
  std::vector<double> kq(static_cast<size_t>(n) * n);
  for (size_t j = 0; j < kq.size(); ++j) {
    kq[j] = params.q == 1.0 ? kernel[j] : std::pow(kernel[j], params.q);
  }
  std::vector<double> mu_next(n);
  for (int l = 0; l < n; ++l) {
    double inflow = 0.0;
    for (int m = 0; m < n; ++m) {
      inflow += kq[static_cast<size_t>(l) * n + m] * mu[m] * dx;
    }
    double outflow = 0.0;
    for (int m = 0; m < n; ++m) {
      outflow += kq[static_cast<size_t>(m) * n + l] * dx;
    }
    mu_next[l] = mu[l] * (1.0 - dt * outflow) + dt * inflow;
  }
  return mu_next;
}

}  // namespace logitmfg
