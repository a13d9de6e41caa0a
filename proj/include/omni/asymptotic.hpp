#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "omni/error.hpp"

namespace omni {

/// Arguments of the large-k normalised sum-rate formulas.
struct AsymptoticParams {
  int n = 0;
  int n1 = 0;
  double p = 0.5;

  double q() const noexcept { return 1.0 - p; }

  void validate() const {
    if (!(n1 > 1 && n1 <= n - 1)) throw Error(ErrorCode::InvalidArgument, "need 1 < n1 <= n - 1");
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidArgument, "p must lie strictly between 0 and 1");
  }
};

struct AsymptoticRates {
  double slo = 0;
  double sgo = 0;
  double cde = 0;
};

/// Total sum rate divided by k, for large k: successive local, successive
/// global, and single-round exchange.
inline AsymptoticRates asymptotic_rates(const AsymptoticParams& a) {
  a.validate();
  const double n = a.n, n1 = a.n1, q = a.q();
  const double qn = std::pow(q, a.n), qn1 = std::pow(q, a.n1);
  AsymptoticRates r;
  r.slo = n1 * (q - qn1) / ((n1 - 1) * (1 - qn1)) + (qn1 - qn) / (1 - qn);
  r.sgo = ((n - n1 + 1) * q - (n - n1) * qn - std::pow(q, a.n - a.n1 + 1)) / ((n - n1) * (1 - qn));
  r.cde = n * (q - qn) / ((n - 1) * (1 - qn));
  return r;
}

struct ExcessRates {
  double slo = 0;
  double sgo = 0;
};

/// Relative excess of each successive scheme over the single-round rate.
inline ExcessRates excess_rates(const AsymptoticParams& a) {
  const auto r = asymptotic_rates(a);
  return {(r.slo - r.cde) / r.cde, (r.sgo - r.cde) / r.cde};
}

inline double excess_gap(int n, int n1, double p) {
  const auto e = excess_rates({n, n1, p});
  return e.slo - e.sgo;
}

inline constexpr double kSearchTolerance = 1e-9;

/// Probability p* where the local scheme's excess drops below the global
/// one's. Scans p on a 1e-3 grid for the first sign change of
/// e_slo - e_sgo, then bisects to kSearchTolerance.
inline double find_crossover(int n, int n1) {
  AsymptoticParams{n, n1, 0.5}.validate();
  constexpr int kGrid = 1000;
  double lo = -1, hi = -1;
  double prev = excess_gap(n, n1, 1.0 / kGrid);
  for (int i = 2; i < kGrid; ++i) {
    const double p = static_cast<double>(i) / kGrid;
    const double cur = excess_gap(n, n1, p);
    if ((prev >= 0) != (cur >= 0)) {
      lo = static_cast<double>(i - 1) / kGrid;
      hi = p;
      break;
    }
    prev = cur;
  }
  if (lo < 0) throw Error(ErrorCode::NoSignChange, "e_slo - e_sgo keeps one sign on (0, 1)");
  const bool lo_nonneg = excess_gap(n, n1, lo) >= 0;
  while (hi - lo > kSearchTolerance) {
    const double mid = 0.5 * (lo + hi);
    if ((excess_gap(n, n1, mid) >= 0) == lo_nonneg)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Interior minimiser p_* of e_slo(p) by golden-section search on
/// [1e-3, 1 - 1e-3]; meaningful when 1 < n1 <= n/2.
inline double find_slo_minimum(int n, int n1) {
  AsymptoticParams{n, n1, 0.5}.validate();
  auto f = [&](double p) { return excess_rates({n, n1, p}).slo; };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 1e-3, b = 1.0 - 1e-3;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > kSearchTolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct SweepRow {
  double p = 0;
  int n = 0;
  int n1 = 0;
  double e_slo = 0;
  double e_sgo = 0;
};

/// Excess rates on `steps` evenly spaced p values in [pmin, pmax] for each n1.
/// Rows are ordered by p, then by n1 in the order given.
inline std::vector<SweepRow> excess_sweep(int n, const std::vector<int>& n1_values, double pmin, double pmax,
                                          int steps) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "steps must be positive");
  if (!(pmin > 0 && pmax < 1 && pmin <= pmax)) throw Error(ErrorCode::InvalidArgument, "need 0 < pmin <= pmax < 1");
  if (steps > 1 && !(pmin < pmax)) throw Error(ErrorCode::InvalidArgument, "need pmin < pmax for several steps");
  std::vector<SweepRow> rows;
  for (int s = 0; s < steps; ++s) {
    const double p = steps == 1 ? pmin : pmin + (pmax - pmin) * s / (steps - 1);
    for (int n1 : n1_values) {
      const auto e = excess_rates({n, n1, p});
      rows.push_back({p, n, n1, e.slo, e.sgo});
    }
  }
  return rows;
}

}  // namespace omni
