// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "nmfid/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nmfid/errors.hpp"
#include "nmfid/linalg.hpp"
#include "nmfid/linprog.hpp"
#include "nmfid/rng.hpp"

namespace nmfid {

namespace {

constexpr int kMaxExactRank = 8;

Vector normalized(Vector v) {
  const double n = norm2(v);
  for (double& e : v) e /= n;
  return v;
}

// Rows of h with unit ℓ₂ norm; zero rows are dropped (they constrain nothing).
struct NormalizedRows {
  Matrix h;                    // normalized nonzero rows
  std::vector<int> original;   // original row index per kept row
};

NormalizedRows normalize_rows(const Matrix& h) {
  NormalizedRows out;
  std::vector<Vector> kept;
  for (int i = 0; i < h.rows(); ++i) {
    const double n = norm2(h.row(i));
    if (n == 0.0) continue;
    kept.push_back(scaled(h.row(i), 1.0 / n));
    out.original.push_back(i);
  }
  out.h = Matrix(static_cast<int>(kept.size()), h.cols());
  for (std::size_t i = 0; i < kept.size(); ++i)
    out.h.set_row(static_cast<int>(i), kept[i]);
  return out;
}

// Indices of r linearly independent rows, chosen by greedy partial pivoting.
std::vector<int> independent_rows(const Matrix& h, double tol) {
  const int n = h.rows(), r = h.cols();
  Matrix work = h;
  std::vector<int> rowidx(n);
  std::iota(rowidx.begin(), rowidx.end(), 0);
  std::vector<int> chosen;
  int row = 0;
  for (int col = 0; col < r && row < n; ++col) {
    int piv = -1;
    double best = tol;
    for (int i = row; i < n; ++i) {
      const double v = std::fabs(work(i, col));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (piv < 0) continue;
    if (piv != row) {
      for (int j = 0; j < r; ++j) std::swap(work(row, j), work(piv, j));
      std::swap(rowidx[row], rowidx[piv]);
    }
    chosen.push_back(rowidx[row]);
    for (int i = row + 1; i < n; ++i) {
      const double f = work(i, col) / work(row, col);
      if (f == 0.0) continue;
      for (int j = col; j < r; ++j) work(i, j) -= f * work(row, j);
    }
    ++row;
  }
  return chosen;
}

int rank_of_rows(const Matrix& h, const std::vector<int>& rows, double tol) {
  if (rows.empty()) return 0;
  Matrix sub(static_cast<int>(rows.size()), h.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    sub.set_row(static_cast<int>(i), h.row(rows[i]));
  return numeric_rank(std::move(sub), tol);
}

std::vector<int> intersect_sorted(const std::vector<int>& a,
                                  const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

void insert_sorted(std::vector<int>& v, int value) {
  v.insert(std::lower_bound(v.begin(), v.end(), value), value);
}

}  // namespace

double soc_margin(std::span<const double> x, SecondOrderConeSpec spec) {
  const double kappa =
      spec.kind == ConeKind::C ? std::sqrt(static_cast<double>(spec.r - 1)) : 1.0;
  return sum(x) - kappa * norm2(x);
}

Membership soc_member(std::span<const double> x, SecondOrderConeSpec spec,
                      double tol) {
  const double nx = norm2(x);
  if (nx == 0.0) throw ZeroVector("soc_member: zero vector");
  const double m = soc_margin(x, spec);
  if (std::fabs(m) <= tol * nx) return Membership::Boundary;
  return m > 0.0 ? Membership::Interior : Membership::Outside;
}

ExtremeRaySet dual_cone_extreme_rays(const Matrix& h, double tol,
                                     std::size_t ray_cap) {
  const int r = h.cols();
  if (r < 1 || h.rows() < r)
    throw ShapeMismatch("dual_cone_extreme_rays: need N ≥ r ≥ 1");
  if (r > kMaxExactRank)
    throw UnsupportedRank("exact ray enumeration supports r ≤ 8");

  NormalizedRows nr = normalize_rows(h);
  const Matrix& hn = nr.h;
  const int n = hn.rows();
  if (numeric_rank(hn, tol) < r)
    throw RankDeficient("dual_cone_extreme_rays: rank(H) < r");

  // Pointed start: r independent rows H_B give the simplicial cone
  // {y : H_B y ≥ 0} whose extreme rays are the columns of H_B⁻¹.
  std::vector<int> base = independent_rows(hn, tol);
  Matrix hb(r, r);
  for (int i = 0; i < r; ++i) hb.set_row(i, hn.row(base[i]));
  Matrix hbinv = inverse(hb);

  struct Ray {
    Vector y;
    std::vector<int> active;  // sorted indices into hn, processed rows only
  };
  std::vector<Ray> rays;
  for (int j = 0; j < r; ++j) {
    Ray ray;
    ray.y = normalized(hbinv.col(j));
    for (int i = 0; i < r; ++i)
      if (i != j) ray.active.push_back(base[i]);
    std::sort(ray.active.begin(), ray.active.end());
    rays.push_back(std::move(ray));
  }

  std::vector<bool> in_base(n, false);
  for (int i : base) in_base[i] = true;
  // Two rays are adjacent iff their common active rows have rank r−2.
  auto adjacent = [&](const Ray& a, const Ray& b) {
    std::vector<int> common = intersect_sorted(a.active, b.active);
    if (static_cast<int>(common.size()) < r - 2) return false;
    return rank_of_rows(hn, common, tol) == r - 2;
  };

  for (int row = 0; row < n; ++row) {
    if (in_base[row]) continue;
    Vector vals(rays.size());
    bool any_neg = false;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      vals[i] = dot(hn.row(row), rays[i].y);
      if (vals[i] < -tol) any_neg = true;
    }
    if (!any_neg) {
      for (std::size_t i = 0; i < rays.size(); ++i)
        if (std::fabs(vals[i]) <= tol) insert_sorted(rays[i].active, row);
      continue;
    }

    std::vector<Ray> next;
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (vals[i] > tol) {
        pos.push_back(i);
        next.push_back(rays[i]);
      } else if (vals[i] >= -tol) {
        Ray kept = rays[i];
        insert_sorted(kept.active, row);
        next.push_back(std::move(kept));
      } else {
        neg.push_back(i);
      }
    }
    for (std::size_t ip : pos) {
      for (std::size_t in : neg) {
        if (!adjacent(rays[ip], rays[in])) continue;
        Ray combo;
        const double wp = vals[ip];
        const double wn = vals[in];
        combo.y.resize(r);
        for (int d = 0; d < r; ++d)
          combo.y[d] = wp * rays[in].y[d] - wn * rays[ip].y[d];
        combo.y = normalized(std::move(combo.y));
        combo.active = intersect_sorted(rays[ip].active, rays[in].active);
        combo.active.push_back(row);
        std::sort(combo.active.begin(), combo.active.end());
        next.push_back(std::move(combo));
        if (next.size() > ray_cap)
          throw ExplosionGuard("ray count exceeded the configured cap");
      }
    }
    rays = std::move(next);
  }

  // Finalize: exact active sets against all rows, extremality check, and
  // dedup of coincident directions.
  ExtremeRaySet out;
  for (const Ray& ray : rays) {
    std::vector<int> active;
    for (int i = 0; i < n; ++i)
      if (std::fabs(dot(hn.row(i), ray.y)) <= tol) active.push_back(i);
    if (rank_of_rows(hn, active, tol) != r - 1) continue;
    bool dup = false;
    for (const Vector& seen : out.rays) {
      if (dot(seen, ray.y) >= 1.0 - 1e-12) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    std::vector<int> original;
    for (int i : active) original.push_back(nr.original[i]);
    out.rays.push_back(ray.y);
    out.active_sets.push_back(std::move(original));
  }

  // Deterministic order: lexicographic by coordinates.
  std::vector<std::size_t> order(out.rays.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.rays[a] < out.rays[b];
  });
  ExtremeRaySet sorted;
  for (std::size_t i : order) {
    sorted.rays.push_back(std::move(out.rays[i]));
    sorted.active_sets.push_back(std::move(out.active_sets[i]));
  }
  return sorted;
}

SeparabilityReport check_separability(const Matrix& h, double tol) {
  const int n = h.rows(), r = h.cols();
  if (min_entry(h) < -tol)
    throw NegativeData("check_separability: H has negative entries");
  SeparabilityReport rep;
  rep.witness.assign(r, -1);
  for (int i = 0; i < n; ++i) {
    int arg = 0;
    double mx = 0.0;
    for (int j = 0; j < r; ++j) {
      if (h(i, j) > mx) {
        mx = h(i, j);
        arg = j;
      }
    }
    if (mx <= tol) continue;
    bool coordinate = true;
    for (int j = 0; j < r; ++j) {
      if (j == arg) continue;
      if (std::fabs(h(i, j)) > tol * mx) {
        coordinate = false;
        break;
      }
    }
    if (coordinate && rep.witness[arg] < 0) rep.witness[arg] = i;
  }
  rep.separable =
      std::none_of(rep.witness.begin(), rep.witness.end(),
                   [](int w) { return w < 0; });
  return rep;
}

ScatterVerdict check_sufficiently_scattered(const Matrix& h, double tol) {
  const int r = h.cols();
  if (min_entry(h) < -tol)
    throw NegativeData("check_sufficiently_scattered: H has negative entries");

  ScatterVerdict verdict;
  verdict.mode = CheckMode::Exact;
  verdict.separability = check_separability(h, tol);
  verdict.rays = dual_cone_extreme_rays(h, tol);

  const SecondOrderConeSpec cstar{r, ConeKind::CStar};
  verdict.ray_margins.resize(verdict.rays.rays.size());
  verdict.scattered = Scattered::Yes;
  for (std::size_t i = 0; i < verdict.rays.rays.size(); ++i) {
    const Vector& y = verdict.rays.rays[i];
    verdict.ray_margins[i] = soc_margin(y, cstar);
    const Membership m = soc_member(y, cstar, tol);
    if (m == Membership::Outside) {
      verdict.scattered = Scattered::No;
      verdict.certificate = {"ray-outside", y, verdict.ray_margins[i]};
      return verdict;
    }
    if (m == Membership::Boundary) {
      // Boundary contact is allowed only along coordinate directions.
      int arg = 0;
      double mx = 0.0;
      for (int d = 0; d < r; ++d) {
        if (std::fabs(y[d]) > mx) {
          mx = std::fabs(y[d]);
          arg = d;
        }
      }
      bool coordinate = y[arg] > 0.0;
      for (int d = 0; d < r && coordinate; ++d)
        if (d != arg && std::fabs(y[d]) > tol) coordinate = false;
      if (!coordinate) {
        verdict.scattered = Scattered::No;
        verdict.certificate = {"boundary-not-coordinate", y,
                               verdict.ray_margins[i]};
        return verdict;
      }
    }
  }

  // Coordinate vectors always lie in the dual cone when H ≥ 0; asserted to
  // catch tolerance bugs.
  for (int k = 0; k < r; ++k) {
    for (int i = 0; i < h.rows(); ++i) {
      if (h(i, k) < -tol)
        throw Error("coordinate vector left the dual cone; tolerance bug");
    }
  }
  return verdict;
}

ScatterVerdict refute_by_sampling(const Matrix& h, int n_samples,
                                  std::uint64_t seed, double feas_tol) {
  const int n = h.rows(), r = h.cols();
  if (min_entry(h) < -feas_tol)
    throw NegativeData("refute_by_sampling: H has negative entries");

  ScatterVerdict verdict;
  verdict.mode = CheckMode::Sampling;
  verdict.separability = check_separability(h, feas_tol);
  verdict.scattered = Scattered::Unknown;
  if (r < 2) return verdict;  // bd C degenerates to the origin

  std::mt19937_64 rng = make_rng(substream_seed(seed, "scatter-sampling"));
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Membership in cone(Hᵀ): ∃θ ≥ 0 with Hᵀθ = x.
  LinearProgram lp;
  lp.objective.assign(n, 0.0);
  lp.eq_lhs = transpose(h);
  lp.eq_rhs.assign(r, 0.0);
  lp.lower.assign(n, 0.0);

  const double radial = std::sqrt((r - 1.0) / r);
  for (int s = 0; s < n_samples; ++s) {
    Vector v(r);
    double vsum;
    double vnorm;
    do {
      for (int d = 0; d < r; ++d) v[d] = gauss(rng);
      vsum = sum(v) / r;
      for (int d = 0; d < r; ++d) v[d] -= vsum;  // project out the 1 direction
      vnorm = norm2(v);
    } while (vnorm < 1e-12);
    Vector x(r);
    for (int d = 0; d < r; ++d) x[d] = radial + v[d] / vnorm;

    // The equality tolerance scales with ‖x‖ which is √(r) here; feas_tol
    // is used directly since x is O(1).
    for (int d = 0; d < r; ++d) lp.eq_rhs[d] = x[d];
    LpOutcome res = solve_lp(lp, feas_tol);
    if (res.status != LpStatus::Optimal) {
      verdict.scattered = Scattered::No;
      verdict.certificate = {"point-outside-cone", x,
                             soc_margin(x, {r, ConeKind::C})};
      return verdict;
    }
  }
  return verdict;
}

}  // namespace nmfid
