#include "pencilzeta/geometry.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "pencilzeta/errors.hpp"

namespace pz {

namespace {

qmat point_diffs(const std::vector<lattice_point>& pts,
                 const std::vector<size_t>& idx) {
  qmat out;
  for (size_t t = 1; t < idx.size(); ++t) {
    qvec row;
    for (size_t c = 0; c < pts[idx[0]].size(); ++c)
      row.emplace_back(static_cast<long>(pts[idx[t]][c] - pts[idx[0]][c]),
                       1L);
    out.push_back(std::move(row));
  }
  return out;
}

int affine_dim(const std::vector<lattice_point>& pts,
               const std::vector<size_t>& idx) {
  if (idx.empty()) return -1;
  return rank_q(point_diffs(pts, idx));
}

mpq_class dot(const qvec& w, const lattice_point& p) {
  mpq_class acc = 0;
  for (size_t c = 0; c < p.size(); ++c)
    if (p[c] != 0) acc += w[c] * mpq_class(static_cast<long>(p[c]), 1L);
  return acc;
}

// Greedy row basis: rows of `a` that increase the rank, in order.
qmat row_basis(const qmat& a) {
  qmat basis;
  for (const auto& row : a) {
    basis.push_back(row);
    if (rank_q(basis) != static_cast<int>(basis.size())) basis.pop_back();
  }
  return basis;
}

}  // namespace

newton_polytope faces(const std::vector<lattice_point>& support) {
  if (support.empty()) fail(errc::empty_input, "empty support");
  if (support.size() > 32) fail(errc::too_large, "more than 32 support points");
  const size_t m = support[0].size();
  if (m == 0) fail(errc::invalid_argument, "zero-dimensional exponent vectors");
  const size_t npts = support.size();
  for (const auto& p : support)
    if (p.size() != m) fail(errc::invalid_argument, "ragged support points");
  {
    auto dedup = support;
    std::sort(dedup.begin(), dedup.end());
    if (std::adjacent_find(dedup.begin(), dedup.end()) != dedup.end())
      fail(errc::invalid_argument, "duplicate support points");
  }

  std::vector<size_t> all(npts);
  for (size_t i = 0; i < npts; ++i) all[i] = i;
  const int d = affine_dim(support, all);
  if (d > 6) fail(errc::too_large, "polytope dimension exceeds 6");

  newton_polytope poly;
  poly.support = support;
  poly.dim = d;

  // Facet search: a facet's hyperplane is spanned by d affinely independent
  // support points; its in-hull normal is the one direction of the hull that
  // is orthogonal to the facet.  Orient every facet normal inward
  // (<w, p> >= offset for all support points).
  struct supported {
    qvec normal;
    mpq_class offset;
  };
  std::map<std::vector<size_t>, supported> facet_by_points;

  if (d >= 1) {
    // Row basis of the affine-hull directions: exactly d independent rows, so
    // a genuine facet subset leaves a one-dimensional nullspace below.
    qmat hull = row_basis(point_diffs(support, all));
    if (static_cast<int>(hull.size()) != d)
      fail(errc::internal_check, "hull basis has wrong rank");
    // Enumerate d-subsets via combinations on sorted index vector.
    std::vector<size_t> comb(static_cast<size_t>(d));
    std::function<void(size_t, size_t)> rec = [&](size_t start, size_t chosen) {
      if (chosen == static_cast<size_t>(d)) {
        // Need the subset to span a (d-1)-dimensional flat.
        if (d > 1 && affine_dim(support, comb) != d - 1) return;
        // Solve for u with u * hull orthogonal to the subset diffs:
        // conditions (hull * diff_t) u = 0.
        qmat cond;
        for (size_t t = 1; t < comb.size(); ++t) {
          qvec row(hull.size());
          for (size_t hrow = 0; hrow < hull.size(); ++hrow) {
            mpq_class acc = 0;
            for (size_t c = 0; c < m; ++c)
              acc += hull[hrow][c] *
                     mpq_class(static_cast<long>(support[comb[t]][c] -
                                                 support[comb[0]][c]),
                               1L);
            row[hrow] = acc;
          }
          cond.push_back(std::move(row));
        }
        std::vector<qvec> null =
            cond.empty() ? std::vector<qvec>{qvec{mpq_class(1)}} : nullspace(cond);
        if (null.size() != 1) return;  // subset does not determine a hyperplane
        // Ambient normal w = u * hull.
        qvec w(m, mpq_class(0));
        for (size_t hrow = 0; hrow < hull.size(); ++hrow)
          for (size_t c = 0; c < m; ++c) w[c] += null[0][hrow] * hull[hrow][c];
        // Orient and test support.
        mpq_class base = dot(w, support[comb[0]]);
        bool any_below = false, any_above = false;
        for (size_t i = 0; i < npts; ++i) {
          mpq_class v = dot(w, support[i]);
          if (v < base) any_below = true;
          if (v > base) any_above = true;
        }
        if (any_below && any_above) return;  // not supporting
        if (any_below)
          for (auto& c : w) c = -c;  // flip so the face is the minimum side
        mpq_class offset = dot(w, support[comb[0]]);
        std::vector<size_t> face_pts;
        for (size_t i = 0; i < npts; ++i)
          if (dot(w, support[i]) == offset) face_pts.push_back(i);
        facet_by_points.emplace(face_pts, supported{w, offset});
        return;
      }
      if (npts - start < static_cast<size_t>(d) - chosen) return;
      for (size_t i = start; i < npts; ++i) {
        comb[chosen] = i;
        rec(i + 1, chosen + 1);
      }
    };
    rec(0, 0);
  }

  // Face lattice = intersections of facets, plus the polytope itself.
  std::set<std::vector<size_t>> face_sets;
  face_sets.insert(all);
  for (const auto& [pts, _] : facet_by_points) face_sets.insert(pts);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::vector<size_t>> snapshot(face_sets.begin(), face_sets.end());
    for (size_t i = 0; i < snapshot.size(); ++i)
      for (size_t j = i + 1; j < snapshot.size(); ++j) {
        std::vector<size_t> inter;
        std::set_intersection(snapshot[i].begin(), snapshot[i].end(),
                              snapshot[j].begin(), snapshot[j].end(),
                              std::back_inserter(inter));
        if (!inter.empty() && !face_sets.count(inter)) {
          face_sets.insert(inter);
          grew = true;
        }
      }
  }

  // Normal for the top face: constant on the support.
  qvec top_normal(m, mpq_class(0));
  mpq_class top_offset = 0;
  if (d < static_cast<int>(m)) {
    qmat cond = point_diffs(support, all);  // w orthogonal to all hull diffs
    if (cond.empty()) {
      top_normal[0] = 1;  // single point: any direction supports it
    } else {
      auto null = nullspace(cond);
      if (null.empty())
        fail(errc::internal_check, "missing affine-hull equality normal");
      top_normal = null[0];
    }
    top_offset = dot(top_normal, support[0]);
  }

  for (const auto& pts : face_sets) {
    polytope_face f;
    f.points = pts;
    f.dim = affine_dim(support, pts);
    if (pts.size() == npts) {
      f.normal = top_normal;
      f.offset = top_offset;
    } else {
      // Sum of the normals of all facets containing this face supports
      // exactly their intersection.
      qvec w(m, mpq_class(0));
      mpq_class off = 0;
      for (const auto& [fpts, sup] : facet_by_points)
        if (std::includes(fpts.begin(), fpts.end(), pts.begin(), pts.end())) {
          for (size_t c = 0; c < m; ++c) w[c] += sup.normal[c];
          off += sup.offset;
        }
      f.normal = std::move(w);
      f.offset = off;
      for (size_t i = 0; i < npts; ++i) {
        mpq_class v = dot(f.normal, support[i]);
        bool on = std::binary_search(pts.begin(), pts.end(), i);
        if (on ? (v != f.offset) : (v <= f.offset))
          fail(errc::internal_check, "face normal does not isolate its face");
      }
    }
    poly.faces.push_back(std::move(f));
  }
  std::sort(poly.faces.begin(), poly.faces.end(),
            [](const polytope_face& a, const polytope_face& b) {
              if (a.dim != b.dim) return a.dim < b.dim;
              return a.points < b.points;
            });
  for (const auto& f : poly.faces)
    if (f.points.size() == 1) poly.vertices.push_back(f.points[0]);
  if (npts == 1) poly.vertices = {0};
  std::sort(poly.vertices.begin(), poly.vertices.end());
  return poly;
}

bool is_convenient(const std::vector<lattice_point>& support,
                   const std::vector<size_t>& variable_subset) {
  if (support.empty()) fail(errc::empty_input, "empty support");
  const size_t m = support[0].size();
  for (size_t v : variable_subset)
    if (v >= m) fail(errc::invalid_argument, "variable index out of range");

  auto span_dim = [&](unsigned mask) {
    zmat rows;
    for (const auto& p : support) {
      bool keep = true;
      for (size_t t = 0; t < variable_subset.size(); ++t)
        if ((mask >> t) & 1u)
          if (p[variable_subset[t]] != 0) keep = false;
      if (!keep) continue;
      zvec row;
      for (long long e : p) row.emplace_back(static_cast<long>(e));
      rows.push_back(std::move(row));
    }
    if (rows.empty()) return 0;
    return rank_z(rows);
  };

  const int full = span_dim(0);
  for (unsigned mask = 0; mask < (1u << variable_subset.size()); ++mask) {
    int drop = __builtin_popcount(mask);
    if (span_dim(mask) != full - drop) return false;
  }
  return true;
}

degeneracy_report degeneracy_search(const pencil_spec& pencil, const fq& field,
                                    fq::elem psi, unsigned k_max,
                                    unsigned long long budget) {
  const size_t nvars = pencil.a.size();
  degeneracy_report report;
  if (k_max == 0) return report;

  // Monomials of the fiber: the matrix rows with coefficient 1, plus the
  // deformation monomial (1,...,1) with coefficient -coefficient*psi when
  // that product is nonzero in the field.
  std::vector<lattice_point> supp;
  for (size_t i = 0; i < nvars; ++i) {
    lattice_point row;
    for (size_t j = 0; j < nvars; ++j) row.push_back(pencil.a.at(i, j));
    supp.push_back(std::move(row));
  }
  const fq::elem deform_base =
      field.mul(field.from_int(-pencil.coefficient), psi);
  const bool has_deform = deform_base != 0;
  if (has_deform) supp.push_back(lattice_point(nvars, 1));

  newton_polytope poly = faces(supp);

  for (unsigned k = 1; k <= k_max; ++k) {
    if (report.systems_checked >= budget)
      fail(errc::budget_exceeded, "degeneracy search budget exhausted");
    fq ext = k == 1 ? field : fq::make(field.p(), field.r() * k);
    const auto embed = fq::embedding(field, ext);
    const fq::elem deform = embed[deform_base];
    const uint64_t qk = ext.q();

    // Per point: values of all monomials, then one linear pass per face.
    std::vector<fq::elem> x(nvars, 1);
    std::vector<fq::elem> mono(supp.size());
    // Lexicographic enumeration over nonzero codes 1..qk-1 per coordinate.
    std::vector<uint64_t> code(nvars, 1);
    bool done = false;
    while (!done) {
      for (size_t i = 0; i < nvars; ++i) x[i] = static_cast<fq::elem>(code[i]);
      for (size_t t = 0; t < supp.size(); ++t) {
        fq::elem v = t < nvars ? 1 : deform;
        for (size_t j = 0; j < nvars; ++j) {
          long long e = supp[t][j];
          if (e != 0) v = ext.mul(v, ext.pow(x[j], static_cast<uint64_t>(e)));
        }
        mono[t] = v;
      }
      for (const auto& face : poly.faces) {
        if (report.systems_checked >= budget)
          fail(errc::budget_exceeded, "degeneracy search budget exhausted");
        ++report.systems_checked;
        bool derivatives_vanish = true;
        for (size_t i = 0; i < nvars && derivatives_vanish; ++i) {
          fq::elem s = 0;
          for (size_t t : face.points)
            s = ext.add(s, ext.mul_int(mono[t], supp[t][i]));
          if (s != 0) derivatives_vanish = false;
        }
        if (!derivatives_vanish) continue;
        degeneracy_witness w;
        w.extension = k;
        w.point.assign(x.begin(), x.end());
        w.face = face.points;
        if (!report.infinity) report.infinity = w;
        fq::elem value = 0;
        for (size_t t : face.points) value = ext.add(value, mono[t]);
        if (value == 0 && !report.newton) {
          report.newton = w;
          return report;  // newton witness implies infinity witness
        }
      }
      // advance lexicographic counter
      size_t pos = nvars;
      while (pos > 0) {
        --pos;
        if (++code[pos] < qk) break;
        code[pos] = 1;
        if (pos == 0) done = true;
      }
      if (nvars == 0) done = true;
    }
  }
  return report;
}

const char* smoothness_verdict_name(smoothness_verdict v) {
  switch (v) {
    case smoothness_verdict::smooth: return "smooth";
    case smoothness_verdict::singular: return "singular";
    case smoothness_verdict::excluded: return "excluded";
  }
  return "unknown";
}

smoothness_verdict known_smoothness(const family_entry& family, const fq& field,
                                    fq::elem psi) {
  for (long long bad : family.excluded_characteristics)
    if (field.p() == static_cast<uint64_t>(bad)) return smoothness_verdict::excluded;
  // The fiber at psi is singular exactly where the pencil discriminant
  //   (prod_i q_i^{q_i}) * psi^{d^T} = 1
  // vanishes, with q the dual weights and d^T their sum.  For the all-ones
  // weight families the product is 1 and this reduces to psi^{n+1} = 1; for
  // the dual-weight-(4,2,3,3) chain families the product is 746496 and the
  // singular parameters satisfy psi^12 = 1/746496 (solving the critical
  // equations directly pins x_0^3 = 2 and x_0 = +-12 psi^2 on the torus, so
  // +-1728 psi^6 = 2).  In the excluded characteristics the derivation's
  // divisions fail and no verdict is offered.
  const weight_data w = dual_weights(family.matrix);
  fq::elem lhs = field.pow(psi, static_cast<uint64_t>(w.dual_degree));
  for (int64_t q : w.dual)
    lhs = field.mul(lhs, field.pow(field.from_int(q), static_cast<uint64_t>(q)));
  if (lhs == field.from_int(1)) return smoothness_verdict::singular;
  return smoothness_verdict::smooth;
}

}  // namespace pz
