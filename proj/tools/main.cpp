// pencilzeta: command-line surface over the invertible-pencil library.
//
// Thirteen subcommands cover the combinatorial invariants (validate,
// weights, decompose, groups, pf, milnor, faces, smooth) and the arithmetic
// ones (expsum-verify, count, rfactor, compare, r0scan).  Single-record
// commands print one pretty JSON payload on stdout; scan commands (compare,
// r0scan) stream one NDJSON record per cell plus a summary line, or a CSV
// matrix with --format csv.  Stdout is byte-identical across identical
// invocations; timing goes to stderr as a separate metadata line.  Exit
// code 0 iff every verification the invocation executed passed.

#include <pencilzeta/errors.hpp>
#include <pencilzeta/expsum.hpp>
#include <pencilzeta/field.hpp>
#include <pencilzeta/geometry.hpp>
#include <pencilzeta/invertible.hpp>
#include <pencilzeta/milnor.hpp>
#include <pencilzeta/picard_fuchs.hpp>
#include <pencilzeta/registry.hpp>
#include <pencilzeta/zeta.hpp>

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "report.hpp"
#include "scan.hpp"

using namespace pzcli;

namespace {

// ---------------------------------------------------------------------------
// Shared configuration (config file < env < flags, via CLI11).
// ---------------------------------------------------------------------------

struct global_config {
  unsigned threads = 1;
  unsigned long long budget = 1'000'000'000ULL;  // points per cell
  unsigned k_max = 1;                            // degeneracy search depth
  std::string fiber = "2";                       // default Milnor parameter
};

// ---------------------------------------------------------------------------
// Family input: registry name (case-insensitive, "KM(n)"/"Dwork(n)"
// parameterized) or a whitespace-separated exponent matrix file.
// ---------------------------------------------------------------------------

struct family_input {
  std::optional<pz::family_entry> entry;
  pz::exponent_matrix matrix;
  std::string name;

  pz::pencil_spec pencil() const {
    if (entry)
      return pz::make_pencil(entry->matrix, entry->coefficient, entry->name);
    return pz::make_pencil(matrix, pz::pencil_normalization::dual_degree,
                           name);
  }
};

pz::exponent_matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) pz::fail(pz::errc::invalid_argument, "cannot open '" + path + "'");
  pz::exponent_matrix m;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    std::istringstream row(line);
    std::vector<int64_t> vals;
    int64_t v = 0;
    while (row >> v) vals.push_back(v);
    if (!vals.empty()) m.rows.push_back(std::move(vals));
  }
  if (m.rows.empty())
    pz::fail(pz::errc::invalid_argument, "no matrix rows in '" + path + "'");
  for (const auto& r : m.rows)
    if (r.size() != m.rows[0].size())
      pz::fail(pz::errc::invalid_argument, "ragged matrix in '" + path + "'");
  return m;
}

family_input parse_family(const std::string& arg) {
  if (std::filesystem::exists(arg) &&
      std::filesystem::is_regular_file(arg)) {
    family_input fi;
    fi.matrix = read_matrix_file(arg);
    fi.name = arg;
    return fi;
  }
  family_input fi;
  fi.entry = pz::find_family(arg);
  fi.matrix = fi.entry->matrix;
  fi.name = fi.entry->name;
  return fi;
}

// The loop length when the family is the one-Fermat-one-loop pencil:
// "KM(n)" carries it in the name, and the quartic table's F1L3 row is the
// n = 3 member.
std::optional<unsigned> loop_fermat_parameter(const std::string& name) {
  if (name == "F1L3") return 3u;
  if (name.size() >= 5 && (name.rfind("KM(", 0) == 0) && name.back() == ')')
    return static_cast<unsigned>(
        std::stoul(name.substr(3, name.size() - 4)));
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Small parsers.
// ---------------------------------------------------------------------------

std::pair<uint64_t, uint32_t> prime_power(uint64_t q) {
  if (q < 2) pz::fail(pz::errc::invalid_argument, "field size must be >= 2");
  uint64_t p = q;
  for (uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  uint32_t r = 0;
  uint64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++r;
  }
  if (rest != 1)
    pz::fail(pz::errc::invalid_argument,
             "field size " + std::to_string(q) + " is not a prime power");
  return {p, r};
}

pz::fq make_field(uint64_t q) {
  auto [p, r] = prime_power(q);
  return pz::fq::make(p, r);
}

std::vector<uint64_t> parse_u64_list(const std::string& s) {
  std::vector<uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoull(item));
  }
  if (out.empty())
    pz::fail(pz::errc::invalid_argument, "empty list '" + s + "'");
  return out;
}

// "all" -> every code of F_q in field order; otherwise a comma list.
std::vector<uint32_t> parse_psi_set(const std::string& s, uint64_t q) {
  std::vector<uint32_t> out;
  if (s == "all") {
    for (uint64_t c = 0; c < q; ++c) out.push_back(static_cast<uint32_t>(c));
    return out;
  }
  for (uint64_t v : parse_u64_list(s)) {
    if (v >= q)
      pz::fail(pz::errc::invalid_argument,
               "psi code " + std::to_string(v) + " outside F_" +
                   std::to_string(q));
    out.push_back(static_cast<uint32_t>(v));
  }
  return out;
}

ojson matrix_json(const pz::exponent_matrix& m) {
  ojson rows = ojson::array();
  for (const auto& r : m.rows) rows.push_back(jarr(r));
  return rows;
}

std::vector<long long> to_ll(const std::vector<int64_t>& v) {
  return std::vector<long long>(v.begin(), v.end());
}

// ---------------------------------------------------------------------------
// Combinatorial subcommands.
// ---------------------------------------------------------------------------

int cmd_validate(const family_input& fi, const timer& t) {
  pz::validation_report rep = pz::validate(fi.matrix);
  ojson o;
  o["family"] = fi.name;
  o["matrix"] = matrix_json(fi.matrix);
  o["invertible"] = rep.invertible;
  o["calabi_yau"] = rep.calabi_yau;
  o["determinant"] = str(rep.determinant);
  o["primal_weights"] = jarr(to_ll(rep.primal_weights));
  o["primal_degree"] = rep.primal_degree;
  emit(o, t);
  return rep.invertible && rep.calabi_yau ? 0 : 1;
}

int cmd_weights(const family_input& fi, const timer& t) {
  pz::weight_data w = pz::dual_weights(fi.matrix);
  ojson o;
  o["family"] = fi.name;
  o["matrix"] = matrix_json(fi.matrix);
  o["dual_weights"] = jarr(to_ll(w.dual));
  o["dual_degree"] = w.dual_degree;
  o["primal_weights"] = jarr(to_ll(w.primal));
  o["primal_degree"] = w.primal_degree;
  emit(o, t);
  return 0;
}

int cmd_decompose(const family_input& fi, const timer& t) {
  pz::decomposition d = pz::decompose(fi.matrix);
  bool reassembles = pz::reassemble(d) == fi.matrix;
  ojson atoms = ojson::array();
  for (const pz::atom& a : d.atoms) {
    ojson ja;
    ja["kind"] = a.kind == pz::atom_kind::fermat  ? "fermat"
                 : a.kind == pz::atom_kind::loop ? "loop"
                                                  : "chain";
    ja["exponents"] = jarr(to_ll(a.exponents));
    ja["variables"] = jarr(a.variables);
    ja["printed"] = a.to_string();
    atoms.push_back(ja);
  }
  ojson o;
  o["family"] = fi.name;
  o["atoms"] = atoms;
  o["variable_order"] = jarr(d.variable_order);
  o["reassembles"] = reassembles;
  emit(o, t);
  return reassembles ? 0 : 1;
}

int cmd_groups(const family_input& fi, const timer& t) {
  pz::group_data g = pz::symmetry_groups(fi.matrix);
  ojson o;
  o["family"] = fi.name;
  o["aut_order"] = str(g.aut_order);
  o["aut"] = jarr(g.aut);
  o["sl"] = jarr(g.sl);
  o["j"] = jarr(g.j);
  o["sl_mod_j"] = jarr(g.sl_mod_j);
  o["j_generator"] = jarr(g.j_generator);
  if (auto n = loop_fermat_parameter(fi.name)) {
    pz::loop_fermat_group lf = pz::klein_mukai_order(static_cast<int>(*n));
    o["loop_fermat"]["m"] = str(lf.m);
    o["loop_fermat"]["faithful_order"] = str(lf.faithful_order);
  } else {
    o["loop_fermat"] = nullptr;
  }
  emit(o, t);
  return 0;
}

int cmd_pf(const std::vector<long long>& weights, const timer& t) {
  pz::hypergeometric_data hg = pz::hg_data(weights);
  pz::pf_operator_data op = pz::pf_operator(weights);
  pz::cyclotomic_descent_data cd = pz::cyclotomic_descent(weights);
  ojson o;
  o["weights"] = jarr(weights);
  o["alpha"] = jarr(hg.numerator);
  o["beta"] = jarr(hg.denominator);
  o["I"] = jarr(hg.shared);
  o["D"] = hg.order;
  o["operator"]["order"] = op.order;
  o["operator"]["degree"] = op.degree;
  o["operator"]["scalar"] = str(op.scalar);
  o["operator"]["theta"] = jarr(op.theta_poly);
  o["operator"]["theta_z"] = jarr(op.theta_z_poly);
  o["operator"]["delta_psi"] = jarr(op.delta_psi_poly);
  o["operator"]["delta_const"] = jarr(op.delta_const_poly);
  o["g_alpha"] = jarr(cd.g_alpha);
  o["g_beta"] = jarr(cd.g_beta);
  emit(o, t);
  return 0;
}

int cmd_milnor(const family_input& fi, const std::string& fiber,
               unsigned long long cell_budget, const timer& t) {
  mpq_class f(fiber);
  f.canonicalize();
  pz::milnor_report rep = pz::milnor_data(fi.pencil(), f, cell_budget);
  ojson o;
  o["family"] = fi.name;
  o["graded_dims"] = jarr(rep.graded_dims);
  o["invariant_dim"] = rep.invariant_dim;
  o["fiber_used"] = str(rep.fiber);
  emit(o, t);
  return 0;
}

int cmd_faces(const family_input& fi, const std::string& psi,
              const timer& t) {
  mpq_class psi_q(psi);
  psi_q.canonicalize();
  pz::pencil_spec pen = fi.pencil();
  std::vector<pz::lattice_point> support;
  for (const auto& row : pen.a.rows)
    support.emplace_back(row.begin(), row.end());
  if (pen.coefficient != 0 && psi_q != 0)
    support.emplace_back(pen.a.rows[0].size(), 1);
  pz::newton_polytope np = pz::faces(support);
  std::vector<size_t> all_vars(pen.a.rows[0].size());
  for (size_t i = 0; i < all_vars.size(); ++i) all_vars[i] = i;
  bool convenient = pz::is_convenient(support, all_vars);
  ojson jfaces = ojson::array();
  for (const pz::polytope_face& f : np.faces) {
    ojson jf;
    jf["dim"] = f.dim;
    jf["points"] = jarr(f.points);
    jf["normal"] = jarr(f.normal);
    jf["offset"] = str(f.offset);
    jfaces.push_back(jf);
  }
  ojson o;
  o["family"] = fi.name;
  o["psi"] = str(psi_q);
  o["support"] = [&] {
    ojson s = ojson::array();
    for (const auto& p : np.support) s.push_back(jarr(p));
    return s;
  }();
  o["dim"] = np.dim;
  o["vertices"] = jarr(np.vertices);
  o["face_count"] = np.faces.size();
  o["faces"] = jfaces;
  o["convenient_all_vars"] = convenient;
  emit(o, t);
  return 0;
}

ojson witness_json(const std::optional<pz::degeneracy_witness>& w) {
  if (!w) return nullptr;
  ojson o;
  o["extension"] = w->extension;
  o["point"] = jarr(w->point);
  o["face"] = jarr(w->face);
  return o;
}

int cmd_smooth(const std::string& family, uint64_t q, uint32_t psi,
               bool search, unsigned k_max, unsigned long long budget,
               const timer& t) {
  pz::family_entry entry = pz::find_family(family);
  pz::fq field = make_field(q);
  if (psi >= field.q())
    pz::fail(pz::errc::invalid_argument, "psi code outside the field");
  pz::smoothness_verdict v = pz::known_smoothness(entry, field, psi);
  ojson o;
  o["family"] = entry.name;
  o["p"] = field.p();
  o["q"] = field.q();
  o["psi"] = psi;
  o["verdict"] = pz::smoothness_verdict_name(v);
  bool consistent = true;
  if (search) {
    pz::pencil_spec pen =
        pz::make_pencil(entry.matrix, entry.coefficient, entry.name);
    pz::degeneracy_report rep =
        pz::degeneracy_search(pen, field, psi, k_max, budget);
    consistent = !(v == pz::smoothness_verdict::smooth && rep.newton);
    o["search"]["k_max"] = k_max;
    o["search"]["systems_checked"] = rep.systems_checked;
    o["search"]["newton_witness"] = witness_json(rep.newton);
    o["search"]["infinity_witness"] = witness_json(rep.infinity);
    o["search"]["consistent"] = consistent;
  } else {
    o["search"] = nullptr;
  }
  emit(o, t);
  return consistent ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Arithmetic subcommands.
// ---------------------------------------------------------------------------

int cmd_expsum_verify(const family_input& fi, uint64_t q, uint32_t psi,
                      unsigned r, unsigned long long budget, const timer& t) {
  pz::fq field = make_field(q);
  if (psi >= field.q())
    pz::fail(pz::errc::invalid_argument, "psi code outside the field");
  pz::pencil_spec pen = fi.pencil();
  pz::cone_identity_report cone =
      pz::verify_cone_identity(pen, field, psi, r, budget);
  ojson o;
  o["family"] = fi.name;
  o["p"] = field.p();
  o["q"] = field.q();
  o["r"] = r;
  o["psi"] = psi;
  o["cone"]["holds"] = cone.holds;
  o["cone"]["sum"] = jcyc(cone.sum);
  o["cone"]["cone_count"] = cone.cone_count;
  o["cone"]["expected"] = cone.expected;
  bool ok = cone.holds;
  if (auto n = loop_fermat_parameter(fi.name)) {
    pz::collapse_report col =
        pz::verify_km_collapse(*n, field, psi, r, budget);
    bool all_zero = true;
    for (const pz::collapse_term& c : col.corrections)
      if (!c.value.is_zero()) all_zero = false;
    o["collapse"]["n"] = *n;
    o["collapse"]["holds"] = col.holds;
    o["collapse"]["affine_side"] = jcyc(col.affine_side);
    o["collapse"]["toric_side"] = jcyc(col.toric_side);
    o["collapse"]["corrections"] = col.corrections.size();
    o["collapse"]["corrections_zero"] = all_zero;
    ok = ok && col.holds;
  } else {
    o["collapse"] = nullptr;
  }
  emit(o, t);
  return ok ? 0 : 1;
}

bool ordinary_from_n1(unsigned long long n1, uint64_t p) {
  return n1 % p != 1 % p;
}

int cmd_count(const family_input& fi, uint64_t q, uint32_t psi, unsigned r,
              unsigned long long budget, const timer& t) {
  pz::fq field = make_field(q);
  if (psi >= field.q())
    pz::fail(pz::errc::invalid_argument, "psi code outside the field");
  pz::pencil_spec pen = fi.pencil();
  std::vector<unsigned long long> counts;
  for (unsigned level = 1; level <= r; ++level)
    counts.push_back(
        pz::count_projective(pen, field, psi, level, budget).count);
  ojson o;
  o["family"] = fi.name;
  o["p"] = field.p();
  o["q"] = field.q();
  o["r"] = r;
  o["psi"] = psi;
  o["N_r"] = jarr(counts);
  o["ordinary"] = counts.empty() ? ojson(nullptr)
                                 : ojson(ordinary_from_n1(counts[0], field.p()));
  emit(o, t);
  return 0;
}

int cmd_rfactor(const family_input& fi, uint64_t q, uint32_t psi,
                bool force_fallback, unsigned long long budget,
                const timer& t) {
  if (!fi.entry)
    pz::fail(pz::errc::invalid_argument,
             "rfactor needs a registry family name");
  pz::fq field = make_field(q);
  if (psi >= field.q())
    pz::fail(pz::errc::invalid_argument, "psi code outside the field");
  pz::r_factor_data rf =
      pz::r_factor(*fi.entry, field, psi, budget, force_fallback);
  pz::pencil_spec pen = fi.pencil();
  std::vector<pz::count_record> counts = {
      pz::count_projective(pen, field, psi, 1, budget),
      pz::count_projective(pen, field, psi, 2, budget)};
  std::vector<long long> traces = pz::residual_traces(counts, rf);
  ojson o;
  o["family"] = fi.name;
  o["p"] = field.p();
  o["q"] = field.q();
  o["r"] = 2;
  o["psi"] = psi;
  o["N_r"] = ojson::array({counts[0].count, counts[1].count});
  o["R"]["a2"] = rf.a_squared;
  o["R"]["b"] = rf.b;
  o["R"]["route"] = pz::r_factor_route_name(rf.route);
  o["t_r"] = jarr(traces);
  o["ordinary"] = ordinary_from_n1(counts[0].count, field.p());
  o["congruences"] = nullptr;
  o["r0"] = nullptr;
  emit(o, t);
  return 0;
}

// ---------------------------------------------------------------------------
// Scan subcommands: NDJSON records in deterministic input order plus a
// summary line, or a CSV matrix with --format csv (summary then on stderr).
// ---------------------------------------------------------------------------

struct scan_tallies {
  size_t cells = 0, passed = 0, failed = 0, skipped = 0, errors = 0;

  void absorb(const std::string& status, bool pass) {
    ++cells;
    if (status == "ok") {
      if (pass)
        ++passed;
      else
        ++failed;
    } else if (status == "budget_exceeded" || status == "bad_fiber") {
      ++skipped;
    } else {
      ++errors;
    }
  }

  ojson json() const {
    ojson s;
    s["summary"]["cells"] = cells;
    s["summary"]["passed"] = passed;
    s["summary"]["failed"] = failed;
    s["summary"]["skipped"] = skipped;
    s["summary"]["errors"] = errors;
    return s;
  }
};

int cmd_compare(const std::vector<std::string>& families,
                const std::vector<uint64_t>& p_list,
                const std::string& psi_spec, unsigned r,
                const std::string& format, unsigned threads,
                unsigned long long budget, const timer& t) {
  std::vector<pz::pencil_spec> pencils;
  for (const std::string& f : families) {
    pz::family_entry e = pz::find_family(f);
    pencils.push_back(pz::make_pencil(e.matrix, e.coefficient, e.name));
  }
  struct cell {
    uint64_t q;
    uint32_t psi;
  };
  std::vector<cell> cells;
  for (uint64_t q : p_list) {
    pz::fq probe = make_field(q);  // validates the size up front
    for (uint32_t psi : parse_psi_set(psi_spec, probe.q()))
      cells.push_back({q, psi});
  }
  struct outcome {
    ojson record;
    std::string status;
    bool pass = false;
  };
  std::function<outcome(std::size_t)> run = [&](std::size_t i) -> outcome {
    const cell& c = cells[i];
    ojson rec;
    rec["families"] = jarr(families);
    pz::fq field = make_field(c.q);
    rec["p"] = field.p();
    rec["q"] = field.q();
    rec["r"] = r;
    rec["psi"] = c.psi;
    try {
      pz::comparison_matrix cm =
          pz::compare_families(pencils, field, c.psi, r, budget);
      rec["status"] = "ok";
      std::vector<unsigned long long> counts;
      for (const pz::count_record& cr : cm.counts) counts.push_back(cr.count);
      rec["N_r"] = jarr(counts);
      rec["modulus"] = cm.modulus;
      ojson res = ojson::array();
      for (const auto& row : cm.residues) res.push_back(jarr(row));
      rec["residues"] = res;
      rec["all_zero"] = cm.all_zero;
      return {rec, "ok", cm.all_zero};
    } catch (const pz::error& e) {
      rec["status"] = pz::errc_name(e.kind);
      rec["N_r"] = nullptr;
      rec["modulus"] = nullptr;
      rec["residues"] = nullptr;
      rec["all_zero"] = nullptr;
      return {rec, pz::errc_name(e.kind), false};
    }
  };
  std::vector<outcome> results = run_cells<outcome>(cells.size(), threads, run);
  scan_tallies tally;
  if (format == "csv") {
    std::fputs("p,q,r,psi,status,modulus,max_residue,all_zero\n", stdout);
    for (size_t i = 0; i < results.size(); ++i) {
      const outcome& oc = results[i];
      const ojson& rec = oc.record;
      unsigned long long max_res = 0;
      if (oc.status == "ok")
        for (const auto& row : rec["residues"])
          for (const auto& v : row)
            max_res = std::max(max_res, v.get<unsigned long long>());
      std::fprintf(stdout, "%llu,%llu,%u,%u,%s,%s,%s,%s\n",
                   static_cast<unsigned long long>(rec["p"].get<uint64_t>()),
                   static_cast<unsigned long long>(rec["q"].get<uint64_t>()),
                   r, rec["psi"].get<uint32_t>(), oc.status.c_str(),
                   oc.status == "ok"
                       ? std::to_string(rec["modulus"].get<unsigned long long>())
                             .c_str()
                       : "",
                   oc.status == "ok" ? std::to_string(max_res).c_str() : "",
                   oc.status == "ok" ? (oc.pass ? "true" : "false") : "");
      tally.absorb(oc.status, oc.pass);
    }
    std::fputs(tally.json().dump().c_str(), stderr);
    std::fputc('\n', stderr);
  } else {
    for (const outcome& oc : results) {
      emit_line(oc.record);
      tally.absorb(oc.status, oc.pass);
    }
    emit_line(tally.json());
  }
  ojson meta;
  meta["elapsed_seconds"] = t.seconds();
  std::fputs(meta.dump().c_str(), stderr);
  std::fputc('\n', stderr);
  return tally.failed == 0 && tally.errors == 0 ? 0 : 1;
}

int cmd_r0scan(const family_input& fi, uint64_t q, const std::string& psi_spec,
               unsigned r_max, const std::string& format, unsigned threads,
               unsigned long long budget, const timer& t) {
  if (!fi.entry)
    pz::fail(pz::errc::invalid_argument, "r0scan needs a registry family name");
  pz::fq probe = make_field(q);
  std::vector<uint32_t> psis = parse_psi_set(psi_spec, probe.q());
  struct outcome {
    ojson record;
    std::string status;
    bool pass = false;
  };
  std::function<outcome(std::size_t)> run = [&](std::size_t i) -> outcome {
    uint32_t psi = psis[i];
    pz::fq field = make_field(q);
    ojson rec;
    rec["family"] = fi.name;
    rec["p"] = field.p();
    rec["q"] = field.q();
    rec["psi"] = psi;
    try {
      pz::r_factor_data rf = pz::r_factor(*fi.entry, field, psi, budget);
      pz::r0_scan scan =
          pz::find_r0(fi.pencil(), field, psi, rf, r_max, budget);
      std::vector<unsigned long long> counts;
      for (const pz::count_record& cr : scan.counts) counts.push_back(cr.count);
      bool mirror_match = true;
      if (scan.r0)
        mirror_match =
            counts[*scan.r0 - 1] ==
            static_cast<unsigned long long>(scan.mirror_counts[*scan.r0 - 1]);
      rec["status"] = "ok";
      rec["R"]["a2"] = rf.a_squared;
      rec["R"]["b"] = rf.b;
      rec["R"]["route"] = pz::r_factor_route_name(rf.route);
      rec["r0"] = scan.r0 ? ojson(*scan.r0) : ojson(nullptr);
      rec["traces"] = jarr(scan.traces);
      rec["counts"] = jarr(counts);
      rec["mirror_counts"] = jarr(scan.mirror_counts);
      rec["mirror_match"] = mirror_match;
      return {rec, "ok", mirror_match};
    } catch (const pz::error& e) {
      rec["status"] = pz::errc_name(e.kind);
      rec["R"] = nullptr;
      rec["r0"] = nullptr;
      rec["traces"] = nullptr;
      rec["counts"] = nullptr;
      rec["mirror_counts"] = nullptr;
      rec["mirror_match"] = nullptr;
      return {rec, pz::errc_name(e.kind), false};
    }
  };
  std::vector<outcome> results = run_cells<outcome>(psis.size(), threads, run);
  scan_tallies tally;
  if (format == "csv") {
    std::fputs("p,q,psi,status,b,a2,route,r0,traces,mirror_match\n", stdout);
    for (const outcome& oc : results) {
      const ojson& rec = oc.record;
      std::string traces;
      if (oc.status == "ok") {
        for (const auto& v : rec["traces"]) {
          if (!traces.empty()) traces += ';';
          traces += std::to_string(v.get<long long>());
        }
      }
      std::fprintf(
          stdout, "%llu,%llu,%u,%s,%s,%s,%s,%s,%s,%s\n",
          static_cast<unsigned long long>(rec["p"].get<uint64_t>()),
          static_cast<unsigned long long>(rec["q"].get<uint64_t>()),
          rec["psi"].get<uint32_t>(), oc.status.c_str(),
          oc.status == "ok" ? std::to_string(rec["R"]["b"].get<long long>())
                                  .c_str()
                            : "",
          oc.status == "ok" ? std::to_string(rec["R"]["a2"].get<long long>())
                                  .c_str()
                            : "",
          oc.status == "ok" ? rec["R"]["route"].get<std::string>().c_str()
                            : "",
          oc.status == "ok" && !rec["r0"].is_null()
              ? std::to_string(rec["r0"].get<unsigned>()).c_str()
              : "",
          traces.c_str(),
          oc.status == "ok" ? (oc.pass ? "true" : "false") : "");
      tally.absorb(oc.status, oc.pass);
    }
    std::fputs(tally.json().dump().c_str(), stderr);
    std::fputc('\n', stderr);
  } else {
    for (const outcome& oc : results) {
      emit_line(oc.record);
      tally.absorb(oc.status, oc.pass);
    }
    emit_line(tally.json());
  }
  ojson meta;
  meta["elapsed_seconds"] = t.seconds();
  std::fputs(meta.dump().c_str(), stderr);
  std::fputc('\n', stderr);
  return tally.failed == 0 && tally.errors == 0 ? 0 : 1;
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  timer t;
  CLI::App app{"Invertible Calabi-Yau pencil invariants and zeta data"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Configuration file (key = value lines)");

  global_config cfg;
  app.add_option("--threads", cfg.threads, "Worker threads for scan cells")
      ->envname("PENCILZETA_THREADS");
  app.add_option("--budget", cfg.budget, "Point budget per cell")
      ->envname("PENCILZETA_BUDGET");
  app.add_option("--k_max,--k-max", cfg.k_max,
                 "Extension-degree bound for the degeneracy search");
  app.add_option("--fiber", cfg.fiber,
                 "Default deformation parameter for milnor (rational)");

  std::string family_arg, psi_rational = "1", psi_code_str, format = "json",
              weights_arg, psi_spec = "all", p_list_arg, set_arg = "five",
              families_arg;
  uint64_t q_arg = 0;
  uint32_t psi_code = 0;
  unsigned r_arg = 1, r_max = 6;
  unsigned long long cell_budget = 5'000'000ULL;
  bool search = false, force_fallback = false;

  CLI::App* validate = app.add_subcommand(
      "validate", "Invertibility and Calabi-Yau checks for a family/matrix");
  validate->add_option("family", family_arg, "Registry name or matrix file")
      ->required();

  CLI::App* weights = app.add_subcommand(
      "weights", "Dual and primal quasi-homogeneous weights");
  weights->add_option("family", family_arg)->required();

  CLI::App* decompose = app.add_subcommand(
      "decompose", "Atomic Fermat/loop/chain decomposition");
  decompose->add_option("family", family_arg)->required();

  CLI::App* groups = app.add_subcommand(
      "groups", "Diagonal symmetry groups Aut, SL, J and SL/J");
  groups->add_option("family", family_arg)->required();

  CLI::App* pf = app.add_subcommand(
      "pf", "Hypergeometric Picard-Fuchs data and cyclotomic descent");
  pf->add_option("family", family_arg, "Registry name or matrix file");
  pf->add_option("--weights", weights_arg, "Comma list of dual weights");

  CLI::App* milnor = app.add_subcommand(
      "milnor", "Graded Jacobian-quotient dimensions and invariant block");
  milnor->add_option("family", family_arg)->required();
  milnor->add_option("--cell-budget", cell_budget,
                     "Elimination cell budget (rows x columns)");

  CLI::App* faces = app.add_subcommand(
      "faces", "Newton polytope face lattice of a pencil fiber");
  faces->add_option("family", family_arg)->required();
  faces->add_option("--psi", psi_rational,
                    "Rational deformation parameter (0 drops the monomial)");

  CLI::App* smooth = app.add_subcommand(
      "smooth", "Closed-form smoothness verdict and degeneracy search");
  smooth->add_option("family", family_arg)->required();
  smooth->add_option("--q", q_arg, "Field size (prime power)")->required();
  smooth->add_option("--psi", psi_code, "Fiber parameter code in F_q")
      ->required();
  smooth->add_flag("--search", search, "Run the bounded degeneracy search");

  CLI::App* expsum = app.add_subcommand(
      "expsum-verify", "Character-sum identities for a pencil fiber");
  expsum->add_option("family", family_arg)->required();
  expsum->add_option("--q", q_arg)->required();
  expsum->add_option("--psi", psi_code)->required();
  expsum->add_option("--r", r_arg, "Extension level");

  CLI::App* count = app.add_subcommand(
      "count", "Projective point counts N_1..N_r of a fiber");
  count->add_option("family", family_arg)->required();
  count->add_option("--q", q_arg)->required();
  count->add_option("--psi", psi_code)->required();
  count->add_option("--r", r_arg, "Count levels 1..r");

  CLI::App* rfactor = app.add_subcommand(
      "rfactor", "Quadratic zeta factor, residual traces, ordinarity");
  rfactor->add_option("family", family_arg)->required();
  rfactor->add_option("--q", q_arg)->required();
  rfactor->add_option("--psi", psi_code)->required();
  rfactor->add_flag("--force-fallback", force_fallback,
                    "Skip the elliptic route (route cross-validation)");

  CLI::App* compare = app.add_subcommand(
      "compare", "Cross-family count congruences over a (p, psi) grid");
  compare->add_option("--p-list", p_list_arg, "Comma list of field sizes")
      ->required();
  compare->add_option("--psi", psi_spec, "'all' or comma list of codes");
  compare->add_option("--r", r_arg, "Extension level");
  compare->add_option("--set", set_arg,
                      "Family set: 'five' (shared-weight quartics) or 'chains'");
  compare->add_option("--families", families_arg,
                      "Explicit comma list of registry names");
  compare->add_option("--format", format, "json (NDJSON stream) or csv");

  CLI::App* r0scan = app.add_subcommand(
      "r0scan", "Mirror-coincidence degree search over fibers of F_q");
  r0scan->add_option("family", family_arg)->required();
  r0scan->add_option("--q", q_arg)->required();
  r0scan->add_option("--psi", psi_spec, "'all' or comma list of codes");
  r0scan->add_option("--r-max", r_max, "Search horizon");
  r0scan->add_option("--format", format, "json (NDJSON stream) or csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(parse_family(family_arg), t);
    if (*weights) return cmd_weights(parse_family(family_arg), t);
    if (*decompose) return cmd_decompose(parse_family(family_arg), t);
    if (*groups) return cmd_groups(parse_family(family_arg), t);
    if (*pf) {
      std::vector<long long> w;
      if (!weights_arg.empty()) {
        for (uint64_t v : parse_u64_list(weights_arg))
          w.push_back(static_cast<long long>(v));
      } else if (!family_arg.empty()) {
        w = to_ll(pz::dual_weights(parse_family(family_arg).matrix).dual);
      } else {
        pz::fail(pz::errc::invalid_argument,
                 "pf needs a family or --weights");
      }
      return cmd_pf(w, t);
    }
    if (*milnor)
      return cmd_milnor(parse_family(family_arg), cfg.fiber, cell_budget, t);
    if (*faces) return cmd_faces(parse_family(family_arg), psi_rational, t);
    if (*smooth)
      return cmd_smooth(family_arg, q_arg, psi_code, search, cfg.k_max,
                        cfg.budget, t);
    if (*expsum)
      return cmd_expsum_verify(parse_family(family_arg), q_arg, psi_code,
                               r_arg, cfg.budget, t);
    if (*count)
      return cmd_count(parse_family(family_arg), q_arg, psi_code, r_arg,
                       cfg.budget, t);
    if (*rfactor)
      return cmd_rfactor(parse_family(family_arg), q_arg, psi_code,
                         force_fallback, cfg.budget, t);
    if (*compare) {
      std::vector<std::string> fams;
      if (!families_arg.empty()) {
        std::stringstream ss(families_arg);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) fams.push_back(item);
      } else if (set_arg == "five") {
        fams = {"F4", "F2L2", "F1L3", "L2L2", "L4"};
      } else if (set_arg == "chains") {
        fams = {"C2F2", "C2L2"};
      } else {
        pz::fail(pz::errc::invalid_argument,
                 "unknown family set '" + set_arg + "'");
      }
      return cmd_compare(fams, parse_u64_list(p_list_arg), psi_spec, r_arg,
                         format, cfg.threads, cfg.budget, t);
    }
    if (*r0scan)
      return cmd_r0scan(parse_family(family_arg), q_arg, psi_spec, r_max,
                        format, cfg.threads, cfg.budget, t);
  } catch (const pz::error& e) {
    emit(error_payload(e), t);
    return 1;
  }
  return 0;
}
