#include <pencilzeta/registry.hpp>

#include <pencilzeta/errors.hpp>

#include <algorithm>
#include <cctype>

namespace pz {

namespace {

exponent_matrix mat(std::vector<std::vector<int64_t>> rows) {
  return exponent_matrix{std::move(rows)};
}

std::vector<int64_t> prime_divisors(mpz_class v) {
  std::vector<int64_t> out;
  v = abs(v);
  for (mpz_class p = 2; p * p <= v; ++p) {
    if (v % p == 0) {
      out.push_back(p.get_si());
      while (v % p == 0) v /= p;
    }
  }
  if (v > 1) out.push_back(v.get_si());
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

family_entry loop_fermat_family(int n) {
  if (n < 2 || n > 12) fail(errc::invalid_argument, "KM(n) supports 2 <= n <= 12");
  family_entry f;
  f.name = "KM(" + std::to_string(n) + ")";
  std::vector<std::vector<int64_t>> rows(n + 1, std::vector<int64_t>(n + 1, 0));
  for (int i = 0; i < n; ++i) {
    rows[i][i] = n;
    rows[i][(i + 1) % n] = 1;
  }
  rows[n][n] = n + 1;
  f.matrix = mat(std::move(rows));
  f.coefficient = n + 1;
  std::string poly;
  for (int i = 0; i < n; ++i)
    poly += "x" + std::to_string(i) + "^" + std::to_string(n) + "*x" +
            std::to_string((i + 1) % n) + " + ";
  poly += "x" + std::to_string(n) + "^" + std::to_string(n + 1);
  f.polynomial = poly;
  f.excluded_characteristics = prime_divisors(klein_mukai_order(n).m);
  f.quartic_surface = (n == 3);
  return f;
}

family_entry dwork_family(int n) {
  if (n < 1 || n > 12) fail(errc::invalid_argument, "Dwork(n) supports 1 <= n <= 12");
  family_entry f;
  f.name = "Dwork(" + std::to_string(n) + ")";
  std::vector<std::vector<int64_t>> rows(n + 1, std::vector<int64_t>(n + 1, 0));
  for (int i = 0; i <= n; ++i) rows[i][i] = n + 1;
  f.matrix = mat(std::move(rows));
  f.coefficient = n + 1;
  std::string poly;
  for (int i = 0; i <= n; ++i) {
    if (i) poly += " + ";
    poly += "x" + std::to_string(i) + "^" + std::to_string(n + 1);
  }
  f.polynomial = poly;
  f.excluded_characteristics = prime_divisors(n + 1);
  f.quartic_surface = (n == 3);
  return f;
}

std::vector<family_entry> build_registry() {
  std::vector<family_entry> out;
  auto add = [&](std::string name, std::vector<std::vector<int64_t>> rows,
                 int64_t coeff, std::string poly, std::vector<int64_t> bad) {
    family_entry f;
    f.name = std::move(name);
    f.matrix = mat(std::move(rows));
    f.coefficient = coeff;
    f.polynomial = std::move(poly);
    f.excluded_characteristics = std::move(bad);
    f.quartic_surface = true;
    out.push_back(std::move(f));
  };
  add("F4", {{4, 0, 0, 0}, {0, 4, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 4}}, 4,
      "x0^4 + x1^4 + x2^4 + x3^4", {2, 5, 7});
  add("F2L2", {{4, 0, 0, 0}, {0, 4, 0, 0}, {0, 0, 3, 1}, {0, 0, 1, 3}}, 4,
      "x0^4 + x1^4 + x2^3*x3 + x3^3*x2", {2, 5, 7});
  add("F1L3", {{4, 0, 0, 0}, {0, 3, 1, 0}, {0, 0, 3, 1}, {0, 1, 0, 3}}, 4,
      "x0^4 + x1^3*x2 + x2^3*x3 + x3^3*x1", {2, 5, 7});
  add("L2L2", {{3, 1, 0, 0}, {1, 3, 0, 0}, {0, 0, 3, 1}, {0, 0, 1, 3}}, 4,
      "x0^3*x1 + x1^3*x0 + x2^3*x3 + x3^3*x2", {2, 5, 7});
  add("L4", {{3, 1, 0, 0}, {0, 3, 1, 0}, {0, 0, 3, 1}, {1, 0, 0, 3}}, 4,
      "x0^3*x1 + x1^3*x2 + x2^3*x3 + x3^3*x0", {2, 5, 7});
  add("C2F2", {{3, 1, 0, 0}, {0, 4, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 4}}, 12,
      "x0^3*x1 + x1^4 + x2^4 + x3^4", {2, 3});
  add("C2L2", {{3, 1, 0, 0}, {0, 4, 0, 0}, {0, 0, 3, 1}, {0, 0, 1, 3}}, 12,
      "x0^3*x1 + x1^4 + x2^3*x3 + x3^3*x2", {2, 3});
  return out;
}

}  // namespace

const std::vector<family_entry>& registry() {
  static const std::vector<family_entry> table = build_registry();
  return table;
}

family_entry find_family(const std::string& name) {
  std::string key = lower(name);
  key.erase(std::remove_if(key.begin(), key.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            key.end());
  for (const family_entry& f : registry())
    if (lower(f.name) == key) return f;
  auto parse_param = [&](const std::string& prefix) -> int {
    if (key.size() < prefix.size() + 3 || key.compare(0, prefix.size(), prefix) != 0)
      return -1;
    if (key[prefix.size()] != '(' || key.back() != ')') return -1;
    std::string inner = key.substr(prefix.size() + 1,
                                   key.size() - prefix.size() - 2);
    if (inner.empty() ||
        !std::all_of(inner.begin(), inner.end(),
                     [](unsigned char c) { return std::isdigit(c); }))
      return -1;
    if (inner.size() > 2) fail(errc::invalid_argument, "parameter too large");
    return std::stoi(inner);
  };
  if (int n = parse_param("km"); n >= 0) return loop_fermat_family(n);
  if (int n = parse_param("dwork"); n >= 0) return dwork_family(n);
  fail(errc::invalid_argument, "unknown family '" + name + "'");
}

bool good_characteristic(const family_entry& fam, int64_t p) {
  return std::find(fam.excluded_characteristics.begin(),
                   fam.excluded_characteristics.end(),
                   p) == fam.excluded_characteristics.end();
}

}  // namespace pz
