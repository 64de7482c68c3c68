#include "wielandt/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace wielandt::io {

json matrix_to_json(const HermitianMatrix& m) {
  json entries = json::array();
  for (int i = 0; i < m.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.n(); ++j) {
      const Complex z = m.mat()(i, j);
      if (z.imag() == 0.0)
        row.push_back(z.real());
      else
        row.push_back(json::array({z.real(), z.imag()}));
    }
    entries.push_back(std::move(row));
  }
  return json{{"n", m.n()}, {"entries", std::move(entries)}};
}

namespace {

Complex entry_from_json(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw ParseError("matrix entry must be a real number or an [re, im] pair");
}

}  // namespace

Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw ParseError("matrix JSON must be an object with \"n\" and \"entries\"");
  if (!j["n"].is_number_integer())
    throw ParseError("matrix field \"n\" must be an integer");
  const int n = j["n"].get<int>();
  if (n < 1) throw ParseError("matrix dimension must be >= 1");
  const json& entries = j["entries"];
  if (!entries.is_array() || static_cast<int>(entries.size()) != n)
    throw ParseError("\"entries\" must be an array of n rows");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = entries[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ParseError("row " + std::to_string(i) + " must have n entries");
    for (int jx = 0; jx < n; ++jx) m(i, jx) = entry_from_json(row[jx]);
  }
  return m;
}

HermitianMatrix load_matrix_file(const std::string& path, double herm_tol) {
  return validate_hermitian(matrix_from_json(load_json_file(path)), herm_tol);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

json report_to_json(const InequalityReport& r) {
  return json{{"indices", r.indices.indices()},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"slack", r.slack},
              {"verdict", to_string(r.verdict)}};
}

json majorization_to_json(const MajorizationReport& r) {
  return json{{"holds", r.holds},
              {"prefix_margins", r.prefix_margins},
              {"total_gap", r.total_gap}};
}

json rates_to_json(const PerturbationRates& r) {
  std::vector<double> nu(r.nu.data(), r.nu.data() + r.nu.size());
  std::vector<double> base(r.base.values().data(),
                           r.base.values().data() + r.base.n());
  return json{{"nu", nu},
              {"base_spectrum", base},
              {"cluster_boundaries", r.clusters.boundaries},
              {"cluster_values", r.clusters.representatives},
              {"sum_nu", r.nu.sum()}};
}

namespace {

json frame_to_json(const OrthonormalFrame& f) {
  json vectors = json::array();
  for (int c = 0; c < f.size(); ++c) {
    json vec = json::array();
    for (int i = 0; i < f.ambient(); ++i) {
      const Complex z = f.vectors()(i, c);
      vec.push_back(json::array({z.real(), z.imag()}));
    }
    vectors.push_back(std::move(vec));
  }
  return vectors;
}

OrthonormalFrame frame_from_json(const json& j, int n) {
  if (!j.is_array() || j.empty()) throw ParseError("subspace must be a non-empty array of vectors");
  const int k = static_cast<int>(j.size());
  Matrix m(n, k);
  for (int c = 0; c < k; ++c) {
    const json& vec = j[c];
    if (!vec.is_array() || static_cast<int>(vec.size()) != n)
      throw ParseError("subspace vector has wrong length");
    for (int i = 0; i < n; ++i) {
      const json& e = vec[i];
      if (!e.is_array() || e.size() != 2)
        throw ParseError("subspace entries must be [re, im] pairs");
      m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return OrthonormalFrame(std::move(m));
}

}  // namespace

json certificate_to_json(const EqualityCertificate& cert) {
  json subspaces = json::array();
  for (const OrthonormalFrame& u : cert.subspaces)
    subspaces.push_back(frame_to_json(u));
  json curve_match = json::array(), a_inv = json::array(),
       b_inv = json::array(), topk = json::array(), drift = json::array();
  for (const SegmentResiduals& r : cert.residuals) {
    curve_match.push_back(r.curve_match);
    a_inv.push_back(r.a_invariance);
    b_inv.push_back(r.b_invariance);
    topk.push_back(r.top_k_b_match);
    drift.push_back(r.subspace_drift);
  }
  return json{{"indices", cert.indices.indices()},
              {"breakpoints", cert.breakpoints},
              {"subspaces", std::move(subspaces)},
              {"residuals",
               {{"curve_match", std::move(curve_match)},
                {"A_invariance", std::move(a_inv)},
                {"B_invariance", std::move(b_inv)},
                {"top_k_B_match", std::move(topk)},
                {"subspace_drift", std::move(drift)}}},
              {"r", cert.r()}};
}

EqualityCertificate certificate_from_json(const json& j) {
  if (!j.is_object() || !j.contains("indices") || !j.contains("breakpoints") ||
      !j.contains("subspaces"))
    throw ParseError("certificate JSON needs indices, breakpoints, subspaces");
  const json& subs = j["subspaces"];
  if (!subs.is_array() || subs.empty())
    throw ParseError("certificate needs at least one subspace");
  if (!subs[0].is_array() || subs[0].empty() || !subs[0][0].is_array())
    throw ParseError("subspaces must be arrays of vectors");
  const int n = static_cast<int>(subs[0][0].size());

  std::vector<int> indices = j["indices"].get<std::vector<int>>();
  EqualityCertificate cert{IndexSet(n, std::move(indices)),
                           j["breakpoints"].get<std::vector<double>>(),
                           {},
                           {}};
  for (const json& s : subs) cert.subspaces.push_back(frame_from_json(s, n));
  return cert;
}

void write_trace_csv(std::ostream& os, const PencilTrace& trace) {
  os << "t";
  for (int i = 1; i <= trace.n(); ++i) os << ",lambda_" << i;
  os << "\n";
  char buf[32];
  for (int g = 0; g < trace.samples(); ++g) {
    std::snprintf(buf, sizeof buf, "%.17g", trace.grid[g]);
    os << buf;
    for (int i = 0; i < trace.n(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", trace.curves[g](i));
      os << "," << buf;
    }
    os << "\n";
  }
}

json crossings_to_json(const PencilTrace& trace) {
  json arr = json::array();
  for (const Crossing& c : trace.crossings)
    for (const auto& [i, j] : c.pairs)
      arr.push_back(json{{"t", c.t}, {"curves", json::array({i, j})}});
  return arr;
}

namespace {

void render(const json& j, std::ostringstream& os, int depth) {
  const std::string pad(2 * depth, ' ');
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object() || (value.is_array() && !value.empty() &&
                                (value[0].is_object() || value[0].is_array()))) {
        os << pad << key << ":\n";
        render(value, os, depth + 1);
      } else {
        os << pad << key << ": " << value.dump() << "\n";
      }
    }
  } else if (j.is_array()) {
    int idx = 0;
    for (const auto& value : j) {
      if (value.is_object() || value.is_array()) {
        os << pad << "- [" << idx << "]\n";
        render(value, os, depth + 1);
      } else {
        os << pad << "- " << value.dump() << "\n";
      }
      ++idx;
    }
  } else {
    os << pad << j.dump() << "\n";
  }
}

}  // namespace

std::string render_human(const json& j) {
  std::ostringstream os;
  render(j, os, 0);
  return os.str();
}

}  // namespace wielandt::io
