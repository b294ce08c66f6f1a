#include "ttn/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "ttn/gate_matrices.hpp"

namespace ttn {

void HamiltonianSpec::validate() const {
  if (n < 1) throw std::invalid_argument("hamiltonian: n must be positive");
  for (const auto& t : terms) {
    if (t.sites.empty() || t.sites.size() > 2)
      throw std::invalid_argument("hamiltonian term must act on 1 or 2 qudits");
    if (t.sites.size() == 2 && t.sites[0] == t.sites[1])
      throw std::invalid_argument("hamiltonian term sites must be distinct");
    for (int s : t.sites)
      if (s < 0 || s >= n)
        throw std::invalid_argument("hamiltonian term site out of range");
    long want = 1;
    for (size_t k = 0; k < t.sites.size(); ++k) want *= d;
    if (t.matrix.rank() != 2 || t.matrix.dim(0) != want || t.matrix.dim(1) != want)
      throw std::invalid_argument("hamiltonian term matrix has wrong dimension");
    if (!is_hermitian(t.matrix, 1e-10))
      throw std::invalid_argument("hamiltonian term matrix is not Hermitian");
  }
}

namespace {

double param(const std::map<std::string, double>& p, const std::string& key,
             double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void add_zz(HamiltonianSpec& h, int i, int j, double coeff) {
  h.terms.push_back({{i, j}, named_matrix("ZZ", 2).scaled(coeff)});
}

void add_x(HamiltonianSpec& h, int i, double coeff) {
  h.terms.push_back({{i}, pauli_x().scaled(coeff)});
}

// balanced binary tree interaction graph over sites 0..n-1: node k couples
// to 2k+1 and 2k+2 (heap layout)
std::vector<std::pair<int, int>> heap_tree_edges(int n) {
  std::vector<std::pair<int, int>> out;
  for (int k = 0; k < n; ++k) {
    if (2 * k + 1 < n) out.push_back({k, 2 * k + 1});
    if (2 * k + 2 < n) out.push_back({k, 2 * k + 2});
  }
  return out;
}

}  // namespace

HamiltonianSpec hamiltonian_library(const std::string& name, int n,
                                    const std::map<std::string, double>& params) {
  if (n < 2) throw std::invalid_argument("hamiltonian_library: n must be >= 2");
  HamiltonianSpec h;
  h.name = name;
  h.n = n;
  h.d = 2;
  const double J = param(params, "J", 1.0);

  if (name == "tfim-chain") {
    const double g = param(params, "g", 1.0);
    for (int i = 0; i + 1 < n; ++i) add_zz(h, i, i + 1, -J);
    for (int i = 0; i < n; ++i) add_x(h, i, -g);
  } else if (name == "tfim-tree") {
    const double g = param(params, "g", 1.0);
    for (auto [a, b] : heap_tree_edges(n)) add_zz(h, a, b, -J);
    for (int i = 0; i < n; ++i) add_x(h, i, -g);
  } else if (name == "heisenberg-chain") {
    for (int i = 0; i + 1 < n; ++i)
      for (const char* p : {"XX", "YY", "ZZ"})
        h.terms.push_back({{i, i + 1}, named_matrix(p, 2).scaled(J)});
  } else if (name == "long-range-ising") {
    const double alpha = param(params, "alpha", 2.0);
    const double g = param(params, "g", 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        add_zz(h, i, j, -J * std::pow(static_cast<double>(j - i), -alpha));
    if (g != 0.0)
      for (int i = 0; i < n; ++i) add_x(h, i, -g);
  } else if (name == "periodic-chain") {
    const double g = param(params, "g", 0.0);
    for (int i = 0; i + 1 < n; ++i) add_zz(h, i, i + 1, -J);
    add_zz(h, n - 1, 0, -J);
    if (g != 0.0)
      for (int i = 0; i < n; ++i) add_x(h, i, -g);
  } else {
    throw std::invalid_argument("unknown hamiltonian name: " + name);
  }
  h.validate();
  return h;
}

HamiltonianSpec parse_hamiltonian_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  HamiltonianSpec h;
  h.name = j.value("name", "");
  h.n = j.at("n").get<int>();
  h.d = j.value("d", 2);
  for (const auto& jt : j.at("terms")) {
    HamTerm term;
    for (const auto& s : jt.at("sites")) {
      int site = s.get<int>();
      term.sites.push_back(site - 1);  // file format is 1-based
    }
    double coeff = jt.value("coeff", 1.0);
    const auto& jm = jt.at("matrix");
    if (jm.is_string()) {
      term.matrix = named_matrix(jm.get<std::string>(), h.d).scaled(coeff);
    } else {
      long dim = 1;
      for (size_t k = 0; k < term.sites.size(); ++k) dim *= h.d;
      std::vector<double> flat = jm.get<std::vector<double>>();
      if (static_cast<long>(flat.size()) != 2 * dim * dim)
        throw std::invalid_argument("raw matrix needs 2*k^2 interleaved re,im values");
      std::vector<cx> data(static_cast<size_t>(dim * dim));
      for (long i = 0; i < dim * dim; ++i)
        data[static_cast<size_t>(i)] =
            cx{flat[static_cast<size_t>(2 * i)], flat[static_cast<size_t>(2 * i + 1)]} * coeff;
      term.matrix = DenseTensor({dim, dim}, std::move(data));
    }
    h.terms.push_back(std::move(term));
  }
  h.validate();
  return h;
}

}  // namespace ttn
