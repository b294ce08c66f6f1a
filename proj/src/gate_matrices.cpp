#include "ttn/gate_matrices.hpp"

#include <cmath>
#include <stdexcept>

namespace ttn {

namespace {
DenseTensor mat2(cx a, cx b, cx c, cx d) {
  return DenseTensor({2, 2}, {a, b, c, d});
}
}  // namespace

DenseTensor pauli_i() { return mat2(1, 0, 0, 1); }
DenseTensor pauli_x() { return mat2(0, 1, 1, 0); }
DenseTensor pauli_y() { return mat2(0, cx{0, -1}, cx{0, 1}, 0); }
DenseTensor pauli_z() { return mat2(1, 0, 0, -1); }
DenseTensor hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return mat2(s, s, s, -s);
}
DenseTensor s_gate() { return mat2(1, 0, 0, cx{0, 1}); }
DenseTensor t_gate() {
  return mat2(1, 0, 0, std::polar(1.0, M_PI / 4));
}
DenseTensor phase_gate(double theta) {
  return mat2(1, 0, 0, std::polar(1.0, theta));
}
DenseTensor rot_gate(char axis, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  switch (axis) {
    case 'x': return mat2(c, cx{0, -s}, cx{0, -s}, c);
    case 'y': return mat2(c, -s, s, c);
    case 'z': return mat2(std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2));
    default: throw std::invalid_argument("rot axis must be x, y or z");
  }
}
DenseTensor cz_gate() {
  DenseTensor g = DenseTensor::identity(4);
  g.set({3, 3}, -1.0);
  return g;
}
DenseTensor cnot_gate() {
  DenseTensor g({4, 4});
  g.set({0, 0}, 1.0);
  g.set({1, 1}, 1.0);
  g.set({2, 3}, 1.0);
  g.set({3, 2}, 1.0);
  return g;
}
DenseTensor swap2_gate() {
  DenseTensor g({4, 4});
  g.set({0, 0}, 1.0);
  g.set({1, 2}, 1.0);
  g.set({2, 1}, 1.0);
  g.set({3, 3}, 1.0);
  return g;
}

DenseTensor kron2(const DenseTensor& a, const DenseTensor& b) {
  if (a.rank() != 2 || b.rank() != 2)
    throw std::invalid_argument("kron2: inputs must be matrices");
  const long ra = a.dim(0), ca = a.dim(1), rb = b.dim(0), cb = b.dim(1);
  DenseTensor out({ra * rb, ca * cb});
  for (long i = 0; i < ra; ++i)
    for (long j = 0; j < ca; ++j)
      for (long k = 0; k < rb; ++k)
        for (long l = 0; l < cb; ++l)
          out.set({i * rb + k, j * cb + l}, a.at({i, j}) * b.at({k, l}));
  return out;
}

namespace {
DenseTensor single_pauli(char c) {
  switch (c) {
    case 'I': return pauli_i();
    case 'X': return pauli_x();
    case 'Y': return pauli_y();
    case 'Z': return pauli_z();
    case 'H': return hadamard();
    case 'S': return s_gate();
    case 'T': return t_gate();
    default: throw std::invalid_argument(std::string("unknown matrix name: ") + c);
  }
}
}  // namespace

DenseTensor named_matrix(const std::string& name, int d) {
  if (d != 2)
    throw std::invalid_argument("named matrices are only defined for d = 2; "
                                "use a raw matrix for d = " + std::to_string(d));
  if (name == "CZ") return cz_gate();
  if (name == "CNOT") return cnot_gate();
  if (name == "SWAP") return swap2_gate();
  if (name.rfind("phase(", 0) == 0 && name.back() == ')')
    return phase_gate(std::stod(name.substr(6, name.size() - 7)));
  if (name.rfind("rot(", 0) == 0 && name.back() == ')') {
    std::string body = name.substr(4, name.size() - 5);
    auto comma = body.find(',');
    if (comma == std::string::npos || comma != 1)
      throw std::invalid_argument("rot() needs an axis and an angle: " + name);
    return rot_gate(body[0], std::stod(body.substr(comma + 1)));
  }
  if (name.size() == 1) return single_pauli(name[0]);
  if (name.size() == 2) return kron2(single_pauli(name[0]), single_pauli(name[1]));
  throw std::invalid_argument("unknown matrix name: " + name);
}

int matrix_arity(const DenseTensor& m, int d) {
  if (m.rank() != 2 || m.dim(0) != m.dim(1))
    throw std::invalid_argument("operator must be a square matrix");
  if (m.dim(0) == d) return 1;
  if (m.dim(0) == static_cast<long>(d) * d) return 2;
  throw std::invalid_argument("operator dimension matches neither d nor d^2");
}

bool is_unitary(const DenseTensor& m, double tol) {
  if (m.rank() != 2 || m.dim(0) != m.dim(1)) return false;
  DenseTensor prod = contract(m.conjugate(), m, {{0, 0}});  // U† U
  DenseTensor eye = DenseTensor::identity(m.dim(0));
  double dev = 0.0;
  for (long i = 0; i < prod.size(); ++i) dev += std::norm(prod[i] - eye[i]);
  return std::sqrt(dev) <= tol;
}

bool is_hermitian(const DenseTensor& m, double tol) {
  if (m.rank() != 2 || m.dim(0) != m.dim(1)) return false;
  const long n = m.dim(0);
  double dev = 0.0, nrm = 0.0;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      dev += std::norm(m.at({i, j}) - std::conj(m.at({j, i})));
      nrm += std::norm(m.at({i, j}));
    }
  return std::sqrt(dev) <= tol * std::max(1.0, std::sqrt(nrm));
}

}  // namespace ttn
