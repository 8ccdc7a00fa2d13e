#include "mgbench/majorana.hpp"

#include <stdexcept>

#include "mgbench/errors.hpp"

namespace mgbench {

char pauli_char(PauliLetter p) {
  switch (p) {
    case PauliLetter::I: return 'I';
    case PauliLetter::X: return 'X';
    case PauliLetter::Y: return 'Y';
    case PauliLetter::Z: return 'Z';
  }
  return '?';
}

std::complex<double> PauliString::phase() const {
  switch (((phase_quarter % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

PauliString pauli_identity(int n) {
  PauliString p;
  p.letters.assign(static_cast<std::size_t>(n), PauliLetter::I);
  return p;
}

namespace {

// Single-qubit product a*b = i^q * c.
void letter_multiply(PauliLetter a, PauliLetter b, PauliLetter& c, int& q) {
  q = 0;
  if (a == PauliLetter::I) {
    c = b;
    return;
  }
  if (b == PauliLetter::I) {
    c = a;
    return;
  }
  if (a == b) {
    c = PauliLetter::I;
    return;
  }
  auto idx = [](PauliLetter p) { return static_cast<int>(p) - 1; };  // X=0,Y=1,Z=2
  static const PauliLetter third[3][3] = {
      {PauliLetter::I, PauliLetter::Z, PauliLetter::Y},
      {PauliLetter::Z, PauliLetter::I, PauliLetter::X},
      {PauliLetter::Y, PauliLetter::X, PauliLetter::I}};
  c = third[idx(a)][idx(b)];
  // XY=iZ, YZ=iX, ZX=iY are the cyclic cases; the reversed orders pick up -i.
  bool cyclic = (idx(b) - idx(a) + 3) % 3 == 1;
  q = cyclic ? 1 : 3;
}

}  // namespace

PauliString pauli_multiply(const PauliString& a, const PauliString& b) {
  if (a.n() != b.n()) throw std::invalid_argument("pauli_multiply size mismatch");
  PauliString r;
  r.letters.resize(a.letters.size());
  r.phase_quarter = a.phase_quarter + b.phase_quarter;
  for (std::size_t j = 0; j < a.letters.size(); ++j) {
    int q = 0;
    letter_multiply(a.letters[j], b.letters[j], r.letters[j], q);
    r.phase_quarter += q;
  }
  r.phase_quarter = ((r.phase_quarter % 4) + 4) % 4;
  return r;
}

MajoranaLabel make_majorana_label(int n, std::vector<int> indices) {
  if (n < 1) throw std::invalid_argument("majorana label needs n >= 1");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 1 || indices[i] > 2 * n)
      throw std::invalid_argument("majorana index out of range [1, 2n]");
    if (i > 0 && indices[i] <= indices[i - 1])
      throw std::invalid_argument("majorana indices must be strictly increasing");
  }
  return MajoranaLabel{n, std::move(indices)};
}

PauliString majorana_to_pauli(const MajoranaLabel& label) {
  PauliString r = pauli_identity(label.n);
  for (int j : label.indices) {
    PauliString g = pauli_identity(label.n);
    int qubit = (j + 1) / 2;  // 1-based
    for (int q = 1; q < qubit; ++q) g.letters[q - 1] = PauliLetter::Z;
    g.letters[qubit - 1] = (j % 2 == 1) ? PauliLetter::X : PauliLetter::Y;
    r = pauli_multiply(r, g);
  }
  return r;
}

Eigen::MatrixXcd pauli_dense(const PauliString& p) {
  using Mat = Eigen::MatrixXcd;
  const std::complex<double> i(0.0, 1.0);
  Mat m = Mat::Identity(1, 1);
  for (PauliLetter l : p.letters) {
    Mat s(2, 2);
    switch (l) {
      case PauliLetter::I: s << 1, 0, 0, 1; break;
      case PauliLetter::X: s << 0, 1, 1, 0; break;
      case PauliLetter::Y: s << 0, -i, i, 0; break;
      case PauliLetter::Z: s << 1, 0, 0, -1; break;
    }
    Mat next(m.rows() * 2, m.cols() * 2);
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = m(r, c) * s;
    m = std::move(next);
  }
  return p.phase() * m;
}

Eigen::MatrixXd spam_matrix(const std::vector<int>& x) {
  int n = static_cast<int>(x.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    double s = (x[j] == 0) ? 1.0 : -1.0;
    m(2 * j, 2 * j + 1) = s;
    m(2 * j + 1, 2 * j) = -s;
  }
  return m;
}

NormalizationTable normalizations(int n) {
  NormalizationTable t;
  t.n = n;
  t.values.reserve(static_cast<std::size_t>(2 * n + 1));
  for (int k = 0; k <= 2 * n; ++k) {
    // Count of weight-k Majorana products that are diagonal in the SPAM
    // basis: all-Z Paulis pair the modes of single qubits, all-X Paulis
    // combine gamma_1 with the n - 1 crossing pairs gamma_2i gamma_2i+1.
    const std::int64_t b = k % 2 == 0 ? binomial(n, k / 2)
                                      : binomial(n - 1, (k - 1) / 2);
    t.values.push_back(Rational(b * b, pow2(n) * binomial(2 * n, k)));
  }
  return t;
}

std::int64_t subspace_dimension(int n, int k) {
  if (k < 0 || k > 2 * n) throw std::invalid_argument("subspace index out of range");
  return binomial(2 * n, k);
}

std::vector<int> bits_from_index(std::uint64_t index, int n) {
  std::vector<int> x(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) x[j] = static_cast<int>((index >> (n - 1 - j)) & 1u);
  return x;
}

std::uint64_t index_from_bits(const std::vector<int>& x) {
  std::uint64_t v = 0;
  for (int b : x) v = (v << 1) | static_cast<std::uint64_t>(b & 1);
  return v;
}

std::string bits_to_string(const std::vector<int>& x) {
  std::string s;
  s.reserve(x.size());
  for (int b : x) s.push_back(b ? '1' : '0');
  return s;
}

std::vector<int> bits_from_string(const std::string& s) {
  std::vector<int> x;
  x.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw ConfigError("bitstring must contain only 0/1");
    x.push_back(c == '1' ? 1 : 0);
  }
  return x;
}

std::vector<int> subset_from_mask(std::uint32_t mask, int dim) {
  std::vector<int> s;
  for (int j = 0; j < dim; ++j)
    if (mask & (1u << j)) s.push_back(j + 1);
  return s;
}

std::vector<std::uint32_t> subset_masks(int dim, int k) {
  if (k < 0 || k > dim) return {};
  if (k == 0) return {0u};
  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>(binomial(dim, k)));
  std::uint32_t v = (1u << k) - 1u;
  std::uint32_t limit = 1u << dim;
  while (v < limit) {
    out.push_back(v);
    std::uint32_t t = v | (v - 1);
    v = (t + 1) | (((~t & (t + 1)) - 1) >> (__builtin_ctz(v) + 1));
  }
  return out;
}

}  // namespace mgbench
