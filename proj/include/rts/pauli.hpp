// Copyright 2026 The rts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "rts/linalg.hpp"

namespace rts {

// coefficient >= 0; a negative input coefficient is stored as its magnitude
// with `negated` set, so alpha_sum stays the LCU normalization.
constexpr int kMaxDenseQubits = 10;

struct PauliTerm {
  double coefficient = 0.0;
  std::string word;
  bool negated = false;
};

struct PauliSumHamiltonian {
  int n_qubits = 0;
  std::vector<PauliTerm> terms;

  void validate() const {
    require(n_qubits >= 1 && n_qubits <= 1000,
            "hamiltonian: qubit count must lie in [1, 1000]");
    require(!terms.empty(), "hamiltonian: needs at least one term");
    for (const auto& t : terms) {
      require(std::isfinite(t.coefficient) && t.coefficient >= 0.0,
              "hamiltonian: coefficients must be finite and non-negative");
      require(static_cast<int>(t.word.size()) == n_qubits,
              "hamiltonian: Pauli word length must equal the qubit count");
      require(t.word.find_first_not_of("IXYZ") == std::string::npos,
              "hamiltonian: Pauli words use only I, X, Y, Z");
    }
  }

  double alpha_sum() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.coefficient;
    return s;
  }

  int term_count() const { return static_cast<int>(terms.size()); }
};

inline DenseOperator pauli_matrix(char c) {
  DenseOperator m(2, 2);
  const Complex i(0.0, 1.0);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw DomainError(std::string("unknown Pauli letter ") + c);
  }
  return m;
}

// word[0] acts on the most significant qubit.
inline DenseOperator pauli_word_matrix(const std::string& word) {
  DenseOperator out = DenseOperator::Identity(1, 1);
  for (char c : word) out = kron(out, pauli_matrix(c));
  return out;
}

inline DenseOperator to_dense(const PauliSumHamiltonian& h) {
  h.validate();
  require(h.n_qubits <= kMaxDenseQubits,
          "hamiltonian: dense form limited to 10 qubits");
  const Eigen::Index dim = Eigen::Index{1} << h.n_qubits;
  DenseOperator out = DenseOperator::Zero(dim, dim);
  for (const auto& t : h.terms) {
    out += (t.negated ? -t.coefficient : t.coefficient) *
           pauli_word_matrix(t.word);
  }
  return out;
}

// Periodic transverse-field Ising chain: n XX couplings plus n Z fields.
inline PauliSumHamiltonian ising_chain(int n, double coupling, double field) {
  require(n >= 2, "ising: need at least two spins");
  PauliSumHamiltonian h;
  h.n_qubits = n;
  auto add = [&](double c, std::string w) {
    if (c == 0.0) return;
    h.terms.push_back({std::abs(c), std::move(w), c < 0.0});
  };
  for (int i = 0; i < n; ++i) {
    std::string w(n, 'I');
    w[i] = 'X';
    w[(i + 1) % n] = 'X';
    add(coupling, w);
  }
  for (int i = 0; i < n; ++i) {
    std::string w(n, 'I');
    w[i] = 'Z';
    add(field, w);
  }
  h.validate();
  return h;
}

// Lines "<float> <pauli word>"; '#' starts a comment.
inline PauliSumHamiltonian parse_hamiltonian(std::istream& in) {
  PauliSumHamiltonian h;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double c;
    std::string word, extra;
    if (!(ls >> c)) {
      require(line.find_first_not_of(" \t\r") == std::string::npos,
              "hamiltonian file line " + std::to_string(lineno) +
                  ": expected '<float> <pauli word>'");
      continue;
    }
    require(static_cast<bool>(ls >> word) && !(ls >> extra),
            "hamiltonian file line " + std::to_string(lineno) +
                ": expected '<float> <pauli word>'");
    require(std::isfinite(c), "hamiltonian file line " +
                                  std::to_string(lineno) +
                                  ": coefficient must be finite");
    if (h.n_qubits == 0) h.n_qubits = static_cast<int>(word.size());
    h.terms.push_back({std::abs(c), word, c < 0.0});
  }
  h.validate();
  return h;
}

}  // namespace rts
