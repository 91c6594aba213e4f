#ifndef QRELKIT_TESTS_ORACLE_CLASSICAL_HPP
#define QRELKIT_TESTS_ORACLE_CLASSICAL_HPP

#include <random>
#include <vector>

#include "qrelkit/qrel.hpp"

// Brute-force boolean relations used as the ground truth on all-1-dim
// quantum sets.
namespace oracle {

struct BoolRel {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<std::vector<bool>> at;  // at[x][y]

  BoolRel() = default;
  BoolRel(std::size_t nx_, std::size_t ny_)
      : nx(nx_), ny(ny_), at(nx_, std::vector<bool>(ny_, false)) {}
};

inline BoolRel random_rel(std::size_t nx, std::size_t ny, std::mt19937_64& rng) {
  BoolRel r(nx, ny);
  std::bernoulli_distribution coin(0.4);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) r.at[x][y] = coin(rng);
  return r;
}

inline BoolRel compose(const BoolRel& s, const BoolRel& r) {
  BoolRel out(r.nx, s.ny);
  for (std::size_t x = 0; x < r.nx; ++x)
    for (std::size_t z = 0; z < s.ny; ++z)
      for (std::size_t y = 0; y < r.ny; ++y)
        if (r.at[x][y] && s.at[y][z]) out.at[x][z] = true;
  return out;
}

inline BoolRel converse(const BoolRel& r) {
  BoolRel out(r.ny, r.nx);
  for (std::size_t x = 0; x < r.nx; ++x)
    for (std::size_t y = 0; y < r.ny; ++y) out.at[y][x] = r.at[x][y];
  return out;
}

inline bool leq(const BoolRel& r, const BoolRel& s) {
  for (std::size_t x = 0; x < r.nx; ++x)
    for (std::size_t y = 0; y < r.ny; ++y)
      if (r.at[x][y] && !s.at[x][y]) return false;
  return true;
}

inline BoolRel join(const BoolRel& r, const BoolRel& s) {
  BoolRel out(r.nx, r.ny);
  for (std::size_t x = 0; x < r.nx; ++x)
    for (std::size_t y = 0; y < r.ny; ++y) out.at[x][y] = r.at[x][y] || s.at[x][y];
  return out;
}

inline BoolRel meet(const BoolRel& r, const BoolRel& s) {
  BoolRel out(r.nx, r.ny);
  for (std::size_t x = 0; x < r.nx; ++x)
    for (std::size_t y = 0; y < r.ny; ++y) out.at[x][y] = r.at[x][y] && s.at[x][y];
  return out;
}

inline BoolRel product(const BoolRel& r, const BoolRel& s) {
  BoolRel out(r.nx * s.nx, r.ny * s.ny);
  for (std::size_t x1 = 0; x1 < r.nx; ++x1)
    for (std::size_t x2 = 0; x2 < s.nx; ++x2)
      for (std::size_t y1 = 0; y1 < r.ny; ++y1)
        for (std::size_t y2 = 0; y2 < s.ny; ++y2)
          out.at[x1 * s.nx + x2][y1 * s.ny + y2] = r.at[x1][y1] && s.at[x2][y2];
  return out;
}

inline bool is_function(const BoolRel& r) {
  for (std::size_t x = 0; x < r.nx; ++x) {
    std::size_t count = 0;
    for (std::size_t y = 0; y < r.ny; ++y)
      if (r.at[x][y]) ++count;
    if (count != 1) return false;
  }
  return true;
}

inline qrelkit::QuantumSet classical_set(std::size_t n, const std::string& prefix) {
  std::vector<qrelkit::Atom> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back({prefix + std::to_string(i), 1});
  return qrelkit::QuantumSet{std::move(atoms)};
}

inline qrelkit::QRelation to_qrel(const BoolRel& r, const qrelkit::QuantumSet& dom,
                                  const qrelkit::QuantumSet& cod) {
  qrelkit::QRelation out(dom, cod);
  for (std::size_t x = 0; x < r.nx; ++x)
    for (std::size_t y = 0; y < r.ny; ++y)
      if (r.at[x][y]) out.set(x, y, qrelkit::full_subspace(1, 1));
  return out;
}

inline BoolRel from_qrel(const qrelkit::QRelation& r) {
  BoolRel out(r.dom.size(), r.cod.size());
  for (const auto& [key, sub] : r.components) out.at[key.first][key.second] = !sub.is_zero();
  return out;
}

inline bool same(const BoolRel& a, const BoolRel& b) {
  return a.nx == b.nx && a.ny == b.ny && a.at == b.at;
}

}  // namespace oracle

#endif
