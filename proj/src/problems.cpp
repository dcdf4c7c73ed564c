#include "qaoamps/problems.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "qaoamps/rng.hpp"

namespace qaoamps {

std::string bits_to_string(const Bitstring& s) {
  std::string out(s.size(), '0');
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i]) out[i] = '1';
  return out;
}

Bitstring bits_from_string(const std::string& s) {
  Bitstring out(s.size(), 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      out[i] = 1;
    } else if (s[i] != '0') {
      throw std::invalid_argument("bitstring must contain only 0 and 1");
    }
  }
  return out;
}

Bitstring bits_from_index(std::uint64_t index, int n) {
  Bitstring out(n, 0);
  for (int k = 0; k < n; ++k)
    out[k] = static_cast<std::uint8_t>((index >> (n - 1 - k)) & 1u);
  return out;
}

std::uint64_t index_of_bits(const Bitstring& s) {
  std::uint64_t idx = 0;
  for (std::uint8_t b : s) idx = (idx << 1) | b;
  return idx;
}

void IsingModel::add_field(int i, double v) {
  if (i < 0 || i >= n) throw std::out_of_range("field index out of range");
  h[i] += v;
}

void IsingModel::add_coupling(int i, int j, double v) {
  if (i == j) throw std::invalid_argument("coupling requires distinct sites");
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n) throw std::out_of_range("coupling index out of range");
  J[{i, j}] += v;
}

double IsingModel::coupling(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = J.find({i, j});
  return it == J.end() ? 0.0 : it->second;
}

int MaxCutInstance::edge_count() const {
  int m = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m += adjacency[i][j];
  return m;
}

std::vector<std::pair<int, int>> MaxCutInstance::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (adjacency[i][j]) out.emplace_back(i, j);
  return out;
}

MaxCutInstance gen_maxcut_er(int n, double w, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_maxcut_er requires n >= 2");
  if (!(w > 0.0 && w < 1.0))
    throw std::invalid_argument("edge probability must lie in (0,1)");
  MaxCutInstance inst;
  inst.n = n;
  inst.seed = seed;
  inst.edge_prob = w;
  inst.adjacency.assign(n, std::vector<std::uint8_t>(n, 0));
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (uniform_unit(rng) < w) {
        inst.adjacency[i][j] = 1;
        inst.adjacency[j][i] = 1;
      }
    }
  }
  return inst;
}

IsingModel maxcut_to_ising(const MaxCutInstance& inst) {
  IsingModel model;
  model.n = inst.n;
  model.h.assign(inst.n, 0.0);
  for (auto [i, j] : inst.edges()) {
    model.constant += -1.0;
    model.add_coupling(i, j, 1.0);
  }
  return model;
}

namespace {

// Sorted distinct triple from the stream, drawn uniformly over index triples.
std::array<int, 3> draw_triple(std::mt19937_64& rng, int n) {
  std::array<int, 3> t;
  for (;;) {
    t[0] = static_cast<int>(uniform_below(rng, n));
    t[1] = static_cast<int>(uniform_below(rng, n));
    t[2] = static_cast<int>(uniform_below(rng, n));
    if (t[0] != t[1] && t[0] != t[2] && t[1] != t[2]) break;
  }
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace

Ec3Generated gen_ec3(int n, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("gen_ec3 requires n >= 3");
  Ec3Generated out;
  out.instance.n = n;
  out.instance.seed = seed;
  std::mt19937_64 rng(seed);
  std::set<std::array<int, 3>> used;
  const std::uint64_t all_triples =
      static_cast<std::uint64_t>(n) * (n - 1) * (n - 2) / 6;

  while (used.size() < all_triples) {
    std::array<int, 3> clause = draw_triple(rng, n);
    if (used.count(clause)) continue;

    auto candidate = out.instance.clauses;
    candidate.push_back(clause);
    if (exact_cover_solve(n, candidate)) {
      used.insert(clause);
      out.instance.clauses = std::move(candidate);
    } else {
      out.dropped_clause = clause;
      return out;
    }
  }
  return out;  // every triple used while still satisfiable (tiny n only)
}

IsingModel ec3_to_ising(const Ec3Instance& inst) {
  IsingModel model;
  model.n = inst.n;
  model.h.assign(inst.n, 0.0);
  for (const auto& c : inst.clauses) {
    model.constant += 1.0;
    for (int k = 0; k < 3; ++k) model.add_field(c[k], 0.5);
    model.add_coupling(c[0], c[1], 0.5);
    model.add_coupling(c[0], c[2], 0.5);
    model.add_coupling(c[1], c[2], 0.5);
  }
  return model;
}

double classical_energy(const IsingModel& model, const Bitstring& s) {
  if (static_cast<int>(s.size()) != model.n)
    throw std::invalid_argument("bitstring length does not match model size");
  double e = model.constant;
  for (int i = 0; i < model.n; ++i) e += model.h[i] * spin_of(s[i]);
  for (const auto& [pair, j] : model.J)
    e += j * spin_of(s[pair.first]) * spin_of(s[pair.second]);
  return e;
}

bool ec3_satisfied(const Ec3Instance& inst, const Bitstring& s) {
  if (static_cast<int>(s.size()) != inst.n)
    throw std::invalid_argument("bitstring length does not match instance");
  for (const auto& c : inst.clauses) {
    int ones = s[c[0]] + s[c[1]] + s[c[2]];
    if (ones != 1) return false;
  }
  return true;
}

GroundResult brute_force_ground(const IsingModel& model) {
  if (model.n > 24)
    throw std::invalid_argument(
        "brute_force_ground supports n <= 24; supply an external certificate");
  const int n = model.n;
  const std::uint64_t total = 1ULL << n;

  // Adjacency lists for Gray-code incremental updates.
  std::vector<std::vector<std::pair<int, double>>> neighbors(n);
  for (const auto& [pair, j] : model.J) {
    neighbors[pair.first].emplace_back(pair.second, j);
    neighbors[pair.second].emplace_back(pair.first, j);
  }

  std::vector<int> z(n, -1);  // all-zero bitstring
  Bitstring s(n, 0);
  double e = classical_energy(model, s);

  GroundResult result;
  result.energy = e;
  result.minimizers.push_back(s);
  const double tol = 1e-9;

  for (std::uint64_t g = 1; g < total; ++g) {
    // Bit flipped between consecutive Gray codes; bit 0 is qubit n (LSB).
    const int lsb = static_cast<int>(__builtin_ctzll(g));
    const int site = n - 1 - lsb;
    double local = model.h[site];
    for (auto [other, j] : neighbors[site]) local += j * z[other];
    e += -2.0 * z[site] * local;
    z[site] = -z[site];
    s[site] ^= 1;

    if (e < result.energy - tol) {
      result.energy = e;
      result.minimizers.clear();
      result.minimizers.push_back(s);
    } else if (e <= result.energy + tol) {
      result.minimizers.push_back(s);
    }
  }
  std::sort(result.minimizers.begin(), result.minimizers.end());
  return result;
}

// ---------------------------------------------------------------------------
// Exact-cover search (Algorithm X with dancing links). Elements are clauses;
// the set for variable j covers the clauses containing j. Choosing a set of
// variables that covers every clause exactly once is an EC3 solution.
// ---------------------------------------------------------------------------

namespace {

struct DlxNode {
  int left, right, up, down;
  int col;   // column header index
  int row;   // variable index, -1 for headers
};

class DlxSolver {
 public:
  DlxSolver(int n_vars, const std::vector<std::array<int, 3>>& clauses)
      : n_cols_(static_cast<int>(clauses.size())) {
    // Header ring: node 0 is the root, nodes 1..n_cols are column heads.
    nodes_.reserve(1 + n_cols_ + 3 * clauses.size());
    nodes_.push_back({0, 0, 0, 0, -1, -1});
    col_size_.assign(n_cols_ + 1, 0);
    for (int c = 1; c <= n_cols_; ++c) {
      nodes_.push_back({c - 1, 0, c, c, c, -1});
      nodes_[c - 1].right = c;
      nodes_[0].left = c;
    }

    std::vector<std::vector<int>> rows(n_vars);
    for (std::size_t m = 0; m < clauses.size(); ++m)
      for (int k = 0; k < 3; ++k)
        rows[clauses[m][k]].push_back(static_cast<int>(m) + 1);

    for (int v = 0; v < n_vars; ++v) {
      int first = -1;
      for (int c : rows[v]) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back({id, id, nodes_[c].up, c, c, v});
        nodes_[nodes_[c].up].down = id;
        nodes_[c].up = id;
        ++col_size_[c];
        if (first < 0) {
          first = id;
        } else {
          nodes_[id].left = nodes_[first].left;
          nodes_[id].right = first;
          nodes_[nodes_[first].left].right = id;
          nodes_[first].left = id;
        }
      }
    }
  }

  std::optional<std::vector<int>> solve() {
    chosen_.clear();
    if (search()) return chosen_;
    return std::nullopt;
  }

 private:
  void cover(int c) {
    nodes_[nodes_[c].right].left = nodes_[c].left;
    nodes_[nodes_[c].left].right = nodes_[c].right;
    for (int i = nodes_[c].down; i != c; i = nodes_[i].down) {
      for (int j = nodes_[i].right; j != i; j = nodes_[j].right) {
        nodes_[nodes_[j].down].up = nodes_[j].up;
        nodes_[nodes_[j].up].down = nodes_[j].down;
        --col_size_[nodes_[j].col];
      }
    }
  }

  void uncover(int c) {
    for (int i = nodes_[c].up; i != c; i = nodes_[i].up) {
      for (int j = nodes_[i].left; j != i; j = nodes_[j].left) {
        ++col_size_[nodes_[j].col];
        nodes_[nodes_[j].down].up = j;
        nodes_[nodes_[j].up].down = j;
      }
    }
    nodes_[nodes_[c].right].left = c;
    nodes_[nodes_[c].left].right = c;
  }

  bool search() {
    if (nodes_[0].right == 0) return true;
    // Unit propagation falls out of min-size column selection.
    int best = nodes_[0].right;
    for (int c = nodes_[0].right; c != 0; c = nodes_[c].right)
      if (col_size_[c] < col_size_[best]) best = c;
    if (col_size_[best] == 0) return false;

    cover(best);
    for (int i = nodes_[best].down; i != best; i = nodes_[i].down) {
      chosen_.push_back(nodes_[i].row);
      for (int j = nodes_[i].right; j != i; j = nodes_[j].right)
        cover(nodes_[j].col);
      if (search()) return true;
      for (int j = nodes_[i].left; j != i; j = nodes_[j].left)
        uncover(nodes_[j].col);
      chosen_.pop_back();
    }
    uncover(best);
    return false;
  }

  int n_cols_;
  std::vector<DlxNode> nodes_;
  std::vector<int> col_size_;
  std::vector<int> chosen_;
};

}  // namespace

std::optional<Bitstring> exact_cover_solve(
    int n, const std::vector<std::array<int, 3>>& clauses) {
  if (clauses.empty()) return Bitstring(n, 0);
  DlxSolver solver(n, clauses);
  auto chosen = solver.solve();
  if (!chosen) return std::nullopt;
  Bitstring s(n, 0);
  for (int v : *chosen) s[v] = 1;
  return s;
}

Certificate local_search_certificate(const IsingModel& model, int restarts,
                                     std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  const int n = model.n;
  std::vector<std::vector<std::pair<int, double>>> neighbors(n);
  for (const auto& [pair, j] : model.J) {
    neighbors[pair.first].emplace_back(pair.second, j);
    neighbors[pair.second].emplace_back(pair.first, j);
  }

  Certificate best;
  bool have_best = false;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    Bitstring s(n);
    for (int i = 0; i < n; ++i) s[i] = static_cast<std::uint8_t>(rng() & 1u);
    double e = classical_energy(model, s);

    // Steepest descent on single-bit flips.
    for (;;) {
      int best_site = -1;
      double best_delta = -1e-12;
      for (int i = 0; i < n; ++i) {
        double local = model.h[i];
        for (auto [other, j] : neighbors[i]) local += j * spin_of(s[other]);
        const double delta = -2.0 * spin_of(s[i]) * local;
        if (delta < best_delta) {
          best_delta = delta;
          best_site = i;
        }
      }
      if (best_site < 0) break;
      s[best_site] ^= 1;
      e += best_delta;
    }

    if (!have_best || e < best.energy) {
      best.energy = e;
      best.witness = s;
      have_best = true;
    }
  }
  best.energy = classical_energy(model, best.witness);  // exact re-evaluation
  best.optimal = false;
  return best;
}

}  // namespace qaoamps
