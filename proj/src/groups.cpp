#include "coarsekit/groups.hpp"

#include <cstdlib>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace coarsekit::groups {

namespace {

using Element = std::vector<long long>;
using Matrix = std::vector<std::vector<long long>>;

long long det_rec(const Matrix& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  long long d = 0;
  long long sign = 1;
  for (std::size_t c = 0; c < n; ++c) {
    Matrix minor(n - 1, std::vector<long long>(n - 1));
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t cc = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == c) continue;
        minor[i - 1][cc++] = m[i][j];
      }
    }
    d += sign * m[0][c] * det_rec(minor);
    sign = -sign;
  }
  return d;
}

Matrix integer_inverse(const Matrix& m) {
  const std::size_t n = m.size();
  if (n > 5) throw std::invalid_argument("integer_matrix: generators supported up to 5x5");
  const long long d = det_rec(m);
  if (d != 1 && d != -1) {
    throw std::invalid_argument("integer_matrix: generator is not invertible over the integers");
  }
  Matrix inv(n, std::vector<long long>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Matrix minor(n - 1, std::vector<long long>(n - 1));
      std::size_t ri = 0;
      for (std::size_t a = 0; a < n; ++a) {
        if (a == j) continue;
        std::size_t ci = 0;
        for (std::size_t b = 0; b < n; ++b) {
          if (b == i) continue;
          minor[ri][ci++] = m[a][b];
        }
        ++ri;
      }
      const long long cof = ((i + j) % 2 == 0 ? 1 : -1) * (n == 1 ? 1 : det_rec(minor));
      inv[i][j] = d * cof;
    }
  }
  return inv;
}

/// Per-kind group arithmetic on flat element encodings.
struct GroupOps {
  GroupSpec::Kind kind;
  int rank = 0;        // FreeAbelian / Free
  int mat_n = 0;       // IntegerMatrix
  std::vector<Element> gens;  // flattened generator actions

  std::size_t gen_count() const {
    return kind == GroupSpec::Kind::IntegerMatrix ? gens.size()
                                                  : static_cast<std::size_t>(2 * rank);
  }

  Element identity() const {
    switch (kind) {
      case GroupSpec::Kind::FreeAbelian:
        return Element(static_cast<std::size_t>(rank), 0);
      case GroupSpec::Kind::Free:
        return Element{};
      case GroupSpec::Kind::IntegerMatrix: {
        Element e(static_cast<std::size_t>(mat_n) * mat_n, 0);
        for (int i = 0; i < mat_n; ++i) e[static_cast<std::size_t>(i) * mat_n + i] = 1;
        return e;
      }
    }
    throw std::logic_error("unreachable");
  }

  /// Right multiplication by generator g (0-based; for rank groups, even
  /// indices are generators and odd indices their inverses).
  Element step(const Element& x, std::size_t g) const {
    switch (kind) {
      case GroupSpec::Kind::FreeAbelian: {
        Element y = x;
        const std::size_t coord = g / 2;
        y[coord] += (g % 2 == 0) ? 1 : -1;
        return y;
      }
      case GroupSpec::Kind::Free: {
        // Letters are 1-based; negatives are inverses. Reduced words only.
        const long long letter =
            (g % 2 == 0) ? static_cast<long long>(g / 2 + 1) : -static_cast<long long>(g / 2 + 1);
        Element y = x;
        if (!y.empty() && y.back() == -letter) {
          y.pop_back();
        } else {
          y.push_back(letter);
        }
        return y;
      }
      case GroupSpec::Kind::IntegerMatrix: {
        const Element& m = gens[g];
        Element y(static_cast<std::size_t>(mat_n) * mat_n, 0);
        for (int i = 0; i < mat_n; ++i) {
          for (int k = 0; k < mat_n; ++k) {
            const long long xv = x[static_cast<std::size_t>(i) * mat_n + k];
            if (xv == 0) continue;
            for (int j = 0; j < mat_n; ++j) {
              y[static_cast<std::size_t>(i) * mat_n + j] +=
                  xv * m[static_cast<std::size_t>(k) * mat_n + j];
            }
          }
        }
        return y;
      }
    }
    throw std::logic_error("unreachable");
  }

  std::string encode(const Element& x) const {
    switch (kind) {
      case GroupSpec::Kind::FreeAbelian: {
        std::ostringstream os;
        os << '(';
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (i) os << ',';
          os << x[i];
        }
        os << ')';
        return os.str();
      }
      case GroupSpec::Kind::Free: {
        if (x.empty()) return "e";
        std::string s;
        for (long long letter : x) {
          s += letter > 0 ? static_cast<char>('a' + letter - 1)
                          : static_cast<char>('A' - letter - 1);
        }
        return s;
      }
      case GroupSpec::Kind::IntegerMatrix: {
        std::ostringstream os;
        for (int i = 0; i < mat_n; ++i) {
          if (i) os << ';';
          for (int j = 0; j < mat_n; ++j) {
            if (j) os << ',';
            os << x[static_cast<std::size_t>(i) * mat_n + j];
          }
        }
        return os.str();
      }
    }
    throw std::logic_error("unreachable");
  }
};

GroupOps make_ops(const GroupSpec& spec) {
  GroupOps ops;
  ops.kind = spec.kind;
  switch (spec.kind) {
    case GroupSpec::Kind::FreeAbelian:
    case GroupSpec::Kind::Free:
      if (spec.rank < 1) throw std::invalid_argument("group rank must be positive");
      if (spec.kind == GroupSpec::Kind::Free && spec.rank > 26) {
        throw std::invalid_argument("free group rank supported up to 26");
      }
      ops.rank = spec.rank;
      break;
    case GroupSpec::Kind::IntegerMatrix: {
      if (spec.generators.empty()) {
        throw std::invalid_argument("integer_matrix: at least one generator required");
      }
      const std::size_t n = spec.generators[0].size();
      if (n == 0) throw std::invalid_argument("integer_matrix: empty generator");
      ops.mat_n = static_cast<int>(n);
      auto flatten = [n](const Matrix& m) {
        Element e;
        e.reserve(n * n);
        for (const auto& row : m) e.insert(e.end(), row.begin(), row.end());
        return e;
      };
      std::vector<Element> flat;
      for (const auto& g : spec.generators) {
        if (g.size() != n) throw std::invalid_argument("integer_matrix: generators must share one size");
        for (const auto& row : g) {
          if (row.size() != n) throw std::invalid_argument("integer_matrix: generator is not square");
        }
        flat.push_back(flatten(g));
        flat.push_back(flatten(integer_inverse(g)));
      }
      // Drop duplicates (an involution equals its own inverse) keeping order.
      for (const auto& e : flat) {
        bool seen = false;
        for (const auto& have : ops.gens) seen = seen || have == e;
        if (!seen) ops.gens.push_back(e);
      }
      break;
    }
  }
  return ops;
}

}  // namespace

GroupSpec GroupSpec::free_abelian(int rank) {
  GroupSpec s;
  s.kind = Kind::FreeAbelian;
  s.rank = rank;
  return s;
}

GroupSpec GroupSpec::free_group(int rank) {
  GroupSpec s;
  s.kind = Kind::Free;
  s.rank = rank;
  return s;
}

GroupSpec GroupSpec::integer_matrix(std::vector<std::vector<std::vector<long long>>> gens) {
  GroupSpec s;
  s.kind = Kind::IntegerMatrix;
  s.generators = std::move(gens);
  return s;
}

GroupSpec heisenberg_spec() {
  return GroupSpec::integer_matrix({
      {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}},
      {{1, 0, 0}, {0, 1, 1}, {0, 0, 1}},
  });
}

std::size_t default_node_cap() {
  if (const char* env = std::getenv("COARSEKIT_NODE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 200000;
}

CayleyBall cayley_ball(const GroupSpec& spec, int radius, std::size_t node_cap) {
  if (radius < 0) throw std::invalid_argument("cayley_ball: radius must be nonnegative");
  if (node_cap == 0) node_cap = default_node_cap();
  const GroupOps ops = make_ops(spec);

  // Breadth-first exploration to depth 2*radius. Discovery order (layer by
  // layer, parents in index order, generators in declaration order) fixes the
  // point numbering deterministically.
  std::map<Element, std::uint32_t> index;
  std::vector<Element> elems;
  std::vector<int> depth;
  std::vector<std::vector<std::uint32_t>> adj;

  const Element id = ops.identity();
  index.emplace(id, 0);
  elems.push_back(id);
  depth.push_back(0);
  adj.emplace_back();

  std::size_t ball_count = 1;
  for (std::uint32_t u = 0; u < elems.size(); ++u) {
    if (depth[u] >= 2 * radius) continue;
    for (std::size_t g = 0; g < ops.gen_count(); ++g) {
      const Element v = ops.step(elems[u], g);
      auto it = index.find(v);
      std::uint32_t vi;
      if (it == index.end()) {
        if (elems.size() >= node_cap) {
          std::ostringstream os;
          os << "cayley_ball: exploration exceeded the node cap (" << node_cap
             << "); raise COARSEKIT_NODE_CAP or pass a larger cap";
          throw std::runtime_error(os.str());
        }
        vi = static_cast<std::uint32_t>(elems.size());
        index.emplace(v, vi);
        elems.push_back(v);
        depth.push_back(depth[u] + 1);
        adj.emplace_back();
        if (depth[vi] <= radius) ++ball_count;
      } else {
        vi = it->second;
      }
      if (vi != u) {
        adj[u].push_back(vi);
        adj[vi].push_back(u);
      }
    }
  }

  // Discovery is layered, so the ball is the prefix of the numbering.
  const std::size_t m = ball_count;
  std::vector<std::vector<double>> rows(m, std::vector<double>(m, 0.0));
  std::vector<int> d(elems.size());
  std::deque<std::uint32_t> queue;
  for (std::size_t src = 0; src < m; ++src) {
    std::fill(d.begin(), d.end(), -1);
    d[src] = 0;
    queue.clear();
    queue.push_back(static_cast<std::uint32_t>(src));
    while (!queue.empty()) {
      const std::uint32_t u = queue.front();
      queue.pop_front();
      for (std::uint32_t v : adj[u]) {
        if (d[v] < 0) {
          d[v] = d[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      rows[src][j] = static_cast<double>(d[j]);
    }
  }

  std::vector<std::string> ids(m);
  for (std::size_t i = 0; i < m; ++i) ids[i] = ops.encode(elems[i]);

  std::ostringstream label;
  switch (spec.kind) {
    case GroupSpec::Kind::FreeAbelian:
      label << "z" << spec.rank;
      break;
    case GroupSpec::Kind::Free:
      label << "free" << spec.rank;
      break;
    case GroupSpec::Kind::IntegerMatrix:
      label << "matrix-group";
      break;
  }
  label << "-ball-r" << radius;

  CayleyBall out;
  out.space = metric::MetricSpace::from_matrix(label.str(), std::move(ids), std::move(rows));
  out.depth.assign(depth.begin(), depth.begin() + static_cast<long>(m));
  out.radius = radius;
  return out;
}

}  // namespace coarsekit::groups
