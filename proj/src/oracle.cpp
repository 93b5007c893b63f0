#include "spectree/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <json.hpp>

#include "spectree/reduced.hpp"

namespace spectree {

namespace {

// Stencil node ids: >= 0 mesh node, -1 Dirichlet endpoint (value 0),
// -2 not available at uniform spacing.
constexpr std::int32_t kDirichlet = -1;
constexpr std::int32_t kMissing = -2;

/// Mesh of the truncated tree: piecewise-linear elements with lumped mass.
/// Nodes are indexed so that parent[i] < i (root side first), which makes
/// the stiffness/mass pencil factorizable leaves-to-root without fill-in.
struct TreeMesh {
  std::vector<std::int32_t> parent;  // kDirichlet: attached to root or cut
  std::vector<double> off;           // stiffness coupling to the parent
  std::vector<double> sdiag;         // stiffness diagonal incl. potential
  std::vector<double> mdiag;         // lumped mass diagonal
  std::vector<double> pos;           // |x| of the node

  struct Branch {
    double h = 0.0;
    std::int32_t n1 = kMissing;  // node one mesh step from the vertex
    std::int32_t n2 = kMissing;  // node two mesh steps from the vertex
  };
  struct VertexStencil {
    std::int32_t node = kMissing;
    Branch in;
    std::vector<Branch> out;
    bool usable() const {
      if (in.n2 == kMissing) return false;
      for (const auto& br : out)
        if (br.n2 == kMissing) return false;
      return true;
    }
  };
  std::vector<VertexStencil> vertices;

  std::size_t size() const { return parent.size(); }
};

TreeMesh build_mesh(const TreeSpec& tree, const Potential& V, int K, double h) {
  if (K < 1) throw ValidationError("oracle needs truncation generation K >= 1");
  if (!(h > 0.0)) throw ValidationError("oracle needs mesh step h > 0");

  TreeMesh mesh;
  const auto new_node = [&](double t) {
    mesh.parent.push_back(kDirichlet);
    mesh.off.push_back(0.0);
    mesh.sdiag.push_back(0.0);
    mesh.mdiag.push_back(0.0);
    mesh.pos.push_back(t);
    if (mesh.size() > 200000)
      throw ValidationError("truncated tree mesh exceeds the size cap");
    return static_cast<std::int32_t>(mesh.size() - 1);
  };
  const auto link = [&](std::int32_t node, std::int32_t par, double he) {
    mesh.parent[node] = par;
    mesh.off[node] = -1.0 / he;
    mesh.sdiag[node] += 1.0 / he;
    mesh.mdiag[node] += 0.5 * he;
    if (par >= 0) {
      mesh.sdiag[par] += 1.0 / he;
      mesh.mdiag[par] += 0.5 * he;
    }
  };

  struct PendingEdge {
    std::int32_t parent_node;   // kDirichlet at the root
    std::int32_t parent_slot;   // stencil slot of the parent vertex, or -1
    int gen;
  };
  std::deque<PendingEdge> queue;
  queue.push_back({kDirichlet, -1, 0});

  while (!queue.empty()) {
    const PendingEdge e = queue.front();
    queue.pop_front();
    const double t0 = tree.t(static_cast<std::size_t>(e.gen));
    const double t1 = tree.t(static_cast<std::size_t>(e.gen) + 1);
    const double len = t1 - t0;
    const auto nseg = static_cast<std::size_t>(std::max(1.0, std::round(len / h)));
    const double he = len / static_cast<double>(nseg);

    std::int32_t prev = e.parent_node;
    std::int32_t prev2 = kMissing;
    std::int32_t first = kMissing, second = kMissing;
    for (std::size_t i = 1; i < nseg; ++i) {
      const std::int32_t node = new_node(t0 + static_cast<double>(i) * he);
      link(node, prev, he);
      prev2 = prev;
      prev = node;
      if (i == 1) first = node;
      if (i == 2) second = node;
    }

    std::int32_t terminal = kDirichlet;  // cut vertices carry the value 0
    if (e.gen + 1 < K) {
      const std::int32_t v = new_node(t1);
      link(v, prev, he);
      terminal = v;
      TreeMesh::VertexStencil st;
      st.node = v;
      st.in = {he, prev, nseg >= 2 ? prev2 : kMissing};
      mesh.vertices.push_back(st);
      const auto slot = static_cast<std::int32_t>(mesh.vertices.size() - 1);
      const int b = tree.b(static_cast<std::size_t>(e.gen) + 1);
      for (int c = 0; c < b; ++c) queue.push_back({v, slot, e.gen + 1});
    } else if (prev >= 0) {
      // Dirichlet cut: the last mesh segment touches only `prev`
      mesh.sdiag[prev] += 1.0 / he;
      mesh.mdiag[prev] += 0.5 * he;
    }

    if (e.parent_slot >= 0) {
      // one-sided stencil of the parent vertex into this edge; Dirichlet
      // terminals participate with the value 0
      TreeMesh::Branch br;
      br.h = he;
      br.n1 = nseg >= 2 ? first : terminal;
      br.n2 = nseg >= 3 ? second : (nseg == 2 ? terminal : kMissing);
      mesh.vertices[static_cast<std::size_t>(e.parent_slot)].out.push_back(br);
    }
  }

  for (std::size_t i = 0; i < mesh.size(); ++i)
    mesh.sdiag[i] += V(mesh.pos[i]) * mesh.mdiag[i];

  return mesh;
}

/// Negative inertia of A - lambda M: the eigenvalue count below lambda.
std::int64_t mesh_count(const TreeMesh& mesh, double lambda) {
  const std::size_t n = mesh.size();
  std::vector<double> acc(n, 0.0);
  std::int64_t neg = 0;
  for (std::size_t ii = n; ii-- > 0;) {
    double d = mesh.sdiag[ii] - lambda * mesh.mdiag[ii] - acc[ii];
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++neg;
    const std::int32_t p = mesh.parent[ii];
    if (p >= 0) acc[static_cast<std::size_t>(p)] += mesh.off[ii] * mesh.off[ii] / d;
  }
  return neg;
}

/// Solve (A - sigma M) x = b in place by the leaves-to-root factorization.
void mesh_solve(const TreeMesh& mesh, double sigma, std::vector<double>& x) {
  const std::size_t n = mesh.size();
  std::vector<double> d(n), l(n, 0.0), acc(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double di = mesh.sdiag[ii] - sigma * mesh.mdiag[ii] - acc[ii];
    if (di == 0.0) di = 1e-300;
    d[ii] = di;
    const std::int32_t p = mesh.parent[ii];
    if (p >= 0) {
      l[ii] = mesh.off[ii] / di;
      acc[static_cast<std::size_t>(p)] += mesh.off[ii] * mesh.off[ii] / di;
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    const std::int32_t p = mesh.parent[ii];
    if (p >= 0) x[static_cast<std::size_t>(p)] -= l[ii] * x[ii];
  }
  for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t p = mesh.parent[i];
    if (p >= 0) x[i] -= l[i] * x[static_cast<std::size_t>(p)];
  }
}

std::vector<double> mesh_eigenvector(const TreeMesh& mesh, double lambda) {
  const std::size_t n = mesh.size();
  const double sigma = lambda + 1e-7 * std::max(1.0, std::abs(lambda));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = 1.0 + 0.3 * std::sin(3.7 * static_cast<double>(i + 1));
  for (int it = 0; it < 4; ++it) {
    mesh_solve(mesh, sigma, x);
    double m = 0.0;
    for (const double v : x) m = std::max(m, std::abs(v));
    if (m == 0.0) break;
    for (double& v : x) v /= m;
  }
  return x;
}

/// Flux imbalance at the vertices from second-order one-sided differences,
/// scaled by (1 + lambda) * max|u|.
double kirchhoff_residual(const TreeMesh& mesh, const std::vector<double>& u,
                          double lambda) {
  const auto val = [&](std::int32_t id) {
    return id >= 0 ? u[static_cast<std::size_t>(id)] : 0.0;
  };
  double umax = 0.0;
  for (const double v : u) umax = std::max(umax, std::abs(v));
  if (umax == 0.0) return 0.0;
  double worst = 0.0;
  for (const auto& st : mesh.vertices) {
    if (!st.usable()) continue;
    const double uv = val(st.node);
    const double din =
        (3.0 * uv - 4.0 * val(st.in.n1) + val(st.in.n2)) / (2.0 * st.in.h);
    double dout = 0.0;
    for (const auto& br : st.out)
      dout += (-3.0 * uv + 4.0 * val(br.n1) - val(br.n2)) / (2.0 * br.h);
    worst = std::max(worst, std::abs(dout - din));
  }
  return worst / ((1.0 + std::abs(lambda)) * umax);
}

std::vector<std::size_t> cluster_sizes(const std::vector<double>& sorted,
                                       double rel_tol) {
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() &&
           sorted[j] - sorted[j - 1] <= rel_tol * (1.0 + std::abs(sorted[j])))
      ++j;
    sizes.push_back(j - i);
    i = j;
  }
  return sizes;
}

std::vector<double> mesh_eigenvalues(const TreeMesh& mesh, double lower_bound,
                                     std::size_t n) {
  const auto cnt = [&mesh](double lam) { return mesh_count(mesh, lam); };
  double lo = std::isfinite(lower_bound) ? lower_bound : -1.0;
  double hi = std::max(1.0, lo + 1.0);
  for (int it = 0; it < 200 && cnt(hi) < static_cast<std::int64_t>(n); ++it)
    hi = hi * 2.0 + 1.0;
  return detail::bisect_eigenvalues(cnt, lo, hi, n, 1e-13);
}

}  // namespace

OracleResult full_tree_eigenvalues(const TreeSpec& tree, const Potential& potential,
                                   int K, double h, std::size_t n,
                                   std::optional<double> requested_accuracy) {
  const TreeMesh mesh = build_mesh(tree, potential, K, h);
  if (mesh.size() < n)
    throw ValidationError("mesh has fewer unknowns than requested eigenvalues");
  OracleResult res;
  res.h = h;
  res.K = K;
  res.unknowns = mesh.size();
  res.eigenvalues = mesh_eigenvalues(mesh, potential.lower_bound(), n);
  res.clusters = cluster_sizes(res.eigenvalues, 1e-7);

  double worst = 0.0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (const double lam : res.eigenvalues) {
    if (lam == prev) continue;  // same cluster, same eigenspace
    const std::vector<double> u = mesh_eigenvector(mesh, lam);
    worst = std::max(worst, kirchhoff_residual(mesh, u, lam));
    prev = lam;
  }
  res.max_kirchhoff_residual = worst;

  if (requested_accuracy) {
    const TreeMesh fine = build_mesh(tree, potential, K, 0.5 * h);
    const std::vector<double> lam2 =
        mesh_eigenvalues(fine, potential.lower_bound(), n);
    for (std::size_t i = 0; i < n && i < lam2.size(); ++i) {
      const double est = std::abs(lam2[i] - res.eigenvalues[i]) / 3.0;
      if (est > *requested_accuracy * std::max(1.0, std::abs(lam2[i])))
        throw MeshTooCoarse("Richardson h/2 estimate exceeds the requested accuracy");
    }
  }
  return res;
}

std::int64_t oracle_count(const TreeSpec& tree, const Potential& potential,
                          int K, double h, double lambda) {
  const TreeMesh mesh = build_mesh(tree, potential, K, h);
  return mesh_count(mesh, lambda);
}

AssemblyCheck assembly_check(
    const TreeSpec& tree, const Potential& potential, int K, double h,
    std::size_t n, double tolerance_factor,
    const std::optional<std::vector<std::int64_t>>& multiplicity_override) {
  AssemblyCheck chk;
  chk.tolerance_factor = tolerance_factor;

  const OracleResult oracle = full_tree_eigenvalues(tree, potential, K, h, n);
  chk.oracle = oracle.eigenvalues;
  if (chk.oracle.empty()) throw ValidationError("oracle produced no eigenvalues");
  const double cap = chk.oracle.back() * 1.001 + 1.0;

  const double T = tree.t(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const ReducedProblem pr = build_reduced_problem(
        tree, static_cast<std::size_t>(k), potential, {},
        CutoffSpec{T, RightBC::dirichlet});
    const std::vector<double> ev = eigenvalues_below(pr, cap, n, 1e-12);
    std::int64_t m = tree.reduced_multiplicity(static_cast<std::size_t>(k));
    if (multiplicity_override &&
        static_cast<std::size_t>(k) < multiplicity_override->size())
      m = (*multiplicity_override)[static_cast<std::size_t>(k)];
    for (const double lam : ev)
      for (std::int64_t c = 0; c < m; ++c) chk.assembled.push_back(lam);
  }
  std::sort(chk.assembled.begin(), chk.assembled.end());
  if (chk.assembled.size() > n) chk.assembled.resize(n);

  chk.values_match = chk.assembled.size() == chk.oracle.size();
  for (std::size_t i = 0; i < chk.assembled.size() && i < chk.oracle.size(); ++i) {
    const double o = chk.oracle[i];
    const double dev = std::abs(chk.assembled[i] - o) / std::abs(o);
    chk.rel_dev.push_back(dev);
    chk.max_rel_dev = std::max(chk.max_rel_dev, dev);
    if (dev > tolerance_factor * h * h * std::abs(o)) chk.values_match = false;
  }

  chk.assembled_clusters = cluster_sizes(chk.assembled, 1e-7);
  chk.oracle_clusters = oracle.clusters;
  chk.multiplicity_match = chk.assembled_clusters == chk.oracle_clusters;
  chk.pass = chk.values_match && chk.multiplicity_match;
  return chk;
}

std::string AssemblyCheck::to_json(int K, double h) const {
  nlohmann::json j;
  j["K"] = K;
  j["h"] = h;
  j["assembled"] = assembled;
  j["oracle"] = oracle;
  j["rel_dev"] = rel_dev;
  j["max_rel_dev"] = max_rel_dev;
  j["tolerance_factor"] = tolerance_factor;
  j["values_match"] = values_match;
  j["multiplicity_match"] = multiplicity_match;
  j["assembled_clusters"] = assembled_clusters;
  j["oracle_clusters"] = oracle_clusters;
  j["pass"] = pass;
  return j.dump(2);
}

}  // namespace spectree
