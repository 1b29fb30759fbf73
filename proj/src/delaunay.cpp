#include "cablefem/delaunay.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace cablefem::cdt {

namespace {

// ---------------------------------------------------------------------------
// Filtered predicates with a double-double fallback. Not a full exact
// implementation, but ~106-bit evaluation of the difference-form determinants
// resolves every configuration this mesher produces; exact ties break
// consistently toward "not inside".
// ---------------------------------------------------------------------------

struct DD {
  double hi = 0.0, lo = 0.0;
};

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_diff(double a, double b) {
  const double s = a - b;
  const double bb = s - a;
  return {s, (a - (s - bb)) - (b + bb)};
}

inline DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return two_sum(s.hi, s.lo);
}

inline DD dd_sub(DD a, DD b) { return dd_add(a, DD{-b.hi, -b.lo}); }

inline DD dd_mul(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return two_sum(p.hi, p.lo);
}

double orient2d_dd(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const DD acx = two_diff(a.x(), c.x());
  const DD acy = two_diff(a.y(), c.y());
  const DD bcx = two_diff(b.x(), c.x());
  const DD bcy = two_diff(b.y(), c.y());
  return dd_sub(dd_mul(acx, bcy), dd_mul(acy, bcx)).hi;
}

double incircle_dd(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                   const Eigen::Vector2d& d) {
  const DD adx = two_diff(a.x(), d.x()), ady = two_diff(a.y(), d.y());
  const DD bdx = two_diff(b.x(), d.x()), bdy = two_diff(b.y(), d.y());
  const DD cdx = two_diff(c.x(), d.x()), cdy = two_diff(c.y(), d.y());
  const DD alift = dd_add(dd_mul(adx, adx), dd_mul(ady, ady));
  const DD blift = dd_add(dd_mul(bdx, bdx), dd_mul(bdy, bdy));
  const DD clift = dd_add(dd_mul(cdx, cdx), dd_mul(cdy, cdy));
  const DD bxcy = dd_sub(dd_mul(bdx, cdy), dd_mul(cdx, bdy));
  const DD cxay = dd_sub(dd_mul(cdx, ady), dd_mul(adx, cdy));
  const DD axby = dd_sub(dd_mul(adx, bdy), dd_mul(bdx, ady));
  return dd_add(dd_add(dd_mul(alift, bxcy), dd_mul(blift, cxay)), dd_mul(clift, axby)).hi;
}

double incircle(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                const Eigen::Vector2d& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double bxcy = bdx * cdy - cdx * bdy;
  const double cxay = cdx * ady - adx * cdy;
  const double axby = adx * bdy - bdx * ady;
  const double det = alift * bxcy + blift * cxay + clift * axby;
  const double perm = alift * (std::abs(bdx * cdy) + std::abs(cdx * bdy)) +
                      blift * (std::abs(cdx * ady) + std::abs(adx * cdy)) +
                      clift * (std::abs(adx * bdy) + std::abs(bdx * ady));
  if (std::abs(det) > 1.2e-15 * perm) return det;
  return incircle_dd(a, b, c, d);
}

uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

struct Tri {
  std::array<int, 3> v{-1, -1, -1};
  std::array<int, 3> nb{-1, -1, -1};  // neighbor opposite v[i]
  bool alive = false;
};

class Triangulator {
 public:
  explicit Triangulator(const Input& in) : in_(in) {
    pts_ = in.points;
    for (size_t i = 0; i < in.segments.size(); ++i) {
      const bool s = in.segment_splittable.empty() ? true : in.segment_splittable[i] != 0;
      constrained_.emplace(edge_key(in.segments[i][0], in.segments[i][1]), s ? 1 : 0);
    }
  }

  Output run() {
    build_super_triangle();
    insert_all_points();
    recover_segments();
    assign_regions();
    refine();
    return emit();
  }

 private:
  const Input& in_;
  std::vector<Eigen::Vector2d> pts_;
  std::vector<Tri> tris_;
  std::vector<int> tri_tag_;
  std::vector<int> free_tris_;
  std::vector<int> created_;  // triangles made by the latest insertion
  std::unordered_map<uint64_t, char> constrained_;
  std::vector<double> tag_max_area_;
  std::vector<char> tag_refine_;
  int n_input_ = 0;
  int hint_ = 0;
  double scale_ = 1.0;

  const Eigen::Vector2d& P(int i) const { return pts_[i]; }

  double orient(int a, int b, int c) const { return orient2d(P(a), P(b), P(c)); }

  int new_tri(int a, int b, int c, int tag) {
    int idx;
    if (!free_tris_.empty()) {
      idx = free_tris_.back();
      free_tris_.pop_back();
    } else {
      idx = static_cast<int>(tris_.size());
      tris_.emplace_back();
      tri_tag_.push_back(-1);
    }
    tris_[idx].v = {a, b, c};
    tris_[idx].nb = {-1, -1, -1};
    tris_[idx].alive = true;
    tri_tag_[idx] = tag;
    created_.push_back(idx);
    return idx;
  }

  void kill_tri(int t) {
    tris_[t].alive = false;
    free_tris_.push_back(t);
  }

  void build_super_triangle() {
    Eigen::Vector2d lo = pts_.empty() ? Eigen::Vector2d::Zero() : pts_[0];
    Eigen::Vector2d hi = lo;
    for (const auto& p : pts_) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Eigen::Vector2d c = 0.5 * (lo + hi);
    scale_ = std::max((hi - lo).norm(), 1e-12);
    const double r = scale_ * 50.0;
    n_input_ = static_cast<int>(pts_.size());
    pts_.push_back(c + Eigen::Vector2d(-r, -r));
    pts_.push_back(c + Eigen::Vector2d(r, -r));
    pts_.push_back(c + Eigen::Vector2d(0, r));
    hint_ = new_tri(n_input_, n_input_ + 1, n_input_ + 2, -1);
  }

  int locate(const Eigen::Vector2d& p, int start) const {
    int t = start;
    if (t < 0 || static_cast<size_t>(t) >= tris_.size() || !tris_[t].alive) {
      t = -1;
      for (size_t i = 0; i < tris_.size(); ++i)
        if (tris_[i].alive) {
          t = static_cast<int>(i);
          break;
        }
      if (t < 0) throw std::runtime_error("cdt: no triangles");
    }
    int guard = static_cast<int>(tris_.size()) * 4 + 64;
    int prev = -1;
    while (guard-- > 0) {
      const Tri& tr = tris_[t];
      int next = -1;
      for (int e = 0; e < 3; ++e) {
        const int a = tr.v[(e + 1) % 3];
        const int b = tr.v[(e + 2) % 3];
        if (orient2d(P(a), P(b), p) < 0.0 && tr.nb[e] >= 0 && tr.nb[e] != prev) {
          next = tr.nb[e];
          break;
        }
      }
      if (next < 0) {
        // Re-check without the prev exclusion so we cannot stop early on a
        // zigzag; exiting through a hull edge returns the current triangle.
        for (int e = 0; e < 3; ++e) {
          const int a = tr.v[(e + 1) % 3];
          const int b = tr.v[(e + 2) % 3];
          if (orient2d(P(a), P(b), p) < 0.0 && tr.nb[e] >= 0) {
            next = tr.nb[e];
            break;
          }
        }
        if (next < 0) return t;
      }
      prev = t;
      t = next;
    }
    throw std::runtime_error("cdt: point location walk did not terminate");
  }

  // Carves the Delaunay cavity of p around triangle t0 and retriangulates the
  // star. respect_constraints stops the cavity at constrained edges.
  void carve_and_fill(int pi, int t0, bool respect_constraints) {
    const Eigen::Vector2d p = pts_[pi];
    std::vector<int> cavity;
    std::unordered_set<int> in_cavity;
    std::deque<int> queue{t0};
    in_cavity.insert(t0);
    while (!queue.empty()) {
      const int t = queue.front();
      queue.pop_front();
      cavity.push_back(t);
      for (int e = 0; e < 3; ++e) {
        const int n = tris_[t].nb[e];
        if (n < 0 || in_cavity.count(n)) continue;
        const int a = tris_[t].v[(e + 1) % 3];
        const int b = tris_[t].v[(e + 2) % 3];
        if (respect_constraints && constrained_.count(edge_key(a, b))) continue;
        if (incircle(P(tris_[n].v[0]), P(tris_[n].v[1]), P(tris_[n].v[2]), p) > 0.0) {
          in_cavity.insert(n);
          queue.push_back(n);
        }
      }
    }

    struct BEdge {
      int a, b, outside, tag;
    };
    std::vector<BEdge> boundary;
    for (int t : cavity) {
      for (int e = 0; e < 3; ++e) {
        const int n = tris_[t].nb[e];
        if (n >= 0 && in_cavity.count(n)) continue;
        boundary.push_back({tris_[t].v[(e + 1) % 3], tris_[t].v[(e + 2) % 3], n, tri_tag_[t]});
      }
    }
    for (int t : cavity) kill_tri(t);

    std::unordered_map<uint64_t, std::pair<int, int>> open;
    int first = -1;
    for (const auto& be : boundary) {
      const int t = new_tri(pi, be.a, be.b, be.tag);
      first = t;
      tris_[t].nb[0] = be.outside;
      if (be.outside >= 0) {
        Tri& o = tris_[be.outside];
        for (int e = 0; e < 3; ++e)
          if (o.v[(e + 1) % 3] == be.b && o.v[(e + 2) % 3] == be.a) o.nb[e] = t;
      }
      for (int side = 0; side < 2; ++side) {
        const int slot = (side == 0) ? 2 : 1;  // slot 2: edge (pi, a); slot 1: edge (b, pi)
        const int u = (side == 0) ? pi : be.b;
        const int v = (side == 0) ? be.a : pi;
        const uint64_t key = edge_key(u, v);
        auto it = open.find(key);
        if (it == open.end()) {
          open.emplace(key, std::make_pair(t, slot));
        } else {
          tris_[t].nb[slot] = it->second.first;
          tris_[it->second.first].nb[it->second.second] = t;
          open.erase(it);
        }
      }
    }
    hint_ = first;
  }

  // Inserts a new point; returns its index or -1 when it coincides with an
  // existing vertex of the containing triangle.
  int insert_point(const Eigen::Vector2d& p, int hint, bool respect_constraints) {
    if (static_cast<int>(pts_.size()) - 3 >= in_.max_points) {
      throw std::runtime_error("cdt: refinement exceeded the node budget of " +
                               std::to_string(in_.max_points) + " points (" +
                               std::to_string(tris_.size()) + " triangles)");
    }
    const int t0 = locate(p, hint);
    for (int k = 0; k < 3; ++k) {
      if ((p - P(tris_[t0].v[k])).norm() < 1e-13 * scale_) return -1;
    }
    const int pi = static_cast<int>(pts_.size());
    pts_.push_back(p);
    carve_and_fill(pi, t0, respect_constraints);
    return pi;
  }

  void insert_all_points() {
    std::vector<int> order(n_input_);
    for (int i = 0; i < n_input_; ++i) order[i] = i;
    uint64_t state = 0x9e3779b97f4a7c15ull;
    for (int i = n_input_ - 1; i > 0; --i) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      const int j = static_cast<int>((state >> 33) % static_cast<uint64_t>(i + 1));
      std::swap(order[i], order[j]);
    }
    for (int idx : order) {
      const int t0 = locate(pts_[idx], hint_);
      for (int k = 0; k < 3; ++k) {
        if ((pts_[idx] - P(tris_[t0].v[k])).norm() < 1e-15 * scale_) {
          throw std::runtime_error("cdt: duplicate input point");
        }
      }
      carve_and_fill(idx, t0, false);
    }
  }

  bool find_edge(int a, int b, int& t_out, int& e_out) const {
    for (size_t t = 0; t < tris_.size(); ++t) {
      if (!tris_[t].alive) continue;
      for (int e = 0; e < 3; ++e) {
        const int u = tris_[t].v[(e + 1) % 3];
        const int v = tris_[t].v[(e + 2) % 3];
        if ((u == a && v == b) || (u == b && v == a)) {
          t_out = static_cast<int>(t);
          e_out = e;
          return true;
        }
      }
    }
    return false;
  }

  void flip_edge(int t, int e) {
    const int n = tris_[t].nb[e];
    const int a = tris_[t].v[e];
    const int b = tris_[t].v[(e + 1) % 3];
    const int c = tris_[t].v[(e + 2) % 3];
    int en = -1;
    for (int k = 0; k < 3; ++k)
      if (tris_[n].v[k] != b && tris_[n].v[k] != c) en = k;
    const int d = tris_[n].v[en];
    const int t_ab = tris_[t].nb[(e + 2) % 3];
    const int t_ca = tris_[t].nb[(e + 1) % 3];
    int n_bd = -1, n_dc = -1;
    for (int k = 0; k < 3; ++k) {
      const int u = tris_[n].v[(k + 1) % 3], v = tris_[n].v[(k + 2) % 3];
      if ((u == b && v == d) || (u == d && v == b)) n_bd = tris_[n].nb[k];
      if ((u == d && v == c) || (u == c && v == d)) n_dc = tris_[n].nb[k];
    }
    tris_[t].v = {a, b, d};
    tris_[n].v = {a, d, c};
    auto set_nb = [&](int tri, int oppv, int nb) {
      for (int k = 0; k < 3; ++k)
        if (tris_[tri].v[k] == oppv) tris_[tri].nb[k] = nb;
    };
    set_nb(t, d, t_ab);
    set_nb(t, a, n_bd);
    set_nb(t, b, n);
    set_nb(n, d, t_ca);
    set_nb(n, a, n_dc);
    set_nb(n, c, t);
    auto fix_external = [&](int ext, int tri) {
      if (ext < 0) return;
      for (int k = 0; k < 3; ++k) {
        const int u = tris_[ext].v[(k + 1) % 3], v = tris_[ext].v[(k + 2) % 3];
        for (int k2 = 0; k2 < 3; ++k2) {
          const int uu = tris_[tri].v[(k2 + 1) % 3], vv = tris_[tri].v[(k2 + 2) % 3];
          if (u == vv && v == uu) tris_[ext].nb[k] = tri;
        }
      }
    };
    fix_external(t_ab, t);
    fix_external(n_bd, t);
    fix_external(t_ca, n);
    fix_external(n_dc, n);
  }

  // Sloan-style edge recovery: queue every edge crossing segment (a,b) and
  // flip until the segment appears. Flips blocked by a non-convex quad
  // requeue; new diagonals that still cross join the queue.
  void recover_one_segment(int a, int b) {
    {
      int t, e;
      if (find_edge(a, b, t, e)) return;
    }
    std::deque<std::array<int, 2>> crossing;
    for (size_t t = 0; t < tris_.size(); ++t) {
      if (!tris_[t].alive) continue;
      for (int e = 0; e < 3; ++e) {
        const int u = tris_[t].v[(e + 1) % 3];
        const int v = tris_[t].v[(e + 2) % 3];
        if (u > v) continue;  // visit each edge once
        if (u == a || u == b || v == a || v == b) continue;
        if (orient(a, b, u) * orient(a, b, v) < 0 && orient(u, v, a) * orient(u, v, b) < 0) {
          crossing.push_back({u, v});
        }
      }
    }

    long guard = 200000;
    while (!crossing.empty() && guard-- > 0) {
      const auto [u, v] = std::pair<int, int>(crossing.front()[0], crossing.front()[1]);
      crossing.pop_front();
      int t = -1, e = -1;
      if (!find_edge(u, v, t, e)) continue;  // already flipped away
      // Still crossing?
      if (!(orient(a, b, u) * orient(a, b, v) < 0 && orient(u, v, a) * orient(u, v, b) < 0)) {
        continue;
      }
      const int opp = tris_[t].v[e];
      const int n = tris_[t].nb[e];
      if (n < 0) throw std::runtime_error("cdt: crossing edge on the hull");
      int dn = -1;
      for (int k = 0; k < 3; ++k)
        if (tris_[n].v[k] != u && tris_[n].v[k] != v) dn = tris_[n].v[k];
      const bool convex = orient(opp, u, dn) * orient(opp, v, dn) < 0;
      if (!convex) {
        crossing.push_back({u, v});
        continue;
      }
      flip_edge(t, e);
      // The new diagonal is (opp, dn); requeue when it still crosses.
      if (opp != a && opp != b && dn != a && dn != b &&
          orient(a, b, opp) * orient(a, b, dn) < 0 &&
          orient(opp, dn, a) * orient(opp, dn, b) < 0) {
        crossing.push_back({opp, dn});
      }
    }
    if (guard <= 0) throw std::runtime_error("cdt: segment recovery did not terminate");
    int t, e;
    if (!find_edge(a, b, t, e)) {
      throw std::runtime_error("cdt: failed to recover constrained segment");
    }
  }

  void recover_segments() {
    for (const auto& seg : in_.segments) recover_one_segment(seg[0], seg[1]);
  }

  void assign_regions() {
    int max_tag = -1;
    for (const auto& r : in_.regions) max_tag = std::max(max_tag, r.tag);
    tag_max_area_.assign(max_tag + 1, 0.0);
    tag_refine_.assign(max_tag + 1, 0);
    for (const auto& r : in_.regions) {
      tag_max_area_[r.tag] = r.max_area;
      tag_refine_[r.tag] = r.refine ? 1 : 0;
      const int t0 = locate(r.seed, hint_);
      if (tri_tag_[t0] == r.tag) continue;
      std::deque<int> queue{t0};
      tri_tag_[t0] = r.tag;
      while (!queue.empty()) {
        const int t = queue.front();
        queue.pop_front();
        for (int e = 0; e < 3; ++e) {
          const int n = tris_[t].nb[e];
          if (n < 0 || tri_tag_[n] != -1) continue;
          const int u = tris_[t].v[(e + 1) % 3];
          const int v = tris_[t].v[(e + 2) % 3];
          if (constrained_.count(edge_key(u, v))) continue;
          tri_tag_[n] = r.tag;
          queue.push_back(n);
        }
      }
    }
  }

  double area(int t) const { return 0.5 * orient(tris_[t].v[0], tris_[t].v[1], tris_[t].v[2]); }

  bool bad_quality(int t) const {
    const int tag = tri_tag_[t];
    if (tag < 0 || !tag_refine_[tag]) return false;
    const double a = area(t);
    const double max_area = tag_max_area_[tag];
    if (max_area > 0 && a > max_area) return true;
    const Eigen::Vector2d& p0 = P(tris_[t].v[0]);
    const Eigen::Vector2d& p1 = P(tris_[t].v[1]);
    const Eigen::Vector2d& p2 = P(tris_[t].v[2]);
    const double l0 = (p1 - p2).norm(), l1 = (p2 - p0).norm(), l2 = (p0 - p1).norm();
    const double lmin = std::min({l0, l1, l2});
    // Leave small triangles alone: boundary-pinned slivers must not drive
    // unbounded refinement.
    if (max_area > 0 && lmin * lmin < 0.25 * max_area) return false;
    const double R = l0 * l1 * l2 / std::max(4.0 * a, 1e-300);
    return R / lmin > in_.radius_edge_bound;
  }

  Eigen::Vector2d circumcenter(int t) const {
    const Eigen::Vector2d a = P(tris_[t].v[0]);
    const Eigen::Vector2d b = P(tris_[t].v[1]);
    const Eigen::Vector2d c = P(tris_[t].v[2]);
    const Eigen::Vector2d ab = b - a, ac = c - a;
    const double d = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
    const double ab2 = ab.squaredNorm(), ac2 = ac.squaredNorm();
    return a + Eigen::Vector2d(ac.y() * ab2 - ab.y() * ac2, ab.x() * ac2 - ac.x() * ab2) / d;
  }

  int split_segment(int a, int b) {
    const uint64_t key = edge_key(a, b);
    constrained_.erase(key);
    const Eigen::Vector2d mid = 0.5 * (P(a) + P(b));
    int t, e;
    if (!find_edge(a, b, t, e)) throw std::runtime_error("cdt: lost segment while splitting");
    const int pi = insert_point(mid, t, true);
    if (pi < 0) throw std::runtime_error("cdt: degenerate segment split");
    constrained_.emplace(edge_key(a, pi), 1);
    constrained_.emplace(edge_key(pi, b), 1);
    return pi;
  }

  void refine() {
    std::deque<int> queue;
    for (size_t t = 0; t < tris_.size(); ++t)
      if (tris_[t].alive && bad_quality(static_cast<int>(t))) queue.push_back(static_cast<int>(t));

    long guard = static_cast<long>(in_.max_points) * 16 + 100000;
    while (!queue.empty() && guard-- > 0) {
      const int t = queue.front();
      queue.pop_front();
      if (t >= static_cast<int>(tris_.size()) || !tris_[t].alive || !bad_quality(t)) continue;
      const Eigen::Vector2d cc = circumcenter(t);

      // Walk toward the circumcenter; a constrained edge in the way means the
      // center would leave the region, so handle that edge instead.
      int cur = t;
      int blocked_a = -1, blocked_b = -1;
      int steps = static_cast<int>(tris_.size()) + 16;
      while (steps-- > 0) {
        int next = -1;
        for (int e = 0; e < 3; ++e) {
          const int a = tris_[cur].v[(e + 1) % 3];
          const int b = tris_[cur].v[(e + 2) % 3];
          if (orient2d(P(a), P(b), cc) < 0.0) {
            if (constrained_.count(edge_key(a, b))) {
              blocked_a = a;
              blocked_b = b;
            } else if (tris_[cur].nb[e] >= 0) {
              next = tris_[cur].nb[e];
              blocked_a = -1;
            }
            break;
          }
        }
        if (next < 0) break;
        cur = next;
      }

      created_.clear();
      if (blocked_a >= 0) {
        auto it = constrained_.find(edge_key(blocked_a, blocked_b));
        if (it == constrained_.end() || it->second == 0) continue;  // frozen boundary: accept t
        split_segment(blocked_a, blocked_b);
      } else {
        bool handled = false;
        for (int e = 0; e < 3 && !handled; ++e) {
          const int a = tris_[cur].v[(e + 1) % 3];
          const int b = tris_[cur].v[(e + 2) % 3];
          auto it = constrained_.find(edge_key(a, b));
          if (it == constrained_.end()) continue;
          const Eigen::Vector2d mid = 0.5 * (P(a) + P(b));
          if ((cc - mid).norm() < 0.5 * (P(a) - P(b)).norm()) {
            handled = true;
            if (it->second != 0) split_segment(a, b);
            // Frozen encroached edge: give up on this triangle.
          }
        }
        if (!handled) {
          if (insert_point(cc, cur, true) < 0) continue;
        }
      }
      for (int nt : created_)
        if (tris_[nt].alive && bad_quality(nt)) queue.push_back(nt);
    }
    if (guard <= 0) throw std::runtime_error("cdt: refinement did not terminate");
  }

  Output emit() {
    Output out;
    // Drop the super-triangle vertices; Steiner points shift down by three.
    out.points.reserve(pts_.size() - 3);
    for (int i = 0; i < n_input_; ++i) out.points.push_back(pts_[i]);
    for (size_t i = n_input_ + 3; i < pts_.size(); ++i) out.points.push_back(pts_[i]);
    auto remap = [&](int i) { return i < n_input_ ? i : i - 3; };

    for (size_t t = 0; t < tris_.size(); ++t) {
      if (!tris_[t].alive) continue;
      const int tag = tri_tag_[t];
      if (tag < 0) continue;
      std::array<int, 3> v = tris_[t].v;
      if (orient(v[0], v[1], v[2]) < 0) std::swap(v[1], v[2]);
      out.triangles.push_back({remap(v[0]), remap(v[1]), remap(v[2])});
      out.triangle_tag.push_back(tag);
    }
    return out;
  }
};

}  // namespace

double orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const double detleft = (a.x() - c.x()) * (b.y() - c.y());
  const double detright = (a.y() - c.y()) * (b.x() - c.x());
  const double det = detleft - detright;
  const double detsum = std::abs(detleft) + std::abs(detright);
  if (std::abs(det) > 3.4e-16 * detsum) return det;
  return orient2d_dd(a, b, c);
}

Output triangulate(const Input& input) {
  if (input.points.size() < 3) throw std::runtime_error("cdt: need at least 3 points");
  Triangulator tr(input);
  return tr.run();
}

}  // namespace cablefem::cdt
