#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "types.hpp"

namespace helmbem {

using Vec2 = Eigen::Vector2d;

enum class NodeAt { A, B };

struct SegmentGeom {
    Vec2 a, b;
    double length = 0.0;
    Vec2 normal;

    SegmentGeom() = default;
    SegmentGeom(const Vec2& a_, const Vec2& b_) : a(a_), b(b_), length((b_ - a_).norm()) {
        normal = Vec2(b.y() - a.y(), a.x() - b.x()) / length;
    }
    Vec2 point(double t) const { return a + t * (b - a); }
};

inline double basis_value(NodeAt at, double t) { return at == NodeAt::A ? 1.0 - t : t; }

inline double basis_curl(const SegmentGeom& seg, NodeAt at) {
    return at == NodeAt::A ? -1.0 / seg.length : 1.0 / seg.length;
}

enum class PairTag { Coincident, Adjacent, Disjoint };

struct SegmentPairClass {
    PairTag tag = PairTag::Disjoint;
    // for Adjacent: which end of m and of n sits on the shared node
    NodeAt vertex_m = NodeAt::A;
    NodeAt vertex_n = NodeAt::A;
};

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Mesh {
public:
    Mesh() = default;

    // Validates and orients counterclockwise. CW input is renumbered as n0, n_{N-1}, ..., n1.
    static Mesh from_nodes(std::vector<Vec2> nodes);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<Vec2>& nodes() const { return nodes_; }
    const Vec2& node(int i) const { return nodes_[i]; }
    bool orientation_corrected() const { return orientation_corrected_; }

    int node_of(int seg, NodeAt at) const { return at == NodeAt::A ? seg : (seg + 1) % size(); }
    SegmentGeom segment(int n) const { return {nodes_[n], nodes_[(n + 1) % size()]}; }

    double diameter() const {
        double d = 0.0;
        for (const Vec2& p : nodes_)
            for (const Vec2& q : nodes_) d = std::max(d, (p - q).norm());
        return d;
    }

    double signed_area() const {
        double s = 0.0;
        for (int i = 0; i < size(); ++i) {
            const Vec2& p = nodes_[i];
            const Vec2& q = nodes_[(i + 1) % size()];
            s += p.x() * q.y() - q.x() * p.y();
        }
        return 0.5 * s;
    }

    Mesh scaled(double s) const {
        Mesh m = *this;
        for (Vec2& p : m.nodes_) p *= s;
        return m;
    }

private:
    std::vector<Vec2> nodes_;
    bool orientation_corrected_ = false;
};

namespace detail {

inline double cross(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

inline bool on_segment(const Vec2& p, const Vec2& q, const Vec2& r) {
    return std::min(p.x(), r.x()) <= q.x() && q.x() <= std::max(p.x(), r.x()) &&
           std::min(p.y(), r.y()) <= q.y() && q.y() <= std::max(p.y(), r.y());
}

inline int orient(const Vec2& p, const Vec2& q, const Vec2& r, double tol) {
    const double v = cross(q - p, r - p);
    if (std::abs(v) <= tol) return 0;
    return v > 0 ? 1 : -1;
}

inline bool segments_intersect(const Vec2& p1, const Vec2& q1, const Vec2& p2, const Vec2& q2, double tol) {
    const int o1 = orient(p1, q1, p2, tol), o2 = orient(p1, q1, q2, tol);
    const int o3 = orient(p2, q2, p1, tol), o4 = orient(p2, q2, q1, tol);
    if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, q2, q1)) return true;
    if (o3 == 0 && on_segment(p2, p1, q2)) return true;
    if (o4 == 0 && on_segment(p2, q1, q2)) return true;
    return false;
}

}  // namespace detail

inline Mesh Mesh::from_nodes(std::vector<Vec2> nodes) {
    const int n = static_cast<int>(nodes.size());
    if (n < 3) throw MeshError("mesh needs at least 3 nodes");
    for (const Vec2& p : nodes)
        if (!p.allFinite()) throw MeshError("non-finite node coordinate");
    Mesh m;
    m.nodes_ = std::move(nodes);
    const double diam = m.diameter();
    if (!(diam > 0)) throw MeshError("degenerate mesh: all nodes coincide");
    for (int i = 0; i < n; ++i) {
        if (m.segment(i).length <= 1e-14 * diam)
            throw MeshError("degenerate segment " + std::to_string(i) + " (zero length)");
    }
    const double tol = 1e-14 * diam * diam;
    for (int i = 0; i < n; ++i) {
        const SegmentGeom si = m.segment(i);
        for (int j = i + 1; j < n; ++j) {
            const SegmentGeom sj = m.segment(j);
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // neighbours share one node; they may only overlap if they fold back on each other
                const Vec2 vtx = j == i + 1 ? si.b : si.a;
                const Vec2 di = (j == i + 1 ? si.a : si.b) - vtx;
                const Vec2 dj = (j == i + 1 ? sj.b : sj.a) - vtx;
                if (std::abs(detail::cross(di, dj)) <= tol && di.dot(dj) > 0)
                    throw MeshError("self-intersection: segments " + std::to_string(i) + " and " +
                                    std::to_string(j) + " overlap");
                continue;
            }
            if (detail::segments_intersect(si.a, si.b, sj.a, sj.b, tol))
                throw MeshError("self-intersection: segments " + std::to_string(i) + " and " +
                                std::to_string(j) + " cross");
        }
    }
    if (m.signed_area() < 0) {
        std::reverse(m.nodes_.begin() + 1, m.nodes_.end());
        m.orientation_corrected_ = true;
    }
    return m;
}

struct ParseError : MeshError {
    int line;
    ParseError(int line_, const std::string& msg)
        : MeshError("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

inline Mesh load_mesh(std::istream& in) {
    std::string raw;
    int lineno = 0, stage = 0, expected = 0;
    std::vector<Vec2> nodes;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::string tok;
        if (!(ls >> tok)) continue;
        std::string extra;
        if (stage == 0) {
            int version = 0;
            if (tok != "helmbem-mesh" || !(ls >> version)) throw ParseError(lineno, "expected 'helmbem-mesh 1'");
            if (version != 1) throw ParseError(lineno, "unsupported mesh version " + std::to_string(version));
            if (ls >> extra) throw ParseError(lineno, "trailing text after header");
            stage = 1;
        } else if (stage == 1) {
            long long count = 0;
            if (tok != "nodes" || !(ls >> count)) throw ParseError(lineno, "expected 'nodes <N>'");
            if (ls >> extra) throw ParseError(lineno, "trailing text after node count");
            if (count < 3) throw ParseError(lineno, "a closed mesh needs at least 3 nodes");
            if (count > 1000000) throw ParseError(lineno, "node count too large");
            expected = static_cast<int>(count);
            stage = 2;
        } else {
            if (static_cast<int>(nodes.size()) == expected) throw ParseError(lineno, "more node lines than declared");
            double x = 0.0, y = 0.0;
            std::istringstream xs(raw);
            if (!(xs >> x >> y)) throw ParseError(lineno, "expected '<x> <y>'");
            if (xs >> extra) throw ParseError(lineno, "trailing text after coordinates");
            if (!std::isfinite(x) || !std::isfinite(y)) throw ParseError(lineno, "non-finite coordinate");
            nodes.emplace_back(x, y);
        }
    }
    if (stage < 2) throw ParseError(lineno, "unexpected end of file before node list");
    if (static_cast<int>(nodes.size()) != expected)
        throw ParseError(lineno, "expected " + std::to_string(expected) + " nodes, found " +
                                     std::to_string(nodes.size()));
    return Mesh::from_nodes(std::move(nodes));
}

inline Mesh load_mesh_string(const std::string& text) {
    std::istringstream in(text);
    return load_mesh(in);
}

inline Mesh load_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file '" + path + "'");
    return load_mesh(in);
}

inline SegmentPairClass classify_pair(const Mesh& mesh, int m, int n) {
    const int N = mesh.size();
    if (m < 0 || n < 0 || m >= N || n >= N) throw ArgumentError("classify_pair: segment index out of range");
    SegmentPairClass c;
    if (m == n) {
        c.tag = PairTag::Coincident;
    } else if ((m + 1) % N == n) {
        c.tag = PairTag::Adjacent;
        c.vertex_m = NodeAt::B;
        c.vertex_n = NodeAt::A;
    } else if ((n + 1) % N == m) {
        c.tag = PairTag::Adjacent;
        c.vertex_m = NodeAt::A;
        c.vertex_n = NodeAt::B;
    }
    return c;
}

// Interior angle at the shared vertex, in (0, 2pi), between the directions pointing away from it.
// Convex corners of a CCW mesh give sin(theta) > 0.
inline double adjacent_angle(const Mesh& mesh, int m, int n) {
    const SegmentPairClass c = classify_pair(mesh, m, n);
    if (c.tag != PairTag::Adjacent) throw ArgumentError("adjacent_angle: segments are not adjacent");
    // incoming segment ends at the vertex, outgoing one starts there
    const int in = c.vertex_m == NodeAt::B ? m : n;
    const int out = in == m ? n : m;
    const SegmentGeom si = mesh.segment(in), so = mesh.segment(out);
    const Vec2 d_in = si.a - si.b, d_out = so.b - so.a;
    double th = std::atan2(detail::cross(d_out, d_in), d_out.dot(d_in));
    if (th <= 0) th += 2.0 * kPi;
    return th;
}

}  // namespace helmbem
