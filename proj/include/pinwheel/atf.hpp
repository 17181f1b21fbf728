#pragma once

// Almost-toric base diagrams as exact lattice geometry.  A diagram is a set
// of rational vertices, boundary edges with primitive integer directions
// (finite length or infinite), and nodes whose branch cuts run to a vertex.
// On top of that sit the corner calculus (which cyclic quotient singularity a
// wedge corner models), the branch-cut monodromy shear, the affine embedding
// into the cotangent bundle of the Whitney sphere, half-plane symplectic
// cuts, and a deterministic SVG renderer.  Everything is computed over
// rationals; doubles never enter, so rendered output is byte-stable.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "compactify.hpp"
#include "hj.hpp"
#include "mat2.hpp"
#include "rational.hpp"

namespace pinwheel {

namespace detail {

// Bezout coefficients: returns (g, c, d) with c*x + d*y = g = gcd(x,y) > 0.
inline std::tuple<i64, i64, i64> ext_gcd(i64 x, i64 y) {
    if (x == 0 && y == 0) throw std::domain_error("gcd(0,0) is undefined");
    i64 r0 = x, r1 = y, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        const i64 k = r0 / r1;
        r0 -= k * r1;
        std::swap(r0, r1);
        s0 -= k * s1;
        std::swap(s0, s1);
        t0 -= k * t1;
        std::swap(t0, t1);
    }
    if (r0 < 0) {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    return {r0, s0, t0};
}

inline Rational dot(IntVec2 n, const QVec2& p) {
    return Rational(n.x) * p.x + Rational(n.y) * p.y;
}

} // namespace detail

// A wedge corner models the cyclic quotient singularity 1/n(1,a); n = 1 is a
// smooth (Delzant) corner.  `reflected` records that reading the corner in
// the given edge order needed an orientation flip; swapping the edge order
// replaces a by its inverse mod n and toggles the flag, which is exactly how
// the two descriptions of the capped corner (q^2 versus p^2 - d0(pq-1), both
// mod pq-1) arise from one picture.
struct CornerType {
    i64 n = 1;
    i64 a = 1;
    bool reflected = false;

    friend bool operator==(const CornerType&, const CornerType&) = default;
};

// Type of the corner spanned by outgoing edge directions u (first) and v.
// Normalizes u to (0,1) by a determinant +1 map; the image of v is then
// (|det|, a) up to a shear, and a is reduced into (0, n].
inline CornerType corner_type(IntVec2 u, IntVec2 v) {
    if (!is_primitive(u) || !is_primitive(v))
        throw std::domain_error("corner edges must be primitive vectors");
    const i64 d = det2(u, v);
    if (d == 0) throw std::domain_error("corner edges are collinear");
    const i64 n = d < 0 ? -d : d;
    auto [g, c, dd] = detail::ext_gcd(u.x, u.y);
    if (g != 1) throw std::logic_error("primitive vector with gcd > 1");
    const IntMat2 A{u.y, -u.x, c, dd};
    IntVec2 w = A.apply(v); // w.x = -det(u,v)
    CornerType t;
    t.n = n;
    if (w.x < 0) {
        w.x = -w.x;
        t.reflected = true;
    }
    if (w.x != n) throw std::logic_error("normalization lost the determinant");
    t.a = ((w.y % n) + n) % n;
    if (t.a == 0) t.a = n;
    if (gcd_i64(t.n, t.a) != 1) throw std::logic_error("corner weights share a factor");
    return t;
}

struct DiagramEdge {
    std::size_t start = 0;           // index into vertices
    IntVec2 dir;                     // primitive
    std::optional<Rational> length;  // multiples of dir; empty = infinite
    bool dashed = false;             // dashed edges mark open boundary
    Rational draw_length;            // SVG extent for infinite edges only

    friend bool operator==(const DiagramEdge&, const DiagramEdge&) = default;
};

struct DiagramNode {
    QVec2 point;
    IntVec2 eigendirection; // primitive; (p,q) at the pin-diagram node
    std::size_t cut_target = 0;

    friend bool operator==(const DiagramNode&, const DiagramNode&) = default;
};

struct LabeledCorner {
    std::size_t vertex = 0;
    IntVec2 u, v; // outgoing edge directions, u first
    CornerType type;

    friend bool operator==(const LabeledCorner&, const LabeledCorner&) = default;
};

struct DiagramAnnotation {
    QVec2 at;
    std::string text;

    friend bool operator==(const DiagramAnnotation&, const DiagramAnnotation&) = default;
};

struct BaseDiagram {
    std::vector<QVec2> vertices;
    std::vector<DiagramEdge> edges;
    std::vector<DiagramNode> nodes;
    std::vector<LabeledCorner> corners;
    std::vector<DiagramAnnotation> annotations;
    std::string label;

    friend bool operator==(const BaseDiagram&, const BaseDiagram&) = default;
};

// Drawn far point of an edge: the true endpoint when finite, the draw-length
// stand-in when infinite.
inline QVec2 edge_draw_end(const BaseDiagram& d, const DiagramEdge& e) {
    const Rational len = e.length ? *e.length : e.draw_length;
    return d.vertices[e.start] + scale(len, e.dir);
}

namespace detail {

inline Rational default_draw_length(IntVec2 dir) {
    const i64 ax = dir.x < 0 ? -dir.x : dir.x;
    const i64 ay = dir.y < 0 ? -dir.y : dir.y;
    return Rational(3, ax > ay ? ax : ay); // about three lattice units of extent
}

inline std::string format_size(const std::optional<Rational>& s) {
    return s ? s->to_string() : "inf";
}

} // namespace detail

// Base diagram of the pin-ellipsoid E_{p,q}(alpha,beta): the wedge spanned by
// (0,1) (scaled by beta) and (p^2,pq-1) (scaled by alpha), a dashed top edge
// closing the finite picture, and the node on the (p,q)-ray with its branch
// cut running to the origin.  An absent size leaves that boundary ray
// infinite, giving the two pin-cylinder diagrams; both absent gives the full
// diagram of B_{p,q}.  The node sits at half the smaller finite size along
// the ray (at 1/2 when both are infinite), strictly inside in every case;
// nothing downstream depends on that choice.
inline BaseDiagram build_pin_diagram(i64 p, i64 q, std::optional<Rational> alpha,
                                     std::optional<Rational> beta) {
    require_wahl_pair(p, q);
    if ((alpha && !(*alpha > Rational(0))) || (beta && !(*beta > Rational(0))))
        throw std::domain_error("diagram sizes must be positive");
    const IntVec2 slant{checked_i64(i128(p) * p), checked_i64(i128(p) * q - 1)};
    const IntVec2 up{0, 1};

    BaseDiagram d;
    d.label = "A_{" + std::to_string(p) + "," + std::to_string(q) + "}(" +
              detail::format_size(alpha) + "," + detail::format_size(beta) + ")";
    d.vertices.push_back({Rational(0), Rational(0)});
    d.edges.push_back({0, up, beta, false, detail::default_draw_length(up)});
    d.edges.push_back({0, slant, alpha, false, detail::default_draw_length(slant)});

    if (beta) d.vertices.push_back({Rational(0), *beta});
    if (alpha) d.vertices.push_back(scale(*alpha, slant));

    if (alpha && beta) {
        // Dashed top from (0,beta) to alpha*(p^2,pq-1).
        const QVec2 top = d.vertices[1];
        const QVec2 far = d.vertices[2];
        const QVec2 delta = far - top;
        const Rational gx = delta.x; // positive
        const Rational gy = delta.y;
        const i64 scale_clear = checked_i64(i128(gx.den) / gcd_i64(gx.den, gy.den) * gy.den);
        IntVec2 dir{checked_i64(i128(gx.num) * (scale_clear / gx.den)),
                    checked_i64(i128(gy.num) * (scale_clear / gy.den))};
        dir = primitive_part(dir);
        const Rational len = gx / Rational(dir.x);
        d.edges.push_back({1, dir, len, true, detail::default_draw_length(dir)});
    } else if (beta && !alpha) {
        // Strip: dashed ray from (0,beta) parallel to the slant edge.
        d.edges.push_back({1, slant, std::nullopt, true, detail::default_draw_length(slant)});
    } else if (alpha && !beta) {
        // Dashed vertical ray from the far slant vertex.
        d.edges.push_back({1, up, std::nullopt, true, detail::default_draw_length(up)});
    }

    Rational t(1, 2);
    if (alpha && (!beta || *alpha < *beta)) t = *alpha / Rational(2);
    if (beta && (!alpha || *beta <= *alpha)) t = *beta / Rational(2);
    d.nodes.push_back({{t * Rational(p), t * Rational(q)}, IntVec2{p, q}, 0});
    return d;
}

// Unipotent shear along the branch cut: fixes the (p,q)-eigenray pointwise,
// sends the slant direction (p^2,pq-1) to (0,-1) and the leftward horizontal
// (-1,0) to (pq-1,q^2).
inline IntMat2 monodromy_shear(i64 p, i64 q) {
    require_wahl_pair(p, q);
    return {checked_i64(1 - i128(p) * q), checked_i64(i128(p) * p),
            checked_i64(-i128(q) * q), checked_i64(1 + i128(p) * q)};
}

struct WhitneyEmbedding {
    i64 a = 0;
    i64 b = 0;
    IntMat2 M;
};

// The affine map taking the pin wedge into the base diagram of T*Wh: with
// the minimal a,b >= 0 solving bq - ap = 1, the matrix [[q-a, b-p],[-a, b]]
// has determinant one and sends the branch direction (p,q) to (1,1).
inline WhitneyEmbedding whitney_embedding_matrix(i64 p, i64 q) {
    require_wahl_pair(p, q);
    const i64 b = mod_inverse(q, p); // minimal positive, b < p
    const i64 a = checked_i64((i128(b) * q - 1) / p);
    WhitneyEmbedding w{a, b, {q - a, b - p, -a, b}};
    if (w.M.det() != 1) throw std::logic_error("whitney matrix must have determinant one");
    if (w.M.apply({p, q}) != IntVec2{1, 1})
        throw std::logic_error("whitney matrix must send (p,q) to (1,1)");
    return w;
}

// Applies x -> A x + t to the whole diagram.  A must be unimodular so that
// primitive directions stay primitive; recorded corner types are recomputed
// from the transformed edge pairs (they change only in the reflected flag,
// and only when det A = -1).  Draw lengths are kept verbatim.
inline BaseDiagram apply_affine(const BaseDiagram& d, const IntMat2& A, IntVec2 t) {
    const i64 dt = A.det();
    if (dt != 1 && dt != -1) throw std::domain_error("affine moves need a unimodular matrix");
    const QVec2 shift{Rational(t.x), Rational(t.y)};
    BaseDiagram out = d;
    for (auto& v : out.vertices) v = apply(A, v) + shift;
    for (auto& e : out.edges) e.dir = A.apply(e.dir);
    for (auto& n : out.nodes) {
        n.point = apply(A, n.point) + shift;
        n.eigendirection = A.apply(n.eigendirection);
    }
    for (auto& c : out.corners) {
        c.u = A.apply(c.u);
        c.v = A.apply(c.v);
        c.type = corner_type(c.u, c.v);
    }
    for (auto& an : out.annotations) an.at = apply(A, an.at) + shift;
    return out;
}

// Half-plane for a symplectic cut: keeps normal . x <= offset.
struct CutLine {
    IntVec2 normal;
    Rational offset;
};

// Truncates a convex diagram by the half-plane of `line`.  Edges are clipped
// exactly; the cut trace becomes a new solid edge whose two endpoints are
// recorded as corners, each classified by corner_type with the surviving old
// edge first.  A cut that does not bite returns the diagram unchanged; a cut
// that leaves nothing (or removes a node) is a domain error; a biting cut
// through an existing vertex is refused rather than guessed at.  The clipped
// region must meet the cut line in a bounded segment, which holds for every
// diagram this module builds.
inline BaseDiagram symplectic_cut(const BaseDiagram& d, const CutLine& line) {
    if (line.normal == IntVec2{0, 0}) throw std::domain_error("cut needs a nonzero normal");
    const IntVec2 nrm = primitive_part(line.normal);
    const i64 scale_back = line.normal.x != 0 ? line.normal.x / nrm.x : line.normal.y / nrm.y;
    const Rational off = line.offset / Rational(scale_back);

    struct ClippedEdge {
        DiagramEdge e;
        QVec2 start_point;
        bool new_start = false;       // start replaced by a cut vertex
        bool cut_at_end = false;      // far end replaced by a cut vertex
        std::optional<QVec2> cross;   // the cut vertex this edge produced
        std::optional<QVec2> old_end; // surviving original endpoint, if finite
    };

    std::vector<ClippedEdge> kept;
    bool bites = false;
    bool touches = false; // some edge endpoint lies exactly on the line
    for (const auto& e : d.edges) {
        const QVec2 S = d.vertices[e.start];
        const Rational h0 = detail::dot(nrm, S) - off;
        const Rational hd = Rational(checked_i64(i128(nrm.x) * e.dir.x + i128(nrm.y) * e.dir.y));
        ClippedEdge ce{e, S, false, false, {}, {}};
        if (hd.is_zero()) {
            if (h0 > Rational(0)) {
                bites = true; // parallel edge strictly outside
                continue;
            }
            if (h0.is_zero()) touches = true;
            if (e.length) ce.old_end = S + scale(*e.length, e.dir);
            kept.push_back(std::move(ce));
            continue;
        }
        const Rational tc = -h0 / hd; // h changes sign here
        if (hd > Rational(0)) {
            // Inside for t <= tc.
            if (tc <= Rational(0)) {
                if (tc.is_zero()) touches = true;
                bites = true;
                continue;
            }
            if (e.length && tc == *e.length) {
                touches = true; // far endpoint sits on the line, edge kept whole
            } else if (!e.length || tc < *e.length) {
                bites = true;
                ce.e.length = tc;
                ce.e.draw_length = tc;
                ce.cut_at_end = true;
                ce.cross = S + scale(tc, e.dir);
            }
        } else {
            // Inside for t >= tc.
            if (tc > Rational(0)) {
                if (e.length && *e.length <= tc) {
                    if (*e.length == tc) touches = true;
                    bites = true;
                    continue;
                }
                bites = true;
                ce.new_start = true;
                ce.cross = S + scale(tc, e.dir);
                ce.start_point = *ce.cross;
                if (e.length) {
                    ce.e.length = *e.length - tc;
                    ce.e.draw_length = *ce.e.length;
                }
            } else if (tc.is_zero()) {
                touches = true; // start sits on the line, edge runs inward
            }
        }
        if (e.length && !ce.cut_at_end) ce.old_end = S + scale(*e.length, e.dir);
        kept.push_back(std::move(ce));
    }

    if (!bites) return d;
    if (touches) throw std::logic_error("cut passes through a diagram vertex");
    if (kept.empty()) throw std::domain_error("cut removes the entire diagram");

    std::vector<QVec2> crossings;
    for (const auto& ce : kept)
        if (ce.cross && std::find(crossings.begin(), crossings.end(), *ce.cross) == crossings.end())
            crossings.push_back(*ce.cross);
    if (crossings.size() == 1) throw std::logic_error("cut grazes the diagram at one point");
    if (crossings.size() != 2) throw std::logic_error("unsupported cut configuration");

    // Orient the cut edge so that its direction is rot90 of the inward normal.
    const IntVec2 cut_dir{-nrm.y, nrm.x};
    QVec2 A = crossings[0], B = crossings[1];
    {
        const QVec2 diff = B - A;
        const Rational along = Rational(cut_dir.x) * diff.x + Rational(cut_dir.y) * diff.y;
        if (along.is_zero()) throw std::logic_error("cut endpoints coincide along the line");
        if (along < Rational(0)) std::swap(A, B);
    }

    BaseDiagram out;
    out.label = d.label;
    out.annotations = d.annotations;

    // Surviving original vertices keep their relative order.  Finite edges
    // end at vertices too, so a kept endpoint preserves its vertex even when
    // no surviving edge starts there.
    std::vector<std::optional<std::size_t>> remap(d.vertices.size());
    auto keep_vertex = [&](std::size_t idx) {
        if (!remap[idx]) {
            remap[idx] = out.vertices.size();
            out.vertices.push_back(d.vertices[idx]);
        }
        return *remap[idx];
    };
    auto find_vertex = [&](const QVec2& pnt) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < d.vertices.size(); ++i)
            if (d.vertices[i] == pnt) return i;
        return std::nullopt;
    };
    for (const auto& ce : kept) {
        if (!ce.new_start) keep_vertex(ce.e.start);
        if (ce.old_end)
            if (auto vi = find_vertex(*ce.old_end)) keep_vertex(*vi);
    }
    for (const auto& n : d.nodes) {
        if (detail::dot(nrm, n.point) - off >= Rational(0))
            throw std::domain_error("cut removes the node");
        if (detail::dot(nrm, d.vertices[n.cut_target]) - off > Rational(0))
            throw std::domain_error("cut removes the branch-cut target");
        keep_vertex(n.cut_target);
    }
    const std::size_t ia = out.vertices.size();
    out.vertices.push_back(A);
    const std::size_t ib = out.vertices.size();
    out.vertices.push_back(B);
    auto cut_index = [&](const QVec2& pnt) { return pnt == A ? ia : ib; };

    for (const auto& ce : kept) {
        DiagramEdge e = ce.e;
        e.start = ce.new_start ? cut_index(ce.start_point) : *remap[ce.e.start];
        out.edges.push_back(e);
    }
    {
        const QVec2 diff = B - A;
        const Rational len = cut_dir.x != 0 ? diff.x / Rational(cut_dir.x) : diff.y / Rational(cut_dir.y);
        out.edges.push_back({ia, cut_dir, len, false, len});
    }

    for (const auto& n : d.nodes) out.nodes.push_back({n.point, n.eigendirection, *remap[n.cut_target]});

    for (const auto& c : d.corners)
        if (remap[c.vertex]) out.corners.push_back({*remap[c.vertex], c.u, c.v, c.type});
    for (const QVec2& pnt : {A, B}) {
        const std::size_t vi = cut_index(pnt);
        IntVec2 u{0, 0};
        bool found = false;
        for (const auto& ce : kept) {
            if (!ce.cross || *ce.cross != pnt) continue;
            if (found) throw std::logic_error("cut meets two edges in one point");
            u = ce.cut_at_end ? -ce.e.dir : ce.e.dir;
            found = true;
        }
        if (!found) throw std::logic_error("cut endpoint lost its edge");
        const IntVec2 v = (vi == ia) ? cut_dir : -cut_dir;
        out.corners.push_back({vi, u, v, corner_type(u, v)});
    }
    return out;
}

// Capped compactification diagram: the full pin wedge cut horizontally, by
// default at height pq-1 so the orbifold corner lands on the lattice point
// (p^2, pq-1).  The corner record shows the 1/(pq-1)(1, q^2 mod (pq-1))
// singularity; an annotation spells out the divisor chain that resolves it.
inline BaseDiagram compactification_diagram(i64 p, i64 q, std::optional<Rational> height = {}) {
    require_wahl_pair(p, q);
    const Rational h = height.value_or(Rational(checked_i64(i128(p) * q - 1)));
    if (!(h > Rational(q, 2))) throw std::domain_error("cap height must clear the node");
    BaseDiagram capped = symplectic_cut(build_pin_diagram(p, q, {}, {}), {{0, 1}, h});
    capped.label = "X_{" + std::to_string(p) + "," + std::to_string(q) + "}";
    const CompactificationData comp = compactifying_divisor(p, q);
    std::string profile = "(+" + std::to_string(comp.d0);
    for (const i64 di : comp.tail()) profile += ",-" + std::to_string(di);
    profile += ")";
    capped.annotations.push_back({capped.vertices[capped.corners.front().vertex], profile});
    return capped;
}

namespace detail {

// Pixel coordinate rounded to hundredths, rendered without trailing zeros.
// Integer arithmetic only, so output is identical across platforms.
inline std::string fmt_px(const Rational& r) {
    const i128 num = i128(r.num) * 100;
    const i128 den = r.den;
    i128 scaled = num >= 0 ? (num + den / 2) / den : -((-num + den / 2) / den);
    std::string sign = scaled < 0 ? "-" : "";
    if (scaled < 0) scaled = -scaled;
    const i64 whole = static_cast<i64>(scaled / 100);
    const i64 frac = static_cast<i64>(scaled % 100);
    std::string out = sign + std::to_string(whole);
    if (frac != 0) {
        out += ".";
        out += static_cast<char>('0' + frac / 10);
        if (frac % 10 != 0) out += static_cast<char>('0' + frac % 10);
    }
    return out;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '&') out += "&amp;";
        else if (ch == '<') out += "&lt;";
        else if (ch == '>') out += "&gt;";
        else out += ch;
    }
    return out;
}

} // namespace detail

// Deterministic SVG: 72 px per lattice unit, y-axis flipped, solid boundary
// edges, dashed open edges and branch cuts, crosses at nodes, corner types
// printed beside non-smooth corners.  Infinite edges are drawn at their
// draw-length; nothing here feeds back into the exact geometry.
inline std::string emit_svg(const BaseDiagram& d) {
    const Rational unit(72);
    const Rational margin(40);

    std::vector<QVec2> extent;
    for (const auto& v : d.vertices) extent.push_back(v);
    for (const auto& e : d.edges) {
        extent.push_back(d.vertices[e.start]);
        extent.push_back(edge_draw_end(d, e));
    }
    for (const auto& n : d.nodes) extent.push_back(n.point);
    for (const auto& a : d.annotations) extent.push_back(a.at);
    if (extent.empty()) extent.push_back({Rational(0), Rational(0)});

    Rational min_x = extent[0].x, max_x = extent[0].x;
    Rational min_y = extent[0].y, max_y = extent[0].y;
    for (const auto& pt : extent) {
        min_x = std::min(min_x, pt.x);
        max_x = std::max(max_x, pt.x);
        min_y = std::min(min_y, pt.y);
        max_y = std::max(max_y, pt.y);
    }

    // Room for corner and annotation text that extends to the right.
    Rational text_pad(0);
    for (const auto& c : d.corners)
        if (c.type.n > 1) text_pad = std::max(text_pad, Rational(110));
    for (const auto& a : d.annotations)
        text_pad = std::max(text_pad, Rational(checked_i64(i128(9) * a.text.size() + 20)));

    const Rational width = (max_x - min_x) * unit + margin * Rational(2) + text_pad;
    const Rational height = (max_y - min_y) * unit + margin * Rational(2) + Rational(30);
    auto px = [&](const QVec2& pt) {
        return QVec2{(pt.x - min_x) * unit + margin, (max_y - pt.y) * unit + margin + Rational(30)};
    };
    auto line_elem = [&](const QVec2& a, const QVec2& b, const std::string& style) {
        return "  <line x1=\"" + detail::fmt_px(a.x) + "\" y1=\"" + detail::fmt_px(a.y) +
               "\" x2=\"" + detail::fmt_px(b.x) + "\" y2=\"" + detail::fmt_px(b.y) + "\" " + style +
               "/>\n";
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt_px(width) +
           "\" height=\"" + detail::fmt_px(height) + "\" viewBox=\"0 0 " + detail::fmt_px(width) +
           " " + detail::fmt_px(height) + "\">\n";
    svg += "  <text x=\"" + detail::fmt_px(margin) +
           "\" y=\"24\" font-family=\"monospace\" font-size=\"15\" fill=\"black\">" +
           detail::xml_escape(d.label) + "</text>\n";

    for (const auto& e : d.edges) {
        const QVec2 a = px(d.vertices[e.start]);
        const QVec2 b = px(edge_draw_end(d, e));
        std::string style = "stroke=\"black\" stroke-width=\"2\"";
        if (e.dashed) style += " stroke-dasharray=\"9,5\"";
        svg += line_elem(a, b, style);
    }
    for (const auto& n : d.nodes) {
        svg += line_elem(px(n.point), px(d.vertices[n.cut_target]),
                         "stroke=\"black\" stroke-width=\"1.2\" stroke-dasharray=\"4,4\"");
        const QVec2 c = px(n.point);
        const Rational arm(6);
        svg += line_elem({c.x - arm, c.y - arm}, {c.x + arm, c.y + arm},
                         "stroke=\"black\" stroke-width=\"2\"");
        svg += line_elem({c.x - arm, c.y + arm}, {c.x + arm, c.y - arm},
                         "stroke=\"black\" stroke-width=\"2\"");
    }
    for (const auto& c : d.corners) {
        if (c.type.n <= 1) continue;
        const QVec2 at = px(d.vertices[c.vertex]);
        svg += "  <text x=\"" + detail::fmt_px(at.x + Rational(10)) + "\" y=\"" +
               detail::fmt_px(at.y - Rational(10)) +
               "\" font-family=\"monospace\" font-size=\"13\" fill=\"black\">1/" +
               std::to_string(c.type.n) + "(1," + std::to_string(c.type.a) + ")" +
               (c.type.reflected ? "*" : "") + "</text>\n";
    }
    for (const auto& a : d.annotations) {
        const QVec2 at = px(a.at);
        svg += "  <text x=\"" + detail::fmt_px(at.x + Rational(10)) + "\" y=\"" +
               detail::fmt_px(at.y + Rational(24)) +
               "\" font-family=\"monospace\" font-size=\"13\" fill=\"black\">" +
               detail::xml_escape(a.text) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace pinwheel
