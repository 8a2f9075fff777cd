#include "colorcode/geometry.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace colorcode {

namespace {

struct Coord {
    int x, y;
    auto operator<=>(const Coord&) const = default;
};

struct ProtoFace {
    FaceColor color;
    FaceKind kind;
    int cx, cy;
    std::vector<Coord> support;  // cyclic order
};

// Rotate `kept` (subset of cyclic corner indices, ascending) so the kept run
// starts just after a missing corner; full rings stay as-is. Falls back to
// the unrotated order when the kept set is not one contiguous arc.
std::vector<int> rotate_contiguous(const std::vector<int>& kept, int ring) {
    const int k = static_cast<int>(kept.size());
    if (k == ring) return kept;
    std::vector<bool> present(ring, false);
    for (int i : kept) present[i] = true;
    for (int start : kept) {
        if (present[(start + ring - 1) % ring]) continue;
        bool contiguous = true;
        for (int j = 0; j < k; ++j)
            if (!present[(start + j) % ring]) { contiguous = false; break; }
        if (!contiguous) continue;
        std::vector<int> out(k);
        for (int j = 0; j < k; ++j) out[j] = (start + j) % ring;
        return out;
    }
    return kept;
}

// ---------------------------------------------------------------- c666 ----

bool c666_is_qubit(Coord c, int m) {
    return (c.x + c.y) % 2 == 0 && ((c.x % 3) + 3) % 3 != 0 && c.y >= 0 &&
           c.y - c.x <= 2 && c.x + c.y <= m;
}

std::vector<ProtoFace> c666_proto(int d) {
    const int m = 3 * d - 5;
    // Hexagon corners in cyclic order: W, NW, NE, E, SE, SW.
    static const Coord ring[6] = {{-2, 0}, {-1, 1}, {1, 1}, {2, 0}, {1, -1}, {-1, -1}};
    std::vector<ProtoFace> out;
    for (int y0 = 0; y0 <= m; ++y0) {
        for (int x0 = 0; x0 <= m; x0 += 3) {
            if ((x0 + y0) % 2 != 0) continue;
            if (y0 - x0 > 2 || x0 + y0 > m) continue;
            std::vector<int> kept;
            for (int i = 0; i < 6; ++i)
                if (c666_is_qubit({x0 + ring[i].x, y0 + ring[i].y}, m)) kept.push_back(i);
            if (kept.size() < 4) continue;
            kept = rotate_contiguous(kept, 6);
            ProtoFace f;
            f.color = static_cast<FaceColor>(y0 % 3);
            f.kind = kept.size() == 6 ? FaceKind::hexagon : FaceKind::trapezoid;
            f.cx = x0;
            f.cy = y0;
            for (int i : kept) f.support.push_back({x0 + ring[i].x, y0 + ring[i].y});
            out.push_back(std::move(f));
        }
    }
    return out;
}

std::vector<Coord> c666_logical(int d) {
    const int m = 3 * d - 5;
    std::vector<Coord> out;
    for (int x = -2; x <= m; ++x)
        if (x % 2 == 0 && ((x % 3) + 3) % 3 != 0) out.push_back({x, 0});
    return out;
}

// ---------------------------------------------------------------- c488 ----

// Octagon corners in cyclic order around center (4a+2, 4b+2).
static const Coord kOct[8] = {{-1, -2}, {1, -2}, {2, -1}, {2, 1},
                              {1, 2},   {-1, 2}, {-2, 1}, {-2, -1}};
// Square corners in cyclic order around center (4a, 4b): N, E, S, W.
static const Coord kSq[4] = {{0, 1}, {1, 0}, {0, -1}, {-1, 0}};

// Half-octagon trapezoids, as contiguous arcs of kOct indices.
const std::vector<int>& half_indices(const std::string& half) {
    static const std::map<std::string, std::vector<int>> halves = {
        {"lower", {7, 0, 1, 2}},  {"upper", {3, 4, 5, 6}},
        {"right", {1, 2, 3, 4}},  {"left", {5, 6, 7, 0}},
        {"se", {0, 1, 2, 3}},     {"nw", {4, 5, 6, 7}},
        {"sw", {6, 7, 0, 1}},     {"ne", {2, 3, 4, 5}},
    };
    return halves.at(half);
}

ProtoFace sq_face(int a, int b) {
    ProtoFace f;
    f.color = FaceColor::red;
    f.kind = FaceKind::square;
    f.cx = 4 * a;
    f.cy = 4 * b;
    for (const auto& o : kSq) f.support.push_back({f.cx + o.x, f.cy + o.y});
    return f;
}

ProtoFace oct_face(int a, int b, const std::string& half = "") {
    ProtoFace f;
    f.color = ((a + b) % 2 + 2) % 2 == 0 ? FaceColor::green : FaceColor::blue;
    f.kind = half.empty() ? FaceKind::octagon : FaceKind::trapezoid;
    f.cx = 4 * a + 2;
    f.cy = 4 * b + 2;
    if (half.empty()) {
        for (const auto& o : kOct) f.support.push_back({f.cx + o.x, f.cy + o.y});
    } else {
        for (int i : half_indices(half))
            f.support.push_back({f.cx + kOct[i].x, f.cy + kOct[i].y});
    }
    return f;
}

std::vector<ProtoFace> c488_proto(int d) {
    const int m = (d + 1) / 2;
    std::vector<ProtoFace> out;
    for (int a = 0; a <= m - 2; ++a)
        for (int b = 0; b <= m - 2 - a; ++b) out.push_back(sq_face(a, b));
    for (int a = 0; a <= m - 3; ++a)
        for (int b = 0; b <= m - 3 - a; ++b) out.push_back(oct_face(a, b));
    for (int a = 0; a <= m - 2; ++a) out.push_back(oct_face(a, m - 2 - a, "sw"));
    for (int a = 0; a <= m - 2; a += 2) out.push_back(oct_face(a, -1, "upper"));
    for (int b = 1; b <= m - 2; b += 2) out.push_back(oct_face(-1, b, "right"));
    return out;
}

std::vector<Coord> c488_logical(int d) {
    const int m = (d + 1) / 2;
    std::vector<Coord> out = {{-1, 0}};
    for (int y = 1; y < 4 * (m - 1); y += 2) out.push_back({0, y});
    return out;
}

// ------------------------------------------------------------- assembly ----

ColorCode assemble(CodeFamily family, int distance, std::vector<ProtoFace> proto,
                   const std::vector<Coord>& logical) {
    std::set<Coord> qubit_set;
    for (const auto& f : proto)
        for (const auto& c : f.support) qubit_set.insert(c);

    // Vertex ids ordered by (y, x).
    std::vector<Coord> ordered(qubit_set.begin(), qubit_set.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const Coord& a, const Coord& b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
    std::map<Coord, int> id_of;
    ColorCode code;
    code.family = family;
    code.distance = distance;
    for (int i = 0; i < static_cast<int>(ordered.size()); ++i) {
        id_of[ordered[i]] = i;
        code.vertices.push_back({i, ordered[i].x, ordered[i].y});
    }

    std::sort(proto.begin(), proto.end(), [](const ProtoFace& a, const ProtoFace& b) {
        return std::tie(a.cy, a.cx) < std::tie(b.cy, b.cx);
    });
    for (int i = 0; i < static_cast<int>(proto.size()); ++i) {
        Face f;
        f.id = i;
        f.color = proto[i].color;
        f.kind = proto[i].kind;
        f.cx = proto[i].cx;
        f.cy = proto[i].cy;
        for (const auto& c : proto[i].support) f.support.push_back(id_of.at(c));
        code.faces.push_back(std::move(f));
    }

    for (const auto& c : logical) code.logical_support.push_back(id_of.at(c));
    std::sort(code.logical_support.begin(), code.logical_support.end());

    code.faces_of_vertex.assign(code.vertices.size(), {});
    for (const auto& f : code.faces)
        for (int q : f.support) code.faces_of_vertex[q].push_back(f.id);
    return code;
}

}  // namespace

ColorCode build_color_code(CodeFamily family, int distance) {
    if (distance < 3 || distance % 2 == 0)
        throw std::invalid_argument("distance must be an odd integer >= 3");
    if (family == CodeFamily::c666)
        return assemble(family, distance, c666_proto(distance), c666_logical(distance));
    return assemble(family, distance, c488_proto(distance), c488_logical(distance));
}

ValidationReport validate_code(const ColorCode& code) {
    ValidationReport rep;
    auto fail = [&rep](std::string msg) { rep.violations.push_back(std::move(msg)); };

    const int n = code.num_qubits();
    const int d = code.distance;

    // Count formulas per family.
    if (code.family == CodeFamily::c488) {
        if (n != (d * d + 2 * d - 1) / 2)
            fail("qubit count != (d^2+2d-1)/2");
    } else {
        if (n != (3 * d * d + 1) / 4)
            fail("qubit count != (3d^2+1)/4");
    }
    if (code.num_faces() != (n - 1) / 2) fail("face count != (n-1)/2");

    // Support sizes match kinds; no duplicate or out-of-range ids.
    for (const auto& f : code.faces) {
        std::set<int> uniq(f.support.begin(), f.support.end());
        if (uniq.size() != f.support.size())
            fail("face " + std::to_string(f.id) + " has duplicate support entries");
        for (int q : f.support)
            if (q < 0 || q >= n) fail("face " + std::to_string(f.id) + " support out of range");
        std::size_t want = 0;
        switch (f.kind) {
            case FaceKind::square: want = 4; break;
            case FaceKind::trapezoid: want = 4; break;
            case FaceKind::hexagon: want = 6; break;
            case FaceKind::octagon: want = 8; break;
        }
        if (f.support.size() != want)
            fail("face " + std::to_string(f.id) + " support size mismatch for its kind");
    }

    // Trivalence and three-colorability: every qubit sits in at most three
    // faces, with pairwise distinct colors, and in at least one.
    for (int q = 0; q < n; ++q) {
        const auto& fs = code.faces_of_vertex[q];
        if (fs.empty()) fail("qubit " + std::to_string(q) + " belongs to no face");
        if (fs.size() > 3) fail("qubit " + std::to_string(q) + " belongs to >3 faces");
        for (std::size_t i = 0; i < fs.size(); ++i)
            for (std::size_t j = i + 1; j < fs.size(); ++j)
                if (code.faces[fs[i]].color == code.faces[fs[j]].color)
                    fail("qubit " + std::to_string(q) + " touches two faces of one color");
    }

    // Pairwise even overlaps (self-dual CSS commutation).
    for (int i = 0; i < code.num_faces(); ++i) {
        gf2::BitVec mi = code.face_mask(i);
        for (int j = i; j < code.num_faces(); ++j) {
            std::size_t common = 0;
            for (int q : code.faces[j].support)
                if (mi.get(static_cast<std::size_t>(q))) ++common;
            if (common % 2 != 0)
                fail("faces " + std::to_string(i) + "," + std::to_string(j) + " overlap oddly");
        }
    }

    // One logical qubit.
    gf2::RowBasis basis;
    for (int f = 0; f < code.num_faces(); ++f) basis.insert(code.face_mask(f));
    const int k = n - 2 * static_cast<int>(basis.rank());
    if (k != 1) fail("k != 1 (got " + std::to_string(k) + ")");

    // Logical representative: commutes with every face, nontrivial, weight d.
    gf2::BitVec lv(static_cast<std::size_t>(n));
    for (int q : code.logical_support) lv.set(static_cast<std::size_t>(q), true);
    for (const auto& f : code.faces) {
        std::size_t common = 0;
        for (int q : f.support) if (lv.get(static_cast<std::size_t>(q))) ++common;
        if (common % 2 != 0) fail("logical anticommutes with face " + std::to_string(f.id));
    }
    if (basis.contains(lv)) fail("logical support lies in the stabilizer span");
    if (static_cast<int>(code.logical_support.size()) != d)
        fail("logical support weight != distance");

    return rep;
}

int min_logical_weight(const ColorCode& code) {
    const std::size_t n = static_cast<std::size_t>(code.num_qubits());
    std::vector<gf2::BitVec> rows;
    gf2::RowBasis span;
    for (int f = 0; f < code.num_faces(); ++f) {
        rows.push_back(code.face_mask(f));
        span.insert(code.face_mask(f));
    }
    std::vector<gf2::BitVec> ker = gf2::kernel_basis(rows, n);
    if (ker.size() > 26)
        throw std::runtime_error("kernel dimension exceeds enumeration budget");

    const std::uint64_t total = std::uint64_t{1} << ker.size();
    gf2::BitVec cur(n);
    std::size_t best = n + 1;
    for (std::uint64_t g = 1; g < total; ++g) {
        // Gray-code step: one kernel generator toggles per iteration.
        std::uint64_t gray = g ^ (g >> 1);
        std::uint64_t prev = (g - 1) ^ ((g - 1) >> 1);
        int bit = std::countr_zero(gray ^ prev);
        cur ^= ker[static_cast<std::size_t>(bit)];
        std::size_t w = cur.popcount();
        if (w < best && !span.contains(cur)) best = w;
    }
    if (best > n) throw std::runtime_error("no logical operator found (k = 0)");
    return static_cast<int>(best);
}

nlohmann::json code_to_json(const ColorCode& code) {
    nlohmann::json j;
    j["family"] = family_name(code.family);
    j["distance"] = code.distance;
    j["num_qubits"] = code.num_qubits();
    j["num_faces"] = code.num_faces();
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : code.vertices)
        j["vertices"].push_back({{"id", v.id}, {"x", v.x}, {"y", v.y}});
    j["faces"] = nlohmann::json::array();
    for (const auto& f : code.faces)
        j["faces"].push_back({{"id", f.id},
                              {"color", color_name(f.color)},
                              {"kind", kind_name(f.kind)},
                              {"support", f.support}});
    j["logical_support"] = code.logical_support;
    return j;
}

const char* family_name(CodeFamily f) {
    return f == CodeFamily::c488 ? "c488" : "c666";
}

const char* color_name(FaceColor c) {
    switch (c) {
        case FaceColor::red: return "red";
        case FaceColor::green: return "green";
        case FaceColor::blue: return "blue";
    }
    return "?";
}

const char* kind_name(FaceKind k) {
    switch (k) {
        case FaceKind::square: return "square";
        case FaceKind::trapezoid: return "trapezoid";
        case FaceKind::hexagon: return "hexagon";
        case FaceKind::octagon: return "octagon";
    }
    return "?";
}

}  // namespace colorcode
