#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "colorcode/gf2.hpp"

namespace colorcode {

// c488: truncated-square lattice (squares + octagons). c666: honeycomb.
enum class CodeFamily { c488, c666 };

enum class FaceColor { red, green, blue };
enum class FaceKind { square, trapezoid, hexagon, octagon };

struct Vertex {
    int id;
    int x;
    int y;
};

struct Face {
    int id;
    FaceColor color;
    FaceKind kind;
    int cx;  // geometric center, for deterministic ordering and debug output
    int cy;
    std::vector<int> support;  // data-qubit ids in cyclic geometric order
};

// Triangular patch with one logical qubit. Self-dual CSS: each face carries
// one X-type and one Z-type generator on the same support, so a single
// logical support serves both bases.
struct ColorCode {
    CodeFamily family;
    int distance;
    std::vector<Vertex> vertices;  // index == id, ordered by (y, x)
    std::vector<Face> faces;       // index == id, ordered by (cy, cx)
    std::vector<int> logical_support;
    std::vector<std::vector<int>> faces_of_vertex;  // ascending face ids

    int num_qubits() const { return static_cast<int>(vertices.size()); }
    int num_faces() const { return static_cast<int>(faces.size()); }

    gf2::BitVec face_mask(int f) const {
        gf2::BitVec v(vertices.size());
        for (int q : faces[f].support) v.set(static_cast<std::size_t>(q), true);
        return v;
    }
};

// Throws std::invalid_argument for even or sub-3 distance.
ColorCode build_color_code(CodeFamily family, int distance);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Checks every structural invariant; collects violations instead of throwing.
ValidationReport validate_code(const ColorCode& code);

// Minimum weight over logical representatives (kernel of the face matrix
// minus its row span), by Gray-code enumeration of the kernel.
// Throws std::runtime_error when the kernel dimension exceeds the
// enumeration budget (26).
int min_logical_weight(const ColorCode& code);

nlohmann::json code_to_json(const ColorCode& code);

const char* family_name(CodeFamily f);
const char* color_name(FaceColor c);
const char* kind_name(FaceKind k);

}  // namespace colorcode
