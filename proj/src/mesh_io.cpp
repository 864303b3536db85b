/*
 * Copyright 2026 The Schrodiff Authors
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */

#include "schrodiff/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace schrodiff {

namespace {

// Line-oriented reader that keeps track of the current line number and
// skips blanks and '#' comments on request.
class LineReader {
public:
    LineReader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

    bool next_raw(std::string& line) {
        while (std::getline(in_, line)) {
            ++line_number_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return true;
        }
        return false;
    }

    // Next line that has content, with comments removed.
    bool next(std::string& line) {
        while (next_raw(line)) {
            if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
            if (line.find_first_not_of(" \t") != std::string::npos) return true;
        }
        return false;
    }

    long line_number() const { return line_number_; }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(path_, line_number_, what);
    }

private:
    std::istream& in_;
    std::string path_;
    long line_number_ = 0;
};

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) tokens.push_back(t);
    return tokens;
}

bool looks_like_integer(const std::string& t) {
    size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
    if (i == t.size()) return false;
    return std::all_of(t.begin() + i, t.end(), [](unsigned char c) { return std::isdigit(c); });
}

double parse_double(const LineReader& rd, const std::string& t) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) rd.fail("expected a number, got '" + t + "'");
    return v;
}

long parse_long(const LineReader& rd, const std::string& t) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) rd.fail("expected an integer, got '" + t + "'");
    return v;
}

// Integer-formatted channels are 0-255, float-formatted ones already 0-1.
double color_channel(const LineReader& rd, const std::string& t) {
    double v = parse_double(rd, t);
    if (looks_like_integer(t)) v /= 255.0;
    return std::clamp(v, 0.0, 1.0);
}

void check_vertex_index(const LineReader& rd, long idx, long nv) {
    if (idx < 0 || idx >= nv) rd.fail("vertex index " + std::to_string(idx) + " out of range");
}

TriangleMesh parse_off(LineReader& rd) {
    std::string line;
    if (!rd.next(line)) rd.fail("empty file");
    auto header = split_tokens(line);
    bool with_colors;
    if (header[0] == "OFF")
        with_colors = false;
    else if (header[0] == "COFF")
        with_colors = true;
    else
        rd.fail("expected OFF or COFF header");
    if (header.size() != 1) rd.fail("unexpected tokens after header");

    if (!rd.next(line)) rd.fail("missing counts line");
    auto counts = split_tokens(line);
    if (counts.size() < 2) rd.fail("counts line needs vertex and face counts");
    const long nv = parse_long(rd, counts[0]);
    const long nf = parse_long(rd, counts[1]);
    if (nv < 0 || nf < 0) rd.fail("negative counts");

    TriangleMesh mesh;
    mesh.vertices.reserve(nv);
    if (with_colors) mesh.colors.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        if (!rd.next(line)) rd.fail("unexpected end of file in vertex list");
        auto tok = split_tokens(line);
        if (!with_colors && tok.size() != 3) rd.fail("expected 'x y z'");
        if (with_colors && tok.size() != 6 && tok.size() != 7) rd.fail("expected 'x y z r g b [a]'");
        mesh.vertices.emplace_back(parse_double(rd, tok[0]), parse_double(rd, tok[1]),
                                   parse_double(rd, tok[2]));
        if (with_colors)
            mesh.colors.emplace_back(color_channel(rd, tok[3]), color_channel(rd, tok[4]),
                                     color_channel(rd, tok[5]));
    }
    for (long i = 0; i < nf; ++i) {
        if (!rd.next(line)) rd.fail("unexpected end of file in face list");
        auto tok = split_tokens(line);
        if (tok.empty()) rd.fail("empty face line");
        const long arity = parse_long(rd, tok[0]);
        if (arity != 3) throw NonTriangleFaceError(rd.path(), rd.line_number(), arity);
        if (static_cast<long>(tok.size()) < 1 + arity) rd.fail("face line too short");
        std::array<int, 3> tri{};
        for (int c = 0; c < 3; ++c) {
            long idx = parse_long(rd, tok[1 + c]);
            check_vertex_index(rd, idx, nv);
            tri[c] = static_cast<int>(idx);
        }
        mesh.triangles.push_back(tri); // trailing face-color tokens ignored
    }
    return mesh;
}

struct PlyProperty {
    std::string name;
    bool integer_typed = false;
    bool is_list = false;
};

bool ply_integer_type(const std::string& t) {
    return t == "char" || t == "uchar" || t == "short" || t == "ushort" || t == "int" ||
           t == "uint" || t == "int8" || t == "uint8" || t == "int16" || t == "uint16" ||
           t == "int32" || t == "uint32";
}

TriangleMesh parse_ply(LineReader& rd) {
    std::string line;
    if (!rd.next(line) || split_tokens(line) != std::vector<std::string>{"ply"})
        rd.fail("expected 'ply' magic");

    long nv = -1, nf = -1;
    std::vector<PlyProperty> vertex_props;
    bool face_has_list = false;
    std::string current_element;
    bool saw_format = false;

    while (true) {
        if (!rd.next(line)) rd.fail("unexpected end of header");
        auto tok = split_tokens(line);
        if (tok[0] == "comment" || tok[0] == "obj_info") continue;
        if (tok[0] == "format") {
            if (tok.size() < 2 || tok[1] != "ascii") rd.fail("only ASCII PLY is supported");
            saw_format = true;
        } else if (tok[0] == "element") {
            if (tok.size() != 3) rd.fail("malformed element line");
            current_element = tok[1];
            if (tok[1] == "vertex")
                nv = parse_long(rd, tok[2]);
            else if (tok[1] == "face")
                nf = parse_long(rd, tok[2]);
            else
                rd.fail("unsupported element '" + tok[1] + "'");
        } else if (tok[0] == "property") {
            if (current_element == "vertex") {
                if (tok.size() == 3)
                    vertex_props.push_back({tok[2], ply_integer_type(tok[1]), false});
                else
                    rd.fail("list-typed vertex properties are not supported");
            } else if (current_element == "face") {
                if (tok.size() == 5 && tok[1] == "list" &&
                    (tok[4] == "vertex_indices" || tok[4] == "vertex_index"))
                    face_has_list = true;
                else
                    rd.fail("expected 'property list <t> <t> vertex_indices'");
            } else {
                rd.fail("property before any element");
            }
        } else if (tok[0] == "end_header") {
            break;
        } else {
            rd.fail("unrecognized header line '" + tok[0] + "'");
        }
    }
    if (!saw_format) rd.fail("missing format line");
    if (nv < 0) rd.fail("missing vertex element");
    if (nf < 0) rd.fail("missing face element");
    if (!face_has_list) rd.fail("face element has no vertex index list");

    int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1;
    for (int p = 0; p < static_cast<int>(vertex_props.size()); ++p) {
        const auto& name = vertex_props[p].name;
        if (name == "x") ix = p;
        else if (name == "y") iy = p;
        else if (name == "z") iz = p;
        else if (name == "red") ir = p;
        else if (name == "green") ig = p;
        else if (name == "blue") ib = p;
    }
    if (ix < 0 || iy < 0 || iz < 0) rd.fail("vertex element lacks x/y/z properties");
    const bool with_colors = ir >= 0 && ig >= 0 && ib >= 0;

    auto channel = [&](LineReader& r, const std::vector<std::string>& tok, int p) {
        double v = parse_double(r, tok[p]);
        if (vertex_props[p].integer_typed) v /= 255.0;
        return std::clamp(v, 0.0, 1.0);
    };

    TriangleMesh mesh;
    mesh.vertices.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        if (!rd.next(line)) rd.fail("unexpected end of file in vertex list");
        auto tok = split_tokens(line);
        if (tok.size() != vertex_props.size()) rd.fail("vertex line does not match declared properties");
        mesh.vertices.emplace_back(parse_double(rd, tok[ix]), parse_double(rd, tok[iy]),
                                   parse_double(rd, tok[iz]));
        if (with_colors)
            mesh.colors.emplace_back(channel(rd, tok, ir), channel(rd, tok, ig),
                                     channel(rd, tok, ib));
    }
    for (long i = 0; i < nf; ++i) {
        if (!rd.next(line)) rd.fail("unexpected end of file in face list");
        auto tok = split_tokens(line);
        if (tok.empty()) rd.fail("empty face line");
        const long arity = parse_long(rd, tok[0]);
        if (arity != 3) throw NonTriangleFaceError(rd.path(), rd.line_number(), arity);
        if (static_cast<long>(tok.size()) < 4) rd.fail("face line too short");
        std::array<int, 3> tri{};
        for (int c = 0; c < 3; ++c) {
            long idx = parse_long(rd, tok[1 + c]);
            check_vertex_index(rd, idx, nv);
            tri[c] = static_cast<int>(idx);
        }
        mesh.triangles.push_back(tri);
    }
    return mesh;
}

TriangleMesh parse_obj(LineReader& rd) {
    TriangleMesh mesh;
    std::string line;
    int colored = -1; // -1 undecided, else 0/1
    while (rd.next(line)) {
        auto tok = split_tokens(line);
        if (tok[0] == "v") {
            if (tok.size() != 4 && tok.size() != 7) rd.fail("expected 'v x y z [r g b]'");
            mesh.vertices.emplace_back(parse_double(rd, tok[1]), parse_double(rd, tok[2]),
                                       parse_double(rd, tok[3]));
            const int has = tok.size() == 7 ? 1 : 0;
            if (colored == -1) colored = has;
            if (colored != has) rd.fail("inconsistent vertex color presence");
            if (has)
                mesh.colors.emplace_back(color_channel(rd, tok[4]), color_channel(rd, tok[5]),
                                         color_channel(rd, tok[6]));
        } else if (tok[0] == "f") {
            const long arity = static_cast<long>(tok.size()) - 1;
            if (arity > 3) throw NonTriangleFaceError(rd.path(), rd.line_number(), arity);
            if (arity < 3) rd.fail("face needs 3 vertex references");
            std::array<int, 3> tri{};
            for (int c = 0; c < 3; ++c) {
                std::string ref = tok[1 + c].substr(0, tok[1 + c].find('/'));
                long idx = parse_long(rd, ref);
                if (idx < 1) rd.fail("OBJ indices must be positive (got " + ref + ")");
                tri[c] = static_cast<int>(idx - 1);
            }
            mesh.triangles.push_back(tri);
        }
        // vn/vt/g/o/s/usemtl/mtllib and anything else: ignored
    }
    for (const auto& tri : mesh.triangles)
        for (int c = 0; c < 3; ++c)
            if (tri[c] >= mesh.vertex_count())
                throw ParseError(rd.path(), 0, "face references vertex " + std::to_string(tri[c] + 1) +
                                                   " but only " + std::to_string(mesh.vertex_count()) +
                                                   " vertices are defined");
    return mesh;
}

std::string lowercase_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

} // namespace

TriangleMesh load_mesh(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) throw FileNotFoundError(path.string());
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    LineReader rd(in, path.string());
    const std::string ext = lowercase_extension(path);

    TriangleMesh mesh;
    if (ext == ".off" || ext == ".coff")
        mesh = parse_off(rd);
    else if (ext == ".ply")
        mesh = parse_ply(rd);
    else if (ext == ".obj")
        mesh = parse_obj(rd);
    else
        throw ParseError(path.string(), 0, "unsupported extension '" + ext + "'");

    mesh.validate();
    return mesh;
}

} // namespace schrodiff
