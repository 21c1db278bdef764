#include "wulff/io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>

#include "wulff/errors.hpp"

namespace wulff {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // fixed \n line endings
    if (!out) throw ConfigError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open for reading: " + path);
    return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{}) throw ConfigError("bad numeric field: '" + s + "'");
    return v;
}

int parse_int(const std::string& s) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{}) throw ConfigError("bad integer field: '" + s + "'");
    return v;
}

} // namespace

std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_polygon_csv(const std::string& path, const std::vector<Vec2>& vertices) {
    std::ofstream out = open_out(path);
    out << "x,y\n";
    for (const Vec2& p : vertices) out << fmt_double(p.x) << ',' << fmt_double(p.y) << '\n';
}

std::vector<Vec2> read_polygon_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    std::getline(in, line); // header
    std::vector<Vec2> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 2) throw ConfigError("polygon CSV: expected two columns in " + path);
        pts.push_back({parse_double(f[0]), parse_double(f[1])});
    }
    return pts;
}

void write_mesh_csv(const std::string& dir, const Mesh& mesh) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out = open_out(dir + "/vertices.csv");
        out << "x,y\n";
        for (const Vec2& p : mesh.vertices)
            out << fmt_double(p.x) << ',' << fmt_double(p.y) << '\n';
    }
    {
        std::ofstream out = open_out(dir + "/triangles.csv");
        out << "v0,v1,v2\n";
        for (const auto& t : mesh.triangles) out << t[0] << ',' << t[1] << ',' << t[2] << '\n';
    }
    {
        std::ofstream out = open_out(dir + "/edges.csv");
        out << "v0,v1,tag\n";
        for (const BoundaryEdge& e : mesh.boundary_edges)
            out << e.a << ',' << e.b << ','
                << (e.tag == BoundaryTag::Gamma0 ? "gamma0" : "gamma1") << '\n';
    }
    {
        std::ofstream out = open_out(dir + "/mesh_info.csv");
        out << "h,R\n" << fmt_double(mesh.h) << ',' << fmt_double(mesh.R) << '\n';
    }
}

Mesh read_mesh_csv(const std::string& dir) {
    Mesh mesh;
    {
        std::ifstream in = open_in(dir + "/vertices.csv");
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split_csv_line(line);
            mesh.vertices.push_back({parse_double(f[0]), parse_double(f[1])});
        }
    }
    {
        std::ifstream in = open_in(dir + "/triangles.csv");
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split_csv_line(line);
            mesh.triangles.push_back({parse_int(f[0]), parse_int(f[1]), parse_int(f[2])});
        }
    }
    mesh.vertex_on_gamma0.assign(mesh.vertices.size(), false);
    {
        std::ifstream in = open_in(dir + "/edges.csv");
        std::string line;
        std::getline(in, line);
        // Rebuild edge -> owning triangle from the triangle list.
        std::map<std::pair<int, int>, int> owner;
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
            for (int e = 0; e < 3; ++e) {
                const int a = mesh.triangles[t][static_cast<std::size_t>(e)];
                const int b = mesh.triangles[t][static_cast<std::size_t>((e + 1) % 3)];
                owner[{std::min(a, b), std::max(a, b)}] = static_cast<int>(t);
            }
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split_csv_line(line);
            BoundaryEdge e;
            e.a = parse_int(f[0]);
            e.b = parse_int(f[1]);
            e.tag = f[2] == "gamma0" ? BoundaryTag::Gamma0 : BoundaryTag::Gamma1;
            e.tri = owner.at({std::min(e.a, e.b), std::max(e.a, e.b)});
            if (e.tag == BoundaryTag::Gamma0) {
                mesh.vertex_on_gamma0[static_cast<std::size_t>(e.a)] = true;
                mesh.vertex_on_gamma0[static_cast<std::size_t>(e.b)] = true;
            }
            mesh.boundary_edges.push_back(e);
        }
    }
    {
        std::ifstream in = open_in(dir + "/mesh_info.csv");
        std::string line;
        std::getline(in, line);
        std::getline(in, line);
        const auto f = split_csv_line(line);
        mesh.h = parse_double(f[0]);
        mesh.R = parse_double(f[1]);
    }
    return mesh;
}

void write_solution_csv(const std::string& path, const Mesh& mesh, const std::vector<double>& u) {
    std::ofstream out = open_out(path);
    out << "x,y,u\n";
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
        out << fmt_double(mesh.vertices[v].x) << ',' << fmt_double(mesh.vertices[v].y) << ','
            << fmt_double(u[v]) << '\n';
}

std::vector<double> read_solution_csv(const std::string& path, const Mesh& mesh) {
    std::ifstream in = open_in(path);
    std::string line;
    std::getline(in, line);
    std::vector<double> u;
    u.reserve(mesh.vertices.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 3) throw ConfigError("solution CSV: expected x,y,u rows");
        u.push_back(parse_double(f[2]));
    }
    if (u.size() != mesh.vertices.size())
        throw ConfigError("solution CSV: vertex count does not match the mesh");
    return u;
}

void write_level_table_csv(const std::string& path, const LevelTable& table) {
    std::ofstream out = open_out(path);
    out << "t,mu,I,K,Q,grad_cv,center_x,center_y,rho\n";
    for (const LevelRecord& r : table.levels) {
        out << fmt_double(r.t) << ',' << fmt_double(r.mu) << ',' << fmt_double(r.source) << ','
            << fmt_double(r.K) << ',' << fmt_double(r.quotient) << ',' << fmt_double(r.grad_cv)
            << ',' << fmt_double(r.center.x) << ',' << fmt_double(r.center.y) << ','
            << fmt_double(r.rho) << '\n';
    }
}

void write_contours_svg(const std::string& path, const Mesh& mesh,
                        const std::vector<std::vector<LevelPolyline>>& level_curves) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Vec2& p : mesh.vertices) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double pad = 0.05 * std::max(xmax - xmin, ymax - ymin);
    xmin -= pad; xmax += pad; ymin -= pad; ymax += pad;
    const double scale = 800.0 / std::max(xmax - xmin, ymax - ymin);
    auto X = [&](double x) { return (x - xmin) * scale; };
    auto Y = [&](double y) { return (ymax - y) * scale; }; // SVG y grows downward

    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_double((xmax - xmin) * scale)
        << "\" height=\"" << fmt_double((ymax - ymin) * scale) << "\">\n";

    // Domain outline from the boundary edges.
    out << "<g stroke=\"black\" stroke-width=\"1.5\" fill=\"none\">\n";
    for (const BoundaryEdge& e : mesh.boundary_edges) {
        const Vec2 a = mesh.vertices[static_cast<std::size_t>(e.a)];
        const Vec2 b = mesh.vertices[static_cast<std::size_t>(e.b)];
        out << "<line x1=\"" << fmt_double(X(a.x)) << "\" y1=\"" << fmt_double(Y(a.y))
            << "\" x2=\"" << fmt_double(X(b.x)) << "\" y2=\"" << fmt_double(Y(b.y)) << "\"/>\n";
    }
    out << "</g>\n";

    const std::size_t n_levels = level_curves.size();
    for (std::size_t li = 0; li < n_levels; ++li) {
        const int hue = static_cast<int>(240.0 * (n_levels > 1 ? double(li) / (n_levels - 1) : 0));
        out << "<g stroke=\"hsl(" << 240 - hue << ",80%,45%)\" stroke-width=\"1\" fill=\"none\">\n";
        for (const LevelPolyline& pl : level_curves[li]) {
            out << "<polyline points=\"";
            for (const Vec2& p : pl.points)
                out << fmt_double(X(p.x)) << ',' << fmt_double(Y(p.y)) << ' ';
            if (pl.closed && !pl.points.empty())
                out << fmt_double(X(pl.points.front().x)) << ',' << fmt_double(Y(pl.points.front().y));
            out << "\"/>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
}

} // namespace wulff
