#include "catch_amalgamated.hpp"
#include "support.hpp"

#include "isoops/curvature.hpp"

#include <complex>
#include <numbers>
#include <sstream>

using namespace isoops;
using Catch::Approx;

namespace {

Eigen::Matrix3d random_rotation()
{
    Eigen::Vector3d axis(testing::uniform(-1, 1), testing::uniform(-1, 1), testing::uniform(-1, 1));
    return Eigen::AngleAxisd(testing::uniform(0, 6.28), axis.normalized()).toRotationMatrix();
}

double angle_deg(const Vec3& a, const Vec3& b)
{
    return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

} // namespace

TEST_CASE("vertex normals")
{
    const TriMesh plane = grid_plane(6);
    for (const auto& n : plane.normals) CHECK((n - Vec3(0, 0, 1)).norm() < 1e-14);

    const TriMesh sphere = icosphere(3);
    for (std::size_t v = 0; v < sphere.vertices.size(); ++v) CHECK(angle_deg(sphere.normals[v], sphere.vertices[v]) < 2.0);

    const TriMesh cyl = cylinder(32, 8);
    for (std::size_t v = 0; v < cyl.vertices.size(); ++v) {
        if (cyl.boundary[v]) continue;
        CHECK(std::abs(cyl.normals[v].z()) < 1e-12);
        const Vec3 radial(cyl.vertices[v].x(), cyl.vertices[v].y(), 0.0);
        CHECK(angle_deg(cyl.normals[v], radial) < 1e-6);
    }
}

TEST_CASE("topology of generated meshes")
{
    const TriMesh sphere = icosphere(4);
    CHECK(sphere.vertices.size() == 2562);
    CHECK(std::none_of(sphere.boundary.begin(), sphere.boundary.end(), [](bool b) { return b; }));
    for (const auto& r : sphere.one_rings) CHECK((r.size() == 5 || r.size() == 6));

    const TriMesh plane = grid_plane(4);
    std::size_t nb = 0;
    for (bool b : plane.boundary) nb += b;
    CHECK(nb == 16);
}

TEST_CASE("ring frame samples")
{
    const TriMesh plane = grid_plane(4);
    const int centre = 2 * 5 + 2;
    const auto flat = ring_frame(plane, centre);
    CHECK(flat.size() == 6);
    for (const auto& s : flat) {
        CHECK(s.k == 0.0);
        CHECK(s.d.norm() == 0.0);
        CHECK(s.rho > 0.0);
    }
    for (std::size_t j = 1; j < flat.size(); ++j) CHECK(flat[j].phi > flat[j - 1].phi);
    CHECK(flat.front().phi == 0.0);

    const TriMesh sphere = icosphere(4);
    for (const auto& s : ring_frame(sphere, 100)) CHECK(s.k == Approx(-1.0).margin(0.02));

    CHECK(testing::thrown_code([&] { ring_frame(plane, 0); }) == ErrorCode::BoundaryVertex);
    CHECK(testing::thrown_code([&] { ring_frame(plane, 999); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("ring weights cancel the second harmonic")
{
    for (int t = 0; t < 200; ++t) {
        const int n = 5 + t % 4;
        std::vector<double> phis;
        for (int j = 0; j < n; ++j) phis.push_back(2.0 * std::numbers::pi * (j + testing::uniform(-0.3, 0.3)) / n);
        const auto w = ring_weights(phis);
        std::complex<double> s = 0.0;
        double total = 0.0;
        for (int j = 0; j < n; ++j) {
            s += w[j] * std::polar(1.0, 2.0 * phis[j]);
            total += w[j];
        }
        CHECK(std::abs(s) <= 1e-10);
        CHECK(total == Approx(1.0).margin(1e-12));
    }
    CHECK(testing::thrown_code([] { ring_weights({0.0, 0.1, 0.2}); }) == ErrorCode::GapTooLarge);
}

TEST_CASE("curvature of a sphere, plane and cylinder")
{
    const MeshCurvature s = mesh_curvature(icosphere(4));
    CHECK(s.summary.boundary == 0);
    CHECK(s.summary.median_H == Approx(-1.0).margin(0.05));
    CHECK(s.summary.median_R == Approx(1.0).margin(0.05));

    const MeshCurvature p = mesh_curvature(grid_plane(8));
    CHECK(p.summary.boundary == 32);
    for (const auto& c : p.vertices) {
        if (std::isnan(c.H)) continue;
        CHECK(std::abs(c.H) <= 1e-9);
        CHECK(std::abs(c.R) <= 1e-9);
    }

    const TriMesh cyl = cylinder(64, 32, 1.0, 3.0);
    const MeshCurvature c = mesh_curvature(cyl);
    CHECK(c.summary.median_H == Approx(-0.5).margin(0.08));
    CHECK(c.summary.median_R == Approx(std::sqrt(0.5)).margin(0.08));
    for (std::size_t v = 0; v < cyl.vertices.size(); ++v) {
        if (cyl.boundary[v]) CHECK(std::isnan(c.vertices[v].H));
    }
}

TEST_CASE("rms curvature dominates mean curvature")
{
    // exact normals
    for (TriMesh m : {icosphere(3), cylinder(24, 10)}) {
        for (std::size_t v = 0; v < m.vertices.size(); ++v) {
            Vec3 p = m.vertices[v];
            if (m.vertices.size() != 642) p.z() = 0.0;
            m.normals[v] = p.normalized();
        }
        const MeshCurvature c = mesh_curvature(m);
        for (const auto& v : c.vertices)
            if (v.valid) CHECK(v.R >= std::abs(v.H) - 1e-9);
    }
    // estimated normals
    for (const TriMesh& m : {icosphere(3), cylinder(24, 10)}) {
        const MeshCurvature c = mesh_curvature(m);
        for (const auto& v : c.vertices)
            if (v.valid) CHECK(v.R >= std::abs(v.H) - 0.05);
    }
}

TEST_CASE("curvature is invariant under rigid motions and scales as 1/s")
{
    const TriMesh base = icosphere(3);
    const MeshCurvature c0 = mesh_curvature(base);
    for (int t = 0; t < 3; ++t) {
        const Eigen::Matrix3d rot = random_rotation();
        const Vec3 shift(testing::uniform(-5, 5), testing::uniform(-5, 5), testing::uniform(-5, 5));
        const double scale = testing::uniform(0.2, 5.0);
        const MeshCurvature moved = mesh_curvature(transformed(base, rot, shift));
        const MeshCurvature scaled = mesh_curvature(transformed(base, Eigen::Matrix3d::Identity(), Vec3::Zero(), scale));
        for (std::size_t v = 0; v < base.vertices.size(); ++v) {
            CHECK(std::abs(moved.vertices[v].H - c0.vertices[v].H) <= 1e-9);
            CHECK(std::abs(moved.vertices[v].R - c0.vertices[v].R) <= 1e-9);
            CHECK(std::abs(scale * scaled.vertices[v].H - c0.vertices[v].H) <= 1e-9 * std::abs(c0.vertices[v].H));
        }
    }
}

TEST_CASE("sphere medians converge under refinement")
{
    double prev = 1e9;
    for (int level = 2; level <= 5; ++level) {
        const auto s = mesh_curvature(icosphere(level)).summary;
        const double err = std::abs(s.median_H + 1.0);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("curvature CSV")
{
    const MeshCurvature c = mesh_curvature(icosphere(0));
    std::ostringstream os;
    write_curvature_csv(os, c);
    const std::string s = os.str();
    CHECK(s.rfind("vertex,H,R,valid\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 13);
}

TEST_CASE("OBJ reader")
{
    std::istringstream in("# quad with every corner form\n"
                          "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
                          "vt 0 0\nvn 0 0 1\n"
                          "f 1 2/1 3//1 -1/1/1\n");
    const TriMesh m = read_obj(in);
    REQUIRE(m.vertices.size() == 4);
    REQUIRE(m.triangles.size() == 2);
    CHECK(m.triangles[1][2] == 3);
    for (const auto& n : m.normals) CHECK((n - Vec3(0, 0, 1)).norm() < 1e-15);

    std::istringstream bad("v 0 0 0\nv 1 0 0\nv 0 1 0\ng group\nf 1 2 3\n");
    try {
        read_obj(bad);
        FAIL("accepted an unsupported statement");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Parse);
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    std::istringstream range("v 0 0 0\nf 1 2 3\n");
    CHECK(testing::thrown_code([&] { read_obj(range); }) == ErrorCode::Parse);
    std::istringstream num("v 0 x 0\n");
    CHECK(testing::thrown_code([&] { read_obj(num); }) == ErrorCode::Parse);
    CHECK(testing::thrown_code([] { read_obj(std::string("/nonexistent/mesh.obj")); }) == ErrorCode::Io);
}

TEST_CASE("OBJ round trip")
{
    const TriMesh a = icosphere(2);
    std::stringstream ss;
    write_obj(ss, a);
    const TriMesh b = read_obj(ss);
    REQUIRE(b.vertices.size() == a.vertices.size());
    CHECK(b.triangles == a.triangles);
    for (std::size_t v = 0; v < a.vertices.size(); ++v) CHECK(b.vertices[v] == a.vertices[v]);
}
