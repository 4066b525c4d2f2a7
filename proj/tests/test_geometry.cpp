#include <gtest/gtest.h>

#include <helmbem/geometry.hpp>
#include <helmbem/shapes.hpp>

using namespace helmbem;

TEST(Segment, NormalPointsOutwardOnCcwSquare) {
    const Mesh sq = shapes::unit_square();
    const SegmentGeom s0 = sq.segment(0);
    EXPECT_DOUBLE_EQ(s0.length, 1.0);
    EXPECT_EQ(s0.normal, Vec2(0, -1));
    EXPECT_EQ(sq.segment(1).normal, Vec2(1, 0));
    EXPECT_EQ(sq.segment(2).normal, Vec2(0, 1));
    EXPECT_EQ(sq.segment(3).normal, Vec2(-1, 0));
    EXPECT_EQ(s0.point(0.25), Vec2(0.25, 0));
}

TEST(Basis, ValuesAndCurl) {
    const SegmentGeom s(Vec2(0, 0), Vec2(2, 0));
    EXPECT_EQ(basis_value(NodeAt::A, 0.0), 1.0);
    EXPECT_EQ(basis_value(NodeAt::A, 1.0), 0.0);
    EXPECT_EQ(basis_value(NodeAt::B, 0.25), 0.25);
    EXPECT_EQ(basis_curl(s, NodeAt::A), -0.5);
    EXPECT_EQ(basis_curl(s, NodeAt::B), 0.5);
    EXPECT_EQ(basis_curl(s, NodeAt::A) + basis_curl(s, NodeAt::B), 0.0);
}

TEST(Mesh, ClockwiseInputIsRenumbered) {
    const Mesh m = Mesh::from_nodes({Vec2(0, 0), Vec2(0, 1), Vec2(1, 1), Vec2(1, 0)});
    EXPECT_TRUE(m.orientation_corrected());
    EXPECT_GT(m.signed_area(), 0);
    EXPECT_EQ(m.node(0), Vec2(0, 0));
    EXPECT_EQ(m.node(1), Vec2(1, 0));
    EXPECT_EQ(m.node(3), Vec2(0, 1));
    EXPECT_FALSE(shapes::unit_square().orientation_corrected());
}

TEST(Mesh, Rejections) {
    EXPECT_THROW(Mesh::from_nodes({Vec2(0, 0), Vec2(1, 0)}), MeshError);
    EXPECT_THROW(Mesh::from_nodes({Vec2(0, 0), Vec2(1, 0), Vec2(1, 0), Vec2(0, 1)}), MeshError);
    EXPECT_THROW(Mesh::from_nodes({Vec2(0, 0), Vec2(1, 0), Vec2(std::nan(""), 1)}), MeshError);
    // bow tie
    EXPECT_THROW(Mesh::from_nodes({Vec2(0, 0), Vec2(1, 1), Vec2(1, 0), Vec2(0, 1)}), MeshError);
    // spike folding back on its neighbour
    EXPECT_THROW(Mesh::from_nodes({Vec2(0, 0), Vec2(2, 0), Vec2(1, 0), Vec2(1, 1)}), MeshError);
}

TEST(Mesh, NonConvexAccepted) {
    const Mesh m = Mesh::from_nodes({Vec2(0, 0), Vec2(2, 0), Vec2(2, 2), Vec2(1, 0.5), Vec2(0, 2)});
    EXPECT_EQ(m.size(), 5);
    EXPECT_GT(adjacent_angle(m, 2, 3), kPi);
}

TEST(Mesh, ScaledAndDiameter) {
    const Mesh sq = shapes::unit_square();
    EXPECT_NEAR(sq.diameter(), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(sq.scaled(3.0).diameter(), 3 * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(shapes::hexagon().segment(2).length, 2.26, 1e-14);
}

TEST(Classify, Square) {
    const Mesh sq = shapes::unit_square();
    EXPECT_EQ(classify_pair(sq, 1, 1).tag, PairTag::Coincident);
    EXPECT_EQ(classify_pair(sq, 0, 2).tag, PairTag::Disjoint);
    const SegmentPairClass a = classify_pair(sq, 0, 1);
    EXPECT_EQ(a.tag, PairTag::Adjacent);
    EXPECT_EQ(a.vertex_m, NodeAt::B);
    EXPECT_EQ(a.vertex_n, NodeAt::A);
    const SegmentPairClass w = classify_pair(sq, 0, 3);
    EXPECT_EQ(w.tag, PairTag::Adjacent);
    EXPECT_EQ(w.vertex_m, NodeAt::A);
    EXPECT_EQ(w.vertex_n, NodeAt::B);
    EXPECT_THROW(classify_pair(sq, 0, 4), ArgumentError);
}

TEST(Classify, TriangleIsAllAdjacent) {
    const Mesh t = Mesh::from_nodes({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)});
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
            EXPECT_EQ(classify_pair(t, m, n).tag, m == n ? PairTag::Coincident : PairTag::Adjacent);
}

TEST(Classify, AnglesOfRegularPolygons) {
    const Mesh sq = shapes::unit_square();
    EXPECT_NEAR(adjacent_angle(sq, 0, 1), kPi / 2, 1e-14);
    EXPECT_NEAR(adjacent_angle(sq, 1, 0), kPi / 2, 1e-14);
    const Mesh hex = shapes::hexagon();
    for (int m = 0; m < 6; ++m) EXPECT_NEAR(adjacent_angle(hex, m, (m + 1) % 6), 2 * kPi / 3, 1e-13);
    EXPECT_THROW(adjacent_angle(sq, 0, 2), ArgumentError);
}

TEST(MeshFile, ParsesWithComments) {
    const Mesh m = load_mesh_string("# square\nhelmbem-mesh 1\nnodes 4  # four\n0 0\n1 0\n\n1 1\n0 1\n");
    EXPECT_EQ(m.size(), 4);
    EXPECT_EQ(m.node(2), Vec2(1, 1));
}

TEST(MeshFile, ErrorsCarryLineNumbers) {
    auto line_of = [](const std::string& text) {
        try {
            load_mesh_string(text);
        } catch (const ParseError& e) {
            return e.line;
        }
        return -1;
    };
    EXPECT_EQ(line_of("helmbem-mesh 2\n"), 1);
    EXPECT_EQ(line_of("helmbem-mesh 1\nnodes x\n"), 2);
    EXPECT_EQ(line_of("helmbem-mesh 1\nnodes 3\n0 0\n1 zero\n"), 4);
    EXPECT_EQ(line_of("helmbem-mesh 1\nnodes 3\n0 0\n1 0\n"), 4);
    EXPECT_EQ(line_of("helmbem-mesh 1\nnodes 3\n0 0\n1 0\n0 1\n2 2\n"), 6);
    EXPECT_EQ(line_of("helmbem-mesh 1\nnodes 3\n0 0 0\n"), 3);
    EXPECT_THROW(load_mesh_file("/nonexistent/mesh"), MeshError);
}

TEST(MeshFile, ShippedMeshes) {
    for (const char* name : {"square", "hexagon", "octagon"}) {
        const Mesh m = load_mesh_file(std::string(HELMBEM_DATA) + "/" + name + ".mesh");
        EXPECT_FALSE(m.orientation_corrected()) << name;
    }
}
