#pragma once

#include <cstdint>

#include "fofx/geometry.hpp"

namespace fofx {

// Closed synthetic meshes, outward-wound, with shared (welded) vertices.

/// Subdivided icosahedron projected to the sphere: 20 * 4^s triangles.
TriangleMesh icosphere(double radius, int subdivisions, const Vec3& center = Vec3::Zero());

/// Ring in the xz-plane around the y axis (rays along z cross the tube twice).
TriangleMesh torus(double major_radius, double minor_radius, int major_segments = 96,
                   int minor_segments = 48);

/// Axis-aligned cube with each face split into segments x segments quads.
TriangleMesh cube(double half_extent, int segments = 1);

/// Cylinder with hemispherical caps, axis along y.
TriangleMesh capsule(double radius, double half_length, int segments = 64, int rings = 16);

/// Capped cylinder with its axis along x.
TriangleMesh cylinder(double radius, double half_length, int segments = 64, int length_segments = 16);

/// Icosphere with floor(fraction * F) faces removed; the removed set depends
/// only on the seed.
TriangleMesh open_sphere(double radius, int subdivisions, double fraction, std::uint64_t seed);

}  // namespace fofx
