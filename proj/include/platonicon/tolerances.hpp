#pragma once

// Global tolerance table. All lengths are in circumradius units.
namespace platonicon::tol {

inline constexpr double kCoord = 1e-12;       // vertex placement, face regularity
inline constexpr double kAngle = 1e-9;        // cone law, generator angles
inline constexpr double kSurface = 1e-9;      // membership band for classify_point
inline constexpr double kTangent = 1e-8;      // tangent-plane coincidence, candidate tests
inline constexpr double kTriplePoint = 1e-7;  // concurrency of pentagon ridges
inline constexpr double kPose = 1e-6;         // rolling closure, height
inline constexpr double kRidgeChord = 1e-10;  // adaptive ridge sampling sagitta

}  // namespace platonicon::tol
