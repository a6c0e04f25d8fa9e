// Reference values for spatial boundary-operator bilinear
// forms, generated by tools/oracles/hypersingular_form.py.
// Do not edit by hand; rerun the generator instead.
#pragma once

namespace stbem::testdata {

inline constexpr double kArcAVerts[4][2] = {{0.0, 0.0}, {0.4, 0.1}, {0.7, 0.45}, {0.8, 0.9}};
inline constexpr double kArcANodal[4][2] = {{0.0, 0.0}, {1.0, -0.5}, {0.3, 0.7}, {0.0, 0.0}};
inline constexpr double kArcBVerts[4][2] = {{2.0, 0.2}, {2.3, -0.1}, {2.7, 0.15}, {3.0, 0.5}};
inline constexpr double kArcBNodal[4][2] = {{0.0, 0.0}, {-0.6, 1.0}, {0.8, 0.2}, {0.0, 0.0}};
inline constexpr double kSegAVerts[2][2] = {{0.0, 0.0}, {0.3, 0.05}};
inline constexpr double kSegANodal[2][2] = {{0.7, -0.2}, {0.4, 0.9}};
inline constexpr double kSegBVerts[2][2] = {{1.1, 0.3}, {1.35, 0.55}};
inline constexpr double kSegBNodal[2][2] = {{0.5, 0.8}, {-0.3, 0.6}};
inline constexpr double kGalMaterial[3] = {2.0, 1.0, 1.5};
inline constexpr double kGalTimeSmooth = 3.2;
inline constexpr double kGalTimeFront = 0.62;
inline constexpr double kGalHypersingularSmooth = -0.12300059859805097;
inline constexpr double kGalSingleLayerSmooth = 0.0077339870373972352;
inline constexpr double kGalDoubleLayerSmooth = 0.058761161937289082;
inline constexpr double kGalSingleLayerFront = 0.00031832269576856386;

}  // namespace stbem::testdata
