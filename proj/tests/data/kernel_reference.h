// Auto-generated by tools/oracles/kernel_reference_values.py.
// High-precision reference values for the kernel unit tests.
// Do not edit by hand; re-run the generator instead.
#pragma once

namespace stbem::testdata {

// {m, t, r, c, g[m](t,r;c)}
inline constexpr double kModeValues[][5] = {
  {0, 0.8, 0.5, 1.0, 1.6012815380508713348},
  {1, 0.8, 0.5, 1.0, 1.0469679150031884111},
  {2, 0.8, 0.5, 1.0, 0.21307453216271090827},
  {3, 0.8, 0.5, 1.0, 0.025765347584815674882},
  {4, 0.8, 0.5, 1.0, 0.0022180358662006050337},
  {5, 0.8, 0.5, 1.0, 0.00014828220579032968656},
  {0, 1.7, 0.3, 0.5, 0.62869461346193147643},
  {1, 1.7, 0.3, 0.5, 1.7018947441153729098},
  {2, 1.7, 0.3, 0.5, 1.3026236929374473113},
  {3, 1.7, 0.3, 0.5, 0.58439678284227195641},
  {4, 1.7, 0.3, 0.5, 0.185748301225285548},
  {5, 1.7, 0.3, 0.5, 0.04574255774937187322},
  {0, 0.52, 0.5, 1.0, 7.0014004201400490176},
  {1, 0.52, 0.5, 1.0, 0.28190828905414676017},
  {2, 0.52, 0.5, 1.0, 0.0037637417372993153259},
  {3, 0.52, 0.5, 1.0, 0.000030127003370584500253},
  {4, 0.52, 0.5, 1.0, 1.7220859140151866783e-7},
  {5, 0.52, 0.5, 1.0, 7.6552524635025910789e-10},
  {0, 2.0, 1.2, 2.3, 0.51793395147770172804},
  {1, 2.0, 1.2, 2.3, 2.0194173337064905758},
  {2, 2.0, 1.2, 2.3, 2.1080865533978057116},
  {3, 2.0, 1.2, 2.3, 1.2801397629562551575},
  {4, 2.0, 1.2, 2.3, 0.54921080922875801723},
  {5, 2.0, 1.2, 2.3, 0.18230383277391856155},
  {0, 0.4, 0.9, 1.0, 0.0},
  {1, 0.4, 0.9, 1.0, 0.0},
  {2, 0.4, 0.9, 1.0, 0.0},
  {3, 0.4, 0.9, 1.0, 0.0},
  {4, 0.4, 0.9, 1.0, 0.0},
  {5, 0.4, 0.9, 1.0, 0.0},
  {0, 1.0, 1.0, 1.0, 0.0},
  {1, 1.0, 1.0, 1.0, 0.0},
  {2, 1.0, 1.0, 1.0, 0.0},
  {3, 1.0, 1.0, 1.0, 0.0},
  {4, 1.0, 1.0, 1.0, 0.0},
  {5, 1.0, 1.0, 1.0, 0.0},
};

// {t, d1, d2, cp, cs, rho, G00, G01, G10, G11}
inline constexpr double kTensorValues[][10] = {
  {0.8, 0.3, -0.2, 2.0, 1.0, 1.5, 0.089768625352494327, 0.0036836742616187327, 0.0036836742616187327, 0.092838353903843271},
  {1.5, 0.45, 0.1, 1.0, 0.5, 1.0, 0.29725108588177457, -0.01286621941687344, -0.01286621941687344, 0.35228991338728873},
  {0.3, 0.25, 0.25, 2.0, 1.0, 1.0, 0.082077894876045015, 0.39069077960997427, 0.39069077960997427, 0.082077894876045015},
  {2.4, -0.3, 0.6, 3.253, 1.992, 1.0, 0.011606199336415928, 2.8902457215366811e-5, 2.8902457215366811e-5, 0.011562845650592878},
};

// {theta, d1, d2, cp, cs, rho, I00, I01, I10, I11},
// I_ij = adaptive quadrature of int_0^theta G_ij(tau) dtau
inline constexpr double kTimeQuadValues[][10] = {
  {0.9, 0.3, -0.2, 2.0, 1.0, 1.5, 0.121487023111716, -0.0193715604221829, -0.0193715604221829, 0.10534405609323},
  {1.2, 0.45, 0.1, 1.0, 0.5, 1.0, 0.507897422858092, 0.064674635097058, 0.064674635097058, 0.23123370605401},
};

}  // namespace stbem::testdata
