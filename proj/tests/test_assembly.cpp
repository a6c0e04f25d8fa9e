#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "stbem/assembly.h"
#include "stbem/material.h"
#include "stbem/mesh.h"
#include "stbem/spaces.h"

namespace {

using stbem::boundary_part;

const stbem::material kMat{2.0, 1.0, 1.5};

stbem::boundary_mesh unit_square(std::size_t n_per_side,
                                 const std::vector<boundary_part>& parts) {
  return stbem::build_polygon_mesh(
      {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}, n_per_side,
      parts);
}

const std::vector<boundary_part> kContactBL = {
    boundary_part::contact_unilateral, boundary_part::neumann,
    boundary_part::neumann, boundary_part::contact_unilateral};

const std::vector<boundary_part> kAllNeumann = {
    boundary_part::neumann, boundary_part::neumann, boundary_part::neumann,
    boundary_part::neumann};

double rel_block_diff(const std::vector<Eigen::MatrixXd>& a,
                      const std::vector<Eigen::MatrixXd>& b) {
  REQUIRE(a.size() == b.size());
  double scale = 0.0, err = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    scale = std::max(scale, a[n].cwiseAbs().maxCoeff());
    err = std::max(err, (a[n] - b[n]).cwiseAbs().maxCoeff());
  }
  return err / std::max(scale, 1e-300);
}

double exact_block_diff(const std::vector<Eigen::MatrixXd>& a,
                        const std::vector<Eigen::MatrixXd>& b) {
  double err = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    err = std::max(err, (a[n] - b[n]).cwiseAbs().maxCoeff());
  }
  return err;
}

}  // namespace

TEST_SUITE("assembly") {
  TEST_CASE("staged assembly matches the per-lag reference") {
    const auto mesh = unit_square(2, kContactBL);
    const auto bases = stbem::build_space_bases(mesh);
    const stbem::time_grid grid(0.8, 4);

    const auto staged =
        stbem::assemble_operator_blocks(mesh, bases, kMat, grid);
    const auto reference =
        stbem::assemble_operator_blocks_reference(mesh, bases, kMat, grid);

    CHECK(rel_block_diff(staged.V, reference.V) < 1e-12);
    CHECK(rel_block_diff(staged.K, reference.K) < 1e-12);
    CHECK(rel_block_diff(staged.W, reference.W) < 1e-12);
  }

  TEST_CASE("thread count does not change the result") {
    const auto mesh = unit_square(2, kContactBL);
    const auto bases = stbem::build_space_bases(mesh);
    const stbem::time_grid grid(0.6, 3);

    stbem::assembly_config one, four;
    one.threads = 1;
    four.threads = 4;
    const auto a = stbem::assemble_operator_blocks(mesh, bases, kMat, grid,
                                                   one);
    const auto b = stbem::assemble_operator_blocks(mesh, bases, kMat, grid,
                                                   four);
    CHECK(exact_block_diff(a.V, b.V) == 0.0);
    CHECK(exact_block_diff(a.K, b.K) == 0.0);
    CHECK(exact_block_diff(a.W, b.W) == 0.0);
  }

  TEST_CASE("operator blocks carry the continuous symmetries") {
    const auto mesh = unit_square(2, kContactBL);
    const auto bases = stbem::build_space_bases(mesh);
    const stbem::time_grid grid(0.4, 2);

    // The displacement kernel is symmetric and even in the difference
    // vector, the double-traction parts combination likewise, so V and W
    // blocks are symmetric up to quadrature accuracy.  The separated
    // rule is not swap-symmetric, so the defect tracks the wavefront
    // quadrature error (order^-3 in the smooth-cell order) rather than
    // rounding; refining the rule must shrink it.
    auto max_asym = [&](const stbem::assembly_config& cfg) {
      const auto blocks =
          stbem::assemble_operator_blocks(mesh, bases, kMat, grid, cfg);
      double worst = 0.0;
      for (std::size_t n = 0; n < grid.steps; ++n) {
        const double vs = blocks.V[n].cwiseAbs().maxCoeff();
        worst = std::max(
            worst,
            (blocks.V[n] - blocks.V[n].transpose()).cwiseAbs().maxCoeff() /
                std::max(vs, 1e-12));
        const double wsc = blocks.W[n].cwiseAbs().maxCoeff();
        worst = std::max(
            worst,
            (blocks.W[n] - blocks.W[n].transpose()).cwiseAbs().maxCoeff() /
                std::max(wsc, 1e-12));
      }
      return worst;
    };
    stbem::assembly_config production, fine;
    fine.quad.gauss_order = 32;
    const double asym16 = max_asym(production);
    const double asym32 = max_asym(fine);
    CHECK(asym16 < 5e-5);
    CHECK(asym32 < 0.5 * asym16);

    // The lag-0 single-layer block of the sign convention used in the
    // marching system is negative definite (its negative is the energy
    // operator of the first step).
    const auto blocks =
        stbem::assemble_operator_blocks(mesh, bases, kMat, grid);
    const Eigen::MatrixXd vsym =
        -0.5 * (blocks.V[0] + blocks.V[0].transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(vsym);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }

  TEST_CASE("wave-distant element pairs produce exactly zero entries") {
    const auto mesh = unit_square(2, kAllNeumann);
    const auto bases = stbem::build_space_bases(mesh);
    // cp (steps) dt = 0.4 < 1.0, the gap between bottom and top side.
    const stbem::time_grid grid(0.2, 4);
    const auto blocks =
        stbem::assemble_operator_blocks(mesh, bases, kMat, grid);

    // Elements 0, 1 are the bottom side, 4, 5 the top side.
    for (std::size_t n = 0; n < grid.steps; ++n) {
      for (std::size_t eb : {0u, 1u}) {
        for (std::size_t et : {4u, 5u}) {
          for (int ci = 0; ci < 2; ++ci) {
            for (int cj = 0; cj < 2; ++cj) {
              for (std::size_t a = 0; a < 2; ++a) {
                for (std::size_t b = 0; b < 2; ++b) {
                  CHECK(blocks.V[n](ci * bases.m_psi + 2 * eb + a,
                                    cj * bases.m_psi + 2 * et + b) == 0.0);
                }
              }
            }
          }
        }
      }
    }
  }

  TEST_CASE("mass pairing is exact for the linear shape products") {
    const auto mesh = unit_square(2, kAllNeumann);
    const auto bases = stbem::build_space_bases(mesh);
    const auto mass = stbem::assemble_mass_psi_u(mesh, bases);
    REQUIRE(mass.rows() == 2 * 16);
    REQUIRE(mass.cols() == 2 * 8);

    const double h = 0.5;
    std::vector<stbem::local_shape> ps, us;
    for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
      stbem::psi_local_shapes(bases, mesh, e, ps);
      stbem::u_local_shapes(bases, mesh, e, us);
      REQUIRE(ps.size() == 2);
      REQUIRE(us.size() == 2);
      // Products of the two linear shapes over one element integrate to
      // h/3 (matching ends) and h/6 (opposite ends).
      for (const auto& a : ps) {
        for (const auto& b : us) {
          const bool match = (a.val_a == b.val_a);
          const double expect = match ? h / 3.0 : h / 6.0;
          for (int c = 0; c < 2; ++c) {
            CHECK(mass(c * bases.m_psi + a.dof, c * bases.m_u + b.dof) ==
                  doctest::Approx(expect).epsilon(1e-12));
          }
        }
      }
    }

    // The u hats form a partition of unity on a closed Neumann curve, so
    // each psi row sums to the integral of its shape, h/2.
    for (std::size_t row = 0; row < bases.m_psi; ++row) {
      CHECK(mass.row(row).segment(0, bases.m_u).sum() ==
            doctest::Approx(h / 2.0).epsilon(1e-13));
      CHECK(mass.row(bases.m_psi + row).segment(0, bases.m_u).sum() == 0.0);
    }
  }

  TEST_CASE("contact pairing resolves hats into normal and tangential moments") {
    const auto mesh = unit_square(2, kContactBL);
    const auto bases = stbem::build_space_bases(mesh);
    REQUIRE(bases.m_lambda == 4);
    const auto pairing = stbem::assemble_contact_pairing(mesh, bases, false);
    REQUIRE(pairing.rows() == 2 * 4);
    REQUIRE(pairing.cols() == 2 * bases.m_u);

    // Applied to the coefficients of a constant field v, row ld gives
    // -n(e) . v * h and row m_lambda + ld gives tau(e) . v * h.
    for (int c = 0; c < 2; ++c) {
      Eigen::VectorXd constant = Eigen::VectorXd::Zero(2 * bases.m_u);
      constant.segment(c * bases.m_u, bases.m_u).setOnes();
      const Eigen::VectorXd moments = pairing * constant;
      for (std::size_t ld = 0; ld < bases.m_lambda; ++ld) {
        const std::size_t e = bases.lambda_elem[ld];
        const double h = mesh.length[e];
        CHECK(moments(ld) ==
              doctest::Approx(-mesh.normal[e][c] * h).epsilon(1e-13));
        CHECK(moments(bases.m_lambda + ld) ==
              doctest::Approx(mesh.tangent[e][c] * h).epsilon(1e-13));
      }
    }

    // Hats with no support on a multiplier element contribute nothing.
    const std::size_t far_node = 4;  // top-right corner of the square
    REQUIRE(bases.u_dof_of_node[far_node] != stbem::kNoDof);
    const std::size_t far_dof = bases.u_dof_of_node[far_node];
    for (std::size_t row = 0; row < 2 * bases.m_lambda; ++row) {
      CHECK(pairing(row, far_dof) == 0.0);
      CHECK(pairing(row, bases.m_u + far_dof) == 0.0);
    }
  }

  TEST_CASE("load moments average the traction over each step") {
    const auto mesh = unit_square(2, kAllNeumann);
    const auto bases = stbem::build_space_bases(mesh);
    const stbem::time_grid grid(1.0, 4);
    const double alpha = 0.7, beta = -0.3;
    const auto moments = stbem::assemble_load_moments(
        mesh, bases, grid,
        [&](std::size_t, double, double, double t, double out[2]) {
          out[0] = alpha * t;  // linear in time, constant in space
          out[1] = beta;
        });
    REQUIRE(moments.size() == grid.steps);
    // Every hat integrates to h over its two supporting elements, and
    // the step average of alpha t is alpha (t_l + dt / 2).
    const double h = 0.5;
    for (std::size_t l = 0; l < grid.steps; ++l) {
      const double avg = alpha * (grid.node(l) + 0.5 * grid.dt);
      for (std::size_t a = 0; a < bases.m_u; ++a) {
        CHECK(moments[l](a) == doctest::Approx(h * avg).epsilon(1e-13));
        CHECK(moments[l](bases.m_u + a) ==
              doctest::Approx(h * beta).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("one-body marching system has the documented block layout") {
    const auto mesh = unit_square(2, kContactBL);
    const auto bases = stbem::build_space_bases(mesh);
    const stbem::time_grid grid(0.6, 3);
    const std::size_t np = 2 * bases.m_psi, nu = 2 * bases.m_u;

    const auto nonsym = stbem::build_unilateral_system(
        mesh, bases, kMat, grid, stbem::formulation_kind::nonsymmetric);
    REQUIRE(nonsym.dim == np + nu);
    REQUIRE(nonsym.S.size() == grid.steps);

    // Trace-test rows: lag 0 carries the jump mass against psi and
    // nothing against u; later lags are entirely empty.
    CHECK((nonsym.S[0].block(np, 0, nu, np) -
           nonsym.mass_psi_u.transpose())
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(nonsym.S[0].block(np, np, nu, nu).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t n = 1; n < grid.steps; ++n) {
      CHECK(nonsym.S[n].block(np, 0, nu, np + nu).cwiseAbs().maxCoeff() ==
            0.0);
    }

    // Multiplier forces enter the trace-test rows through the transposed
    // contact pairing.
    CHECK((nonsym.coupling.block(np, 0, nu, 2 * bases.m_lambda) -
           nonsym.mtilde.transpose())
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(nonsym.coupling.block(0, 0, np, 2 * bases.m_lambda)
              .cwiseAbs()
              .maxCoeff() == 0.0);

    const auto sym = stbem::build_unilateral_system(
        mesh, bases, kMat, grid, stbem::formulation_kind::symmetric);
    // Off-diagonal coupling blocks are exact transposes of each other,
    // and the full lag-0 matrix is symmetric up to quadrature accuracy.
    CHECK((sym.S[0].block(0, np, np, nu) -
           sym.S[0].block(np, 0, nu, np).transpose())
              .cwiseAbs()
              .maxCoeff() == 0.0);
    const double scale = sym.S[0].cwiseAbs().maxCoeff();
    CHECK((sym.S[0] - sym.S[0].transpose()).cwiseAbs().maxCoeff() <
          1e-8 * scale);

    // Both formulations share the single-layer rows exactly.
    for (std::size_t n = 0; n < grid.steps; ++n) {
      CHECK((sym.S[n].block(0, 0, np, np) -
             nonsym.S[n].block(0, 0, np, np))
                .cwiseAbs()
                .maxCoeff() == 0.0);
    }

    // Right-hand side composition: load moments land in the trace rows.
    std::vector<Eigen::VectorXd> mom(grid.steps);
    for (std::size_t l = 0; l < grid.steps; ++l) {
      mom[l] = Eigen::VectorXd::LinSpaced(nu, 0.1 + double(l), 1.0);
    }
    const auto rhs = stbem::compose_rhs(nonsym, mom);
    for (std::size_t l = 0; l < grid.steps; ++l) {
      CHECK(rhs[l].segment(0, np).cwiseAbs().maxCoeff() == 0.0);
      CHECK((rhs[l].segment(np, nu) - mom[l]).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("two-body marching system has the documented block layout") {
    const std::vector<boundary_part> parts = {
        boundary_part::contact_bilateral, boundary_part::body_interface,
        boundary_part::body_interface, boundary_part::contact_bilateral};
    const auto mesh = unit_square(2, parts);
    const auto bases = stbem::build_space_bases(mesh);
    REQUIRE(bases.m_lambda == 4);
    REQUIRE(bases.m_utilde == 3);
    const stbem::time_grid grid(0.6, 3);
    const stbem::material mat2{1.8, 0.9, 1.2};
    const std::size_t np = 2 * bases.m_psi, nu = 2 * bases.m_u;
    const std::size_t nt = 2 * bases.m_utilde;

    const auto sys = stbem::build_bilateral_system(
        mesh, bases, kMat, mat2, grid,
        stbem::formulation_kind::nonsymmetric);
    REQUIRE(sys.dim == 2 * np + nu + nt);
    const std::size_t ou = sys.u_offset, op2 = sys.psi2_offset;
    const std::size_t ot = sys.utilde_offset;

    // The extension scatters each relative-trace dof onto exactly one
    // trace dof per component.
    REQUIRE(sys.extension.rows() == long(nu));
    REQUIRE(sys.extension.cols() == long(nt));
    for (std::size_t j = 0; j < nt; ++j) {
      CHECK(sys.extension.col(j).sum() == 1.0);
      CHECK(sys.extension.col(j).cwiseAbs().maxCoeff() == 1.0);
    }

    // Body-1 rows never couple to body-2 unknowns.
    for (std::size_t n = 0; n < grid.steps; ++n) {
      CHECK(sys.S[n].block(0, op2, np, np + nt).cwiseAbs().maxCoeff() ==
            0.0);
      // Body-2 relative-trace columns mirror the trace columns through
      // the extension with the opposite sign.
      CHECK((sys.S[n].block(op2, ot, np, nt) +
             sys.S[n].block(op2, ou, np, nu) * sys.extension)
                .cwiseAbs()
                .maxCoeff() == 0.0);
    }

    // Matching-trace rows at lag 0, empty afterwards.
    const Eigen::MatrixXd mt = sys.mass_psi_u.transpose();
    CHECK((sys.S[0].block(ou, 0, nu, np) - mt).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((sys.S[0].block(ou, op2, nu, np) - mt).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((sys.S[0].block(ot, op2, nt, np) +
           sys.extension.transpose() * mt)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    for (std::size_t n = 1; n < grid.steps; ++n) {
      CHECK(sys.S[n].block(ou, 0, nu, sys.dim).cwiseAbs().maxCoeff() ==
            0.0);
      CHECK(sys.S[n].block(ot, 0, nt, sys.dim).cwiseAbs().maxCoeff() ==
            0.0);
    }

    // Multiplier coupling acts on the relative trace only.
    CHECK((sys.coupling.block(ot, 0, nt, 2 * bases.m_lambda) -
           sys.mtilde.transpose())
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(sys.coupling.block(0, 0, ot, 2 * bases.m_lambda)
              .cwiseAbs()
              .maxCoeff() == 0.0);

    // Right-hand side: trace rows get the moments, relative-trace rows
    // their restriction with opposite sign.
    std::vector<Eigen::VectorXd> mom(grid.steps);
    for (std::size_t l = 0; l < grid.steps; ++l) {
      mom[l] = Eigen::VectorXd::LinSpaced(nu, -0.4, 0.9 + double(l));
    }
    const auto rhs = stbem::compose_rhs(sys, mom);
    for (std::size_t l = 0; l < grid.steps; ++l) {
      CHECK((rhs[l].segment(ou, nu) - mom[l]).cwiseAbs().maxCoeff() == 0.0);
      CHECK((rhs[l].segment(ot, nt) +
             sys.extension.transpose() * mom[l])
                .cwiseAbs()
                .maxCoeff() == 0.0);
      CHECK(rhs[l].segment(0, np).cwiseAbs().maxCoeff() == 0.0);
      CHECK(rhs[l].segment(op2, np).cwiseAbs().maxCoeff() == 0.0);
    }

    // Symmetric two-body lag-0 matrix is symmetric up to quadrature
    // accuracy.
    const auto sym = stbem::build_bilateral_system(
        mesh, bases, kMat, mat2, grid, stbem::formulation_kind::symmetric);
    const double scale = sym.S[0].cwiseAbs().maxCoeff();
    CHECK((sym.S[0] - sym.S[0].transpose()).cwiseAbs().maxCoeff() <
          1e-8 * scale);
  }
}
