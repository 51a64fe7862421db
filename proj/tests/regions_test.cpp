#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "bellsplit/bell.hpp"
#include "bellsplit/errors.hpp"
#include "bellsplit/regions.hpp"
#include "bellsplit/state.hpp"
#include "support.hpp"

using namespace bellsplit;
using testing_support::Gen;

namespace {

struct Pipeline {
  double concurrence;
  double emax;
  UEigen u;
};

// Everything through a realized splitter and the density matrix.
Pipeline through_splitter(const BalancedPoint& p, Statistics st = Statistics::bosonic, double phase = 0.0) {
  const ScatteringMatrix s = realize_gram(balanced_gram(p, phase));
  const PolarizationState state = build_rho(gammas(s, st), p.alpha_sq);
  return {concurrence_wootters(state), emax_horodecki(state.rho), u_eigen_closed(hybrid(s), p.alpha_sq, st)};
}

std::string csv_of(const ScanResult& r) {
  std::ostringstream out;
  write_scan_csv(out, r);
  return out.str();
}

}  // namespace

TEST(Boundaries, EndpointsAndOrdering) {
  EXPECT_EQ(f_boundary(0.0), 0.0);
  EXPECT_DOUBLE_EQ(f_boundary(1.0), 0.25);
  EXPECT_NEAR(g_boundary(0.0), 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(g_boundary(1.0), 0.25);
  for (int i = 0; i <= 100; ++i) {
    const double a = i / 100.0;
    EXPECT_LE(g_boundary(a), f_boundary(a) + 1e-16) << a;
  }
  EXPECT_THROW(f_boundary(-0.1), InvalidInput);
  EXPECT_THROW(g_boundary(1.5), InvalidInput);
  EXPECT_THROW(g_boundary(NAN), InvalidInput);
}

TEST(BalancedPoint, ValidatesRanges) {
  EXPECT_THROW(balanced_point(0.5, 0.3), InvalidInput);
  EXPECT_THROW(balanced_point(0.5, -0.01), InvalidInput);
  EXPECT_THROW(balanced_point(1.2, 0.1), InvalidInput);
  EXPECT_NO_THROW(balanced_point(1.0, 0.25));
  const CMat2 g = balanced_gram(balanced_point(0.3, 0.09), 0.4);
  EXPECT_NEAR(std::abs(g(0, 1)), 0.3, 1e-15);
  EXPECT_NEAR(std::arg(g(0, 1)), 0.4, 1e-15);
  EXPECT_EQ(g(1, 0), std::conj(g(0, 1)));
}

TEST(RealizeGram, ProducesASplitterWithTheRequestedGram) {
  Gen gen(401);
  for (int k = 0; k < 200; ++k) {
    const CMat2 w = gen.unitary<2>();
    const CMat2 gram = adjoint(w) * CMat2::diagonal({gen.uniform(0.01, 0.99), gen.uniform(0.01, 0.99)}) * w;
    const ScatteringMatrix s = realize_gram(gram);
    EXPECT_LT(unitarity_defect(s.matrix()), 1e-12);
    EXPECT_LT(max_abs_diff(hybrid(s).gram, gram), 1e-12);
  }
  EXPECT_LT(max_abs_diff(hybrid(realize_gram(CMat2::diagonal({1.0, 0.0}))).gram, CMat2::diagonal({1.0, 0.0})), 1e-14);
}

TEST(Classify, UsesStrictThresholds) {
  EXPECT_EQ(classify(0.5, 2.1), Region::violating);
  EXPECT_EQ(classify(0.5, 2.0), Region::entangled_nonviolating);
  EXPECT_EQ(classify(0.0, 2.0), Region::unentangled);
  EXPECT_EQ(classify(1e-13, 1.5), Region::unentangled);
  EXPECT_EQ(to_string(Region::entangled_nonviolating), "entangled_nonviolating");
}

TEST(BalancedSlice, ConcurrenceMatchesTheGeneralPipeline) {
  Gen gen(402);
  for (int k = 0; k < 300; ++k) {
    const BalancedPoint p = balanced_point(gen.uniform(), gen.uniform(0.0, 0.25));
    const double phase = gen.uniform(-3.0, 3.0);
    EXPECT_NEAR(balanced_concurrence(p), through_splitter(p, Statistics::bosonic, phase).concurrence, 1e-8);
    EXPECT_NEAR(balanced_concurrence(p, Statistics::fermionic),
                through_splitter(p, Statistics::fermionic, phase).concurrence, 1e-8);
  }
}

TEST(BalancedSlice, EmaxMatchesTheGeneralPipeline) {
  Gen gen(403);
  for (int k = 0; k < 300; ++k) {
    const BalancedPoint p = balanced_point(gen.uniform(), gen.uniform(0.0, 0.25));
    EXPECT_NEAR(balanced_emax(p).emax, through_splitter(p).emax, 1e-8);
    EXPECT_NEAR(balanced_emax(p, Statistics::fermionic).emax, through_splitter(p, Statistics::fermionic).emax, 1e-8);
  }
}

TEST(BalancedSlice, BranchSwitchesAtF) {
  Gen gen(404);
  int checked = 0;
  for (int k = 0; k < 100; ++k) {
    const double a = gen.uniform();
    const double h = gen.uniform(0.0, 0.25);
    if (std::abs(h - f_boundary(a)) < 1e-8) continue;
    const BalancedPoint p = balanced_point(a, h);
    const UEigen u = through_splitter(p).u;
    const bool u3_wins = u.u3 >= u.u2;
    EXPECT_EQ(u3_wins, h <= f_boundary(a)) << a << " " << h;
    EXPECT_EQ(balanced_emax(p).branch, u3_wins ? Branch::u3_active : Branch::u2_active);
    ++checked;
  }
  EXPECT_GT(checked, 90);
}

TEST(BalancedSlice, EmaxIsTwoOnG) {
  for (double a : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const BalancedPoint p = balanced_point(a, g_boundary(a));
    EXPECT_NEAR(balanced_emax(p).emax, 2.0, 1e-8) << a;
    EXPECT_NEAR(through_splitter(p).emax, 2.0, 1e-8) << a;
  }
}

TEST(BalancedSlice, ViolationSignFollowsG) {
  Gen gen(405);
  for (int k = 0; k < 500; ++k) {
    const double a = gen.uniform();
    const double h = gen.uniform(0.0, 0.25);
    const double g = g_boundary(a);
    if (std::abs(h - g) < 1e-8 || (a == 1.0 && h == 0.25)) continue;
    const double e = balanced_emax(balanced_point(a, h)).emax;
    EXPECT_EQ(e > 2.0, h < g) << a << " " << h;
  }
}

TEST(BalancedSlice, ConcurrenceVanishesOnTheEdges) {
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    if (x < 1.0) EXPECT_NEAR(balanced_concurrence(balanced_point(x, 0.25)), 0.0, 1e-10) << x;
    EXPECT_NEAR(balanced_concurrence(balanced_point(0.0, 0.25 * x)), 0.0, 1e-10) << x;
  }
  EXPECT_THROW(balanced_concurrence(balanced_point(1.0, 0.25)), ZeroCoincidence);
  EXPECT_NO_THROW(balanced_concurrence(balanced_point(1.0, 0.25), Statistics::fermionic));
}

TEST(BalancedSlice, PolarizationConservingEdgeReachesTheBellState) {
  const BalancedPoint p = balanced_point(1.0, 0.0);
  EXPECT_DOUBLE_EQ(balanced_concurrence(p), 1.0);
  EXPECT_NEAR(balanced_emax(p).emax, 2.0 * std::sqrt(2.0), 1e-14);
}

TEST(NoMixing, MatchesClosedFormsAndPipeline) {
  const NoMixing bell = no_mixing_case(hybrid(realize_gram(CMat2::diagonal({0.5, 0.5}))), 1.0);
  EXPECT_NEAR(bell.concurrence, 1.0, 1e-12);
  EXPECT_NEAR(bell.emax, 2.0 * std::sqrt(2.0), 1e-12);
  const NoMixing distinguishable = no_mixing_case(hybrid(realize_gram(CMat2::diagonal({0.5, 0.5}))), 0.0);
  EXPECT_NEAR(distinguishable.concurrence, 0.0, 1e-15);
  EXPECT_NEAR(distinguishable.emax, 2.0, 1e-15);

  const ScatteringMatrix s = realize_gram(CMat2::diagonal({0.9, 0.2}));
  const NoMixing m = no_mixing_case(hybrid(s), 0.6);
  const double c = 2.0 * 0.6 * std::sqrt(0.9 * 0.2 * 0.1 * 0.8) / (0.9 + 0.2 - 2.0 * 0.9 * 0.2);
  EXPECT_NEAR(m.concurrence, c, 1e-14);
  EXPECT_NEAR(m.concurrence, concurrence_wootters(build_rho(gammas(s), 0.6)), 1e-8);
  EXPECT_NEAR(m.emax, emax(s, 0.6).emax_horodecki, 1e-8);

  EXPECT_THROW(no_mixing_case(hybrid(scattering_preset("balanced_mixing(0.3)")), 0.5), InvalidInput);
}

TEST(Scan, GridShapeAndCsvLayout) {
  ScanOptions opt;
  opt.alpha_points = 5;
  opt.hv_points = 3;
  const ScanResult r = scan(opt);
  ASSERT_EQ(r.rows.size(), 15u);
  EXPECT_EQ(r.rows[1].alpha_sq, 0.0);
  EXPECT_EQ(r.rows[1].hv_sq, 0.125);
  EXPECT_EQ(r.rows[3].alpha_sq, 0.25);
  EXPECT_EQ(r.rows.back().alpha_sq, 1.0);
  EXPECT_EQ(r.rows.back().hv_sq, 0.25);
  EXPECT_FALSE(r.rows.back().report.has_value());

  const std::string csv = csv_of(r);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "alpha_sq,hv_sq,concurrence,emax,branch,region");
  int count = 0;
  std::string last;
  while (std::getline(lines, line)) {
    ++count;
    last = line;
  }
  EXPECT_EQ(count, 15);
  EXPECT_EQ(last, "1,0.25,nan,nan,none,empty");

  opt.hv_points = 1;
  EXPECT_THROW(scan(opt), InvalidInput);
}

TEST(Scan, BoundaryCellsAreLabelled) {
  ScanOptions opt;
  opt.alpha_points = 3;
  opt.hv_points = 3;
  const ScanResult r = scan(opt);
  // (alpha_sq, hv_sq) = (0, 0) sits on both f and g.
  EXPECT_TRUE(r.rows[0].near_f);
  EXPECT_TRUE(r.rows[0].near_g);
  EXPECT_NE(csv_of(r).find("0,0,0,2,boundary,boundary"), std::string::npos);
}

TEST(Scan, ReproducesTheBalancedSliceStructure) {
  ScanOptions opt;
  opt.cross_check = true;
  const ScanResult r = scan(opt);
  ASSERT_EQ(r.rows.size(), 40000u);
  ASSERT_TRUE(r.cross_check_deviation.has_value());
  EXPECT_LT(*r.cross_check_deviation, 1e-8);
  EXPECT_EQ(r.crossings_above_f, 0u);
  bool witness = false;
  for (const ScanRow& row : r.rows) {
    if (!row.report) continue;
    const RegionReport& rep = *row.report;
    if (row.hv_sq == 0.25 || row.alpha_sq == 0.0) {
      EXPECT_NEAR(rep.concurrence, 0.0, 1e-10);
    }
    const double g = g_boundary(row.alpha_sq);
    if (std::abs(row.hv_sq - g) > 1e-8) EXPECT_EQ(rep.emax > 2.0, row.hv_sq < g);
    witness = witness || (rep.concurrence >= 0.05 && rep.emax <= 1.99);
    EXPECT_EQ(rep.region, classify(rep.concurrence, rep.emax));
  }
  EXPECT_TRUE(witness);
}

TEST(Scan, IsDeterministicAndStatisticsSensitive) {
  ScanOptions opt;
  opt.alpha_points = 40;
  opt.hv_points = 30;
  const std::string a = csv_of(scan(opt));
  EXPECT_EQ(a, csv_of(scan(opt)));
  opt.statistics = Statistics::fermionic;
  const ScanResult f = scan(opt);
  EXPECT_NE(a, csv_of(f));
  EXPECT_EQ(f.statistics, Statistics::fermionic);
  for (const ScanRow& row : f.rows) {
    EXPECT_FALSE(row.near_f);
    EXPECT_TRUE(row.report.has_value());
  }
}
