#include <gtest/gtest.h>

#include <algorithm>

#include "fdim/catalog.hpp"
#include "fdim/errors.hpp"

using namespace fdm;

TEST(Catalog, BuiltInEntriesAreConsistent) {
  const auto entries = catalog();
  ASSERT_GE(entries.size(), 9u);
  for (const SurfaceEntry& e : entries) {
    EXPECT_EQ(e.chart.domain().dim(), e.chart.ambient_dim - 1) << e.name;
    EXPECT_LE(e.expected_rank, e.chart.ambient_dim - 1);
    EXPECT_GT(e.density_inner, 0.0);
    EXPECT_LT(e.density_inner, e.density_outer);
    EXPECT_LE(e.density_outer, 1.0);
    if (!e.control) EXPECT_EQ(e.expected_fourier_dim, e.expected_rank) << e.name;
  }
  EXPECT_EQ(find_surface("helix_tangent").expected_rank, 1);
  EXPECT_THROW(find_surface("no_such_surface"), ConfigError);
}

TEST(Catalog, FamiliesCheckDomainShape) {
  const auto names = family_names();
  EXPECT_NE(std::find(names.begin(), names.end(), "moment_curve_tangent"), names.end());
  EXPECT_THROW(make_family("helix_tangent", Box({{0, 1}, {0, 1}}), Box({{1, 2}})), ConfigError);
  EXPECT_THROW(make_family("klein_bottle", Box(), Box()), ConfigError);
}

TEST(Catalog, ParsesJsonWithOverrides) {
  const auto entries = load_catalog(FDIM_DATA_DIR "/catalog.json");
  ASSERT_EQ(entries.size(), 4u);
  EXPECT_EQ(entries[0].name, "wide_cylinder");
  EXPECT_DOUBLE_EQ(entries[0].chart.v_domain.axes[0].hi, 1.0);
  EXPECT_DOUBLE_EQ(entries[1].density_inner, 0.4);
  // Built-in names without domains keep the built-in density.
  EXPECT_DOUBLE_EQ(entries[2].density_inner, find_surface("sphere_patch").density_inner);
  EXPECT_TRUE(entries[3].control);
}

TEST(Catalog, RejectsMalformedJson) {
  EXPECT_THROW(parse_catalog("{"), ConfigError);
  EXPECT_THROW(parse_catalog(R"({"schema":"2","surfaces":[]})"), ConfigError);
  EXPECT_THROW(parse_catalog(R"({"schema":"1","surfaces":[{"name":"cylinder"}]})"), ConfigError);
  EXPECT_THROW(parse_catalog(R"({"schema":"1","surfaces":[{"name":"x","family":"cylinder",
      "expected_rank":1,"expected_fourier_dim":1,"u_domain":[[1,0]],"v_domain":[[0,1]]}]})"),
               ConfigError);
  EXPECT_THROW(parse_catalog(R"({"schema":"1","surfaces":[{"name":"cylinder","expected_rank":1,
      "expected_fourier_dim":1,"density_inner":0.8,"density_outer":0.5}]})"),
               ConfigError);
  EXPECT_THROW(load_catalog("/nonexistent/catalog.json"), ConfigError);
}
