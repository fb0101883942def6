#pragma once

#include <string>
#include <vector>

#include "fdim/geometry.hpp"

namespace fdm {

struct SurfaceEntry {
  std::string name;
  std::string family;
  std::string description;
  RuledChart chart;
  int expected_rank = 0;
  int expected_fourier_dim = 0;
  // Controls are deliberately outside the constant-rank class.
  bool control = false;
  // Default density: per-axis bumps with these radii as fractions of the half-width.
  double density_inner = 0.5;
  double density_outer = 0.75;
};

// Built-in surfaces with their default domains.
std::vector<SurfaceEntry> catalog();
SurfaceEntry find_surface(const std::string& name);

std::vector<std::string> family_names();
// Family chart on user-chosen domains.
RuledChart make_family(const std::string& family, const Box& u_domain, const Box& v_domain);

// JSON catalog: {"schema":"1","surfaces":[{"name","family","expected_rank",
// "expected_fourier_dim","u_domain":[[lo,hi],...],"v_domain":[[lo,hi],...],"description",
// "density_inner","density_outer","control"}]}
std::vector<SurfaceEntry> parse_catalog(const std::string& json_text);
std::vector<SurfaceEntry> load_catalog(const std::string& path);

}  // namespace fdm
