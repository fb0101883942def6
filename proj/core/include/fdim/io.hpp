#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fdim/analysis.hpp"
#include "fdim/oscillatory.hpp"

namespace fdm::io {

// Round-trip decimal representation.
std::string fmt(double x);

struct DecayRow {
  double rho = 0.0;
  Vec direction;
  std::complex<double> value;
  double error_estimate = 0.0;
};

std::string decay_csv(const std::vector<DecayRow>& rows);
std::string decay_json(const std::string& surface, const std::vector<DecayRow>& rows,
                       const std::vector<DirectionFit>& fits, std::optional<double> runtime_ms);

std::string stationary_csv(const AsymptoticScan& scan);
std::string stationary_json(const std::string& label, const AsymptoticScan& scan,
                            std::optional<double> runtime_ms);

std::string certificate_csv(const DimensionCertificate& cert);
std::string certificate_json(const DimensionCertificate& cert, std::optional<double> runtime_ms);

std::string curvature_csv(const std::vector<ShapeReport>& rows, const std::vector<Vec>& points);
std::string curvature_json(const std::string& surface, const std::vector<ShapeReport>& rows,
                           const std::vector<Vec>& points, std::optional<double> runtime_ms);

std::string product_json(const ProductRuleReport& rep, std::optional<double> runtime_ms);

std::string surfaces_csv(const std::vector<SurfaceEntry>& entries);
std::string surfaces_json(const std::vector<SurfaceEntry>& entries);

}  // namespace fdm::io
