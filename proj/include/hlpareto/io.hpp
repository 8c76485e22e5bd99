#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hlpareto/oracle.hpp"
#include "hlpareto/sweep.hpp"

namespace hlpareto::io {

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

/// sample_index, t, tau_1..tau_N, u_1..u_d, ell_1..ell_N, pi_1..pi_N,
/// E_1..E_N, residual, iterations, converged, gap, bregman_bound
std::vector<std::string> front_csv_header(int dim_obj, int dim_u);

void write_front_csv(std::ostream& os, const ParetoFront& front);

/// Parses what write_front_csv wrote. Dimensions come from the header.
ParetoFront read_front_csv(std::istream& is);

/// sample_index, u_1..u_d, ell_1..ell_N
void write_cloud_csv(std::ostream& os, const SampleCloud& cloud);

/// Reads the objective columns of a cloud or front CSV.
std::vector<Vector> read_objective_columns(std::istream& is);

struct ScatterLayer {
  std::string name;
  std::vector<std::pair<double, double>> points;
  std::string color;
  bool connect = false;  ///< draw a polyline through the points (sorted by x)
  double radius = 2.5;
};

struct ScatterPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ScatterLayer> layers;
  int width = 640;
  int height = 480;
};

/// Standalone SVG document with linear axes covering every point.
std::string render_svg(const ScatterPlot& plot);

/// Projects points onto coordinates (i, j), zero-based.
std::vector<std::pair<double, double>> coordinate_pair(
    const std::vector<Vector>& points, int i, int j);

}  // namespace hlpareto::io
