#include "hlpareto/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "hlpareto/errors.hpp"

namespace hlpareto::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

namespace {

void append_indexed(std::vector<std::string>& out, const std::string& name,
                    int count) {
  for (int i = 1; i <= count; ++i) out.push_back(name + "_" + std::to_string(i));
}

void write_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

void append_vector(std::vector<std::string>& row, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(format_double(v(i)));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

int count_prefixed(const std::vector<std::string>& header, const std::string& p) {
  return static_cast<int>(std::count_if(header.begin(), header.end(), [&](const std::string& h) {
    return h.rfind(p + "_", 0) == 0 &&
           h.find_first_not_of("0123456789", p.size() + 1) == std::string::npos;
  }));
}

}  // namespace

std::vector<std::string> front_csv_header(int dim_obj, int dim_u) {
  std::vector<std::string> h = {"sample_index", "t"};
  append_indexed(h, "tau", dim_obj);
  append_indexed(h, "u", dim_u);
  append_indexed(h, "ell", dim_obj);
  append_indexed(h, "pi", dim_obj);
  append_indexed(h, "E", dim_obj);
  for (const char* s : {"residual", "iterations", "converged", "gap", "bregman_bound"})
    h.emplace_back(s);
  return h;
}

void write_front_csv(std::ostream& os, const ParetoFront& front) {
  if (front.samples.empty()) throw InvalidArgument("write_front_csv: empty front");
  const auto& first = front.samples.front();
  write_row(os, front_csv_header(static_cast<int>(first.tau.size()),
                                 static_cast<int>(first.u_star.size())));
  for (const auto& s : front.samples) {
    std::vector<std::string> row = {std::to_string(s.index), format_double(s.t)};
    append_vector(row, s.tau);
    append_vector(row, s.u_star);
    append_vector(row, s.ell);
    append_vector(row, s.pi_star);
    append_vector(row, s.E_bar);
    row.push_back(format_double(s.residual));
    row.push_back(std::to_string(s.iterations));
    row.push_back(s.converged ? "1" : "0");
    row.push_back(s.gap ? format_double(*s.gap) : "");
    row.push_back(format_double(s.bregman_bound));
    write_row(os, row);
  }
}

ParetoFront read_front_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("front CSV: missing header");
  const auto header = split(line);
  const int n = count_prefixed(header, "tau");
  const int d = count_prefixed(header, "u");
  if (header != front_csv_header(n, d))
    throw InvalidArgument("front CSV: unexpected header");

  ParetoFront front;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw InvalidArgument("front CSV: ragged row");
    std::size_t c = 0;
    auto vec = [&](int len) {
      Vector v(len);
      for (int i = 0; i < len; ++i) v(i) = parse_double(cells[c++]);
      return v;
    };
    FrontSample s;
    s.index = std::stoi(cells[c++]);
    s.t = parse_double(cells[c++]);
    s.tau = vec(n);
    s.u_star = vec(d);
    s.ell = vec(n);
    s.pi_star = vec(n);
    s.E_bar = vec(n);
    s.residual = parse_double(cells[c++]);
    s.iterations = std::stoi(cells[c++]);
    s.converged = cells[c++] == "1";
    s.status = s.converged ? SolveStatus::converged : SolveStatus::max_iterations;
    const std::string& gap = cells[c++];
    if (!gap.empty()) s.gap = parse_double(gap);
    s.bregman_bound = parse_double(cells[c++]);
    front.samples.push_back(std::move(s));
  }
  return front;
}

void write_cloud_csv(std::ostream& os, const SampleCloud& cloud) {
  if (cloud.empty()) throw InvalidArgument("write_cloud_csv: empty cloud");
  std::vector<std::string> h = {"sample_index"};
  append_indexed(h, "u", static_cast<int>(cloud.points_u.front().size()));
  append_indexed(h, "ell", static_cast<int>(cloud.points_obj.front().size()));
  write_row(os, h);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    std::vector<std::string> row = {std::to_string(i)};
    append_vector(row, cloud.points_u[i]);
    append_vector(row, cloud.points_obj[i]);
    write_row(os, row);
  }
}

std::vector<Vector> read_objective_columns(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("CSV: missing header");
  const auto header = split(line);
  std::vector<std::size_t> cols;
  for (int i = 1;; ++i) {
    auto it = std::find(header.begin(), header.end(), "ell_" + std::to_string(i));
    if (it == header.end()) break;
    cols.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  if (cols.empty()) throw InvalidArgument("CSV: no ell_ columns");
  std::vector<Vector> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    Vector v(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] >= cells.size()) throw InvalidArgument("CSV: ragged row");
      v(static_cast<Eigen::Index>(i)) = parse_double(cells[cols[i]]);
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::pair<double, double>> coordinate_pair(
    const std::vector<Vector>& points, int i, int j) {
  std::vector<std::pair<double, double>> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (i < 0 || j < 0 || i >= p.size() || j >= p.size())
      throw InvalidArgument("coordinate_pair: index out of range");
    out.emplace_back(p(i), p(j));
  }
  return out;
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string tick_label(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

}  // namespace

std::string render_svg(const ScatterPlot& plot) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const auto& layer : plot.layers)
    for (const auto& [x, y] : layer.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x); x1 = std::max(x1, x);
      y0 = std::min(y0, y); y1 = std::max(y1, y);
    }
  if (!(x0 <= x1)) { x0 = 0; x1 = 1; y0 = 0; y1 = 1; }
  auto pad = [](double& lo, double& hi) {
    const double span = hi - lo;
    const double m = span > 0 ? 0.05 * span : 0.5 * std::max(1.0, std::abs(lo));
    lo -= m;
    hi += m;
  };
  pad(x0, x1);
  pad(y0, y1);

  const double left = 70, right = 150, top = 40, bottom = 55;
  const double w = plot.width, h = plot.height;
  const double pw = w - left - right, ph = h - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << escape_xml(plot.title) << "</text>\n"
     << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    os << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(xv) << "</text>\n"
       << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 4
       << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(yv) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 12
     << "\" text-anchor=\"middle\" font-size=\"13\">" << escape_xml(plot.x_label) << "</text>\n"
     << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
     << "transform=\"rotate(-90 16 " << top + ph / 2 << ")\">" << escape_xml(plot.y_label)
     << "</text>\n";

  int legend_row = 0;
  for (const auto& layer : plot.layers) {
    os << "<g fill=\"" << layer.color << "\" stroke=\"" << layer.color << "\">\n";
    if (layer.connect && layer.points.size() > 1) {
      auto pts = layer.points;
      std::sort(pts.begin(), pts.end());
      os << "<polyline fill=\"none\" stroke-width=\"1\" points=\"";
      for (const auto& [x, y] : pts) os << sx(x) << ',' << sy(y) << ' ';
      os << "\"/>\n";
    }
    for (const auto& [x, y] : layer.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      os << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"" << layer.radius
         << "\" stroke=\"none\"/>\n";
    }
    os << "</g>\n";
    const double ly = top + 14 + 18 * legend_row++;
    os << "<circle cx=\"" << left + pw + 16 << "\" cy=\"" << ly << "\" r=\"4\" fill=\""
       << layer.color << "\"/>\n"
       << "<text x=\"" << left + pw + 26 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
       << escape_xml(layer.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace hlpareto::io
