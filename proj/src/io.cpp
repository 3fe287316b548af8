#include "loopopt/io.hpp"

#include "loopopt/error.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace loopopt {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string curve_to_json(const LoopCurve& c) {
  // Hand-written so that every coordinate keeps 17 significant digits.
  std::ostringstream os;
  os << "{\"n\": " << c.size() << ", \"points\": [";
  for (std::size_t j = 0; j < c.size(); ++j) {
    const auto p = c.point(j);
    os << (j ? ", " : "") << '[' << format_double(p.x()) << ", " << format_double(p.y()) << ']';
  }
  os << "]}\n";
  return os.str();
}

LoopCurve curve_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("curve JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
    throw ValidationError("curve JSON: expected an object with a \"points\" array");
  }
  const auto& pts = j["points"];
  GridArray a(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ValidationError("curve JSON: point " + std::to_string(i) + " is not [x, y]");
    }
    a(static_cast<Eigen::Index>(i), 0) = p[0].get<double>();
    a(static_cast<Eigen::Index>(i), 1) = p[1].get<double>();
  }
  if (j.contains("n") && (!j["n"].is_number_integer() || j["n"].get<std::size_t>() != pts.size())) {
    throw ValidationError("curve JSON: \"n\" does not match the number of points");
  }
  return LoopCurve(std::move(a));
}

std::string curve_to_csv(const LoopCurve& c) {
  const Eigen::VectorXd theta = parameter_grid(c.size());
  std::ostringstream os;
  os << "theta,x,y\n";
  for (std::size_t j = 0; j < c.size(); ++j) {
    const auto p = c.point(j);
    os << format_double(theta(static_cast<Eigen::Index>(j))) << ',' << format_double(p.x()) << ','
       << format_double(p.y()) << '\n';
  }
  return os.str();
}

LoopCurve curve_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("curve CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "theta,x,y") throw ValidationError("curve CSV: expected header \"theta,x,y\"");
  std::vector<std::pair<double, double>> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double t = 0.0, x = 0.0, y = 0.0;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf%c", &t, &x, &y, &tail) != 3) {
      throw ValidationError("curve CSV: malformed row at line " + std::to_string(lineno));
    }
    rows.emplace_back(x, y);
  }
  GridArray a(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    a(static_cast<Eigen::Index>(i), 0) = rows[i].first;
    a(static_cast<Eigen::Index>(i), 1) = rows[i].second;
  }
  return LoopCurve(std::move(a));
}

LoopCurve read_curve_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const std::string ext = path.extension().string();
  if (ext == ".json") return curve_from_json(text);
  if (ext == ".csv") return curve_from_csv(text);
  throw ValidationError("curve file must end in .json or .csv: " + path.string());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place: " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace loopopt
