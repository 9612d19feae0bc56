#include "plsgeom/io.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace plsgeom {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::InvalidArgument, "cannot open output file " + path);
  auto put_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) f << ',';
      f << csv_escape(row[i]);
    }
    f << '\n';
  };
  if (!header.empty()) put_row(header);
  for (const auto& row : rows) put_row(row);
}

namespace {

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> vals;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) {
    // also treat newlines inside a token as separators (file form)
    std::stringstream ts(token);
    std::string piece;
    while (ts >> piece) {
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(piece, &pos);
      } catch (const std::exception&) {
        fail(ErrorKind::InvalidArgument, "cannot parse number '" + piece + "'");
      }
      if (pos != piece.size())
        fail(ErrorKind::InvalidArgument, "cannot parse number '" + piece + "'");
      vals.push_back(v);
    }
  }
  return vals;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

VectorXd parse_vector_arg(const std::string& arg) {
  std::string text = std::filesystem::exists(arg) ? slurp(arg) : arg;
  std::vector<double> vals = parse_numbers(text);
  if (vals.empty())
    fail(ErrorKind::InvalidArgument, "empty vector argument '" + arg + "'");
  VectorXd v(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) v(i) = vals[i];
  return v;
}

MatrixXd parse_matrix_arg(const std::string& arg) {
  if (!std::filesystem::exists(arg))
    fail(ErrorKind::InvalidArgument, "matrix file not found: " + arg);
  std::ifstream f(arg, std::ios::binary);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(parse_numbers(line));
    if (rows.back().size() != rows.front().size())
      fail(ErrorKind::InvalidArgument, "ragged matrix rows in " + arg);
  }
  if (rows.empty()) fail(ErrorKind::InvalidArgument, "empty matrix file " + arg);
  MatrixXd M(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  return M;
}

std::pair<int, int> parse_range(const std::string& arg) {
  auto pos = arg.find("..");
  try {
    if (pos == std::string::npos) {
      int v = std::stoi(arg);
      return {v, v};
    }
    int a = std::stoi(arg.substr(0, pos));
    int b = std::stoi(arg.substr(pos + 2));
    if (a > b) fail(ErrorKind::InvalidArgument, "range is empty: " + arg);
    return {a, b};
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidArgument, "cannot parse range '" + arg + "'");
  }
}

IndexSubset parse_subset_arg(const std::string& arg, int m) {
  std::vector<double> vals = parse_numbers(arg);
  std::vector<int> idx;
  for (double v : vals) {
    int i = static_cast<int>(v);
    if (v != i || i < 1 || i > m)
      fail(ErrorKind::InvalidArgument,
           "subset entries must be integers in 1.." + std::to_string(m));
    idx.push_back(i - 1);
  }
  return IndexSubset(idx, m);
}

void write_manifest(const std::string& path, const std::string& command,
                    const std::map<std::string, std::string>& inputs,
                    std::optional<std::uint64_t> seed) {
  nlohmann::json j;
  j["command"] = command;
  j["inputs"] = inputs;
  if (seed) j["seed"] = *seed;
  j["tool_version"] = kToolVersion;
  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  j["timestamp"] = buf;
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::InvalidArgument, "cannot open manifest " + path);
  f << j.dump(2) << '\n';
}

}  // namespace plsgeom
