#include "mscale/series_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "mscale/error.hpp"

namespace mscale {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) throw NumericalError("format_double failed");
  return std::string(buffer, ptr);
}

PathSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open series file '" + path.string() + "'");
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto field = trim(line);
    if (field.empty()) continue;
    if (const auto comma = field.find(','); comma != std::string_view::npos) field = field.substr(0, comma);
    double v = 0.0;
    if (!parse_double(field, v)) {
      if (values.empty() && line_no == 1) continue;  // header
      throw IoError("series file '" + path.string() + "' line " + std::to_string(line_no) + ": not a number");
    }
    values.push_back(v);
  }
  return make_series(std::move(values));
}

void write_series_csv(const std::filesystem::path& path, std::span<const double> values, std::string_view header) {
  std::string out;
  out.reserve(values.size() * 24);
  if (!header.empty()) {
    out.append(header);
    out.push_back('\n');
  }
  for (double v : values) {
    out += format_double(v);
    out.push_back('\n');
  }
  write_file_atomic(path, out);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "': " + ec.message());
}

}  // namespace mscale
