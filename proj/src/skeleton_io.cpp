#include "pdmp/skeleton_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace pdmp {

namespace {

void write_row(std::ostream& out, double t, const Vector& x, const Vector& v) {
  out << format_double(t);
  for (Eigen::Index i = 0; i < x.size(); ++i) out << ',' << format_double(x[i]);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << format_double(v[i]);
  out << '\n';
}

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> fields;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find(',', start);
    if (end == std::string::npos) end = line.size();
    double value = 0.0;
    const auto res = std::from_chars(line.data() + start, line.data() + end, value);
    if (res.ec != std::errc() || res.ptr != line.data() + end) {
      throw InvalidArgument("skeleton csv: bad number '" + line.substr(start, end - start) + "'");
    }
    fields.push_back(value);
    start = end + 1;
  }
  return fields;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return {buf, res.ptr};
}

void write_skeleton_csv(std::ostream& out, const Skeleton& skeleton) {
  const Eigen::Index d = skeleton.initial.x.size();
  out << 't';
  for (Eigen::Index i = 0; i < d; ++i) out << ",x" << i;
  for (Eigen::Index i = 0; i < d; ++i) out << ",v" << i;
  out << '\n';
  write_row(out, 0.0, skeleton.initial.x, skeleton.initial.v);
  for (const auto& e : skeleton.events) write_row(out, e.t, e.x, e.v);
}

void write_skeleton_csv(const std::string& path, const Skeleton& skeleton) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  write_skeleton_csv(out, skeleton);
  if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

Skeleton read_skeleton_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("skeleton csv: missing header");
  const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 3 || columns % 2 == 0) throw InvalidArgument("skeleton csv: header must be t,x...,v...");
  const auto d = static_cast<Eigen::Index>((columns - 1) / 2);

  Skeleton sk;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = parse_row(line);
    if (f.size() != columns) throw InvalidArgument("skeleton csv: row has wrong number of fields");
    Vector x = Eigen::Map<const Vector>(f.data() + 1, d);
    Vector v = Eigen::Map<const Vector>(f.data() + 1 + d, d);
    if (first) {
      sk.initial = State(std::move(x), std::move(v));
      first = false;
    } else {
      sk.events.push_back({f[0], std::move(x), std::move(v)});
    }
  }
  if (first) throw InvalidArgument("skeleton csv: no initial-state row");
  if (sk.events.empty()) {
    sk.final_time = 0.0;
    sk.final_state = sk.initial;
  } else {
    sk.final_time = sk.events.back().t;
    sk.final_state = State(sk.events.back().x, sk.events.back().v);
  }
  return sk;
}

}  // namespace pdmp
