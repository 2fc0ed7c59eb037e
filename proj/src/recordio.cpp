#include "gridstor/recordio.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gridstor/timeparse.hpp"

namespace gridstor {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> state_columns(const std::vector<StepRecord>& records) {
  std::vector<std::string> cols;
  if (!records.empty()) {
    for (const auto& [key, value] : records.front().state) cols.push_back(key);
  }
  return cols;  // std::map iteration is already sorted
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad number '" + text + "'");
  }
  return v;
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<StepRecord>& records) {
  const std::vector<std::string> extra = state_columns(records);
  out << "time,p_delta_w,p_storage_w,e_storage_wh,e_grid_wh,soc";
  for (const std::string& col : extra) out << ',' << col;
  out << '\n';
  for (const StepRecord& r : records) {
    out << format_iso8601_utc(r.time) << ',' << format_double(r.p_delta_w) << ','
        << format_double(r.p_storage_w) << ',' << format_double(r.e_storage_wh) << ','
        << format_double(r.e_grid_wh) << ',' << format_double(r.soc);
    for (const std::string& col : extra) {
      const auto it = r.state.find(col);
      if (it == r.state.end()) {
        throw std::invalid_argument("record state missing key '" + col + "'");
      }
      out << ',' << format_double(it->second);
    }
    out << '\n';
  }
}

std::vector<StepRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("records CSV: empty input");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  const std::vector<std::string> fixed = {"time",         "p_delta_w", "p_storage_w",
                                          "e_storage_wh", "e_grid_wh", "soc"};
  if (header.size() < fixed.size()) {
    throw std::invalid_argument("records CSV: malformed header");
  }
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (header[i] != fixed[i]) {
      throw std::invalid_argument("records CSV: expected column '" + fixed[i] + "', got '" +
                                  header[i] + "'");
    }
  }

  std::vector<StepRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw std::invalid_argument("records CSV: line " + std::to_string(lineno) + " has " +
                                  std::to_string(f.size()) + " fields, expected " +
                                  std::to_string(header.size()));
    }
    StepRecord r;
    r.time = parse_iso8601_utc(f[0]);
    r.p_delta_w = parse_double(f[1]);
    r.p_storage_w = parse_double(f[2]);
    r.e_storage_wh = parse_double(f[3]);
    r.e_grid_wh = parse_double(f[4]);
    r.soc = parse_double(f[5]);
    for (std::size_t i = fixed.size(); i < header.size(); ++i) {
      r.state[header[i]] = parse_double(f[i]);
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_records_jsonl(std::ostream& out, const std::vector<StepRecord>& records) {
  const std::vector<std::string> extra = state_columns(records);
  for (const StepRecord& r : records) {
    nlohmann::ordered_json obj;
    obj["time"] = format_iso8601_utc(r.time);
    obj["p_delta_w"] = r.p_delta_w;
    obj["p_storage_w"] = r.p_storage_w;
    obj["e_storage_wh"] = r.e_storage_wh;
    obj["e_grid_wh"] = r.e_grid_wh;
    obj["soc"] = r.soc;
    for (const std::string& col : extra) {
      const auto it = r.state.find(col);
      if (it == r.state.end()) {
        throw std::invalid_argument("record state missing key '" + col + "'");
      }
      obj[col] = it->second;
    }
    out << obj.dump() << '\n';
  }
}

void write_records_file(const std::string& path, const std::string& format,
                        const std::vector<StepRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file " + path);
  }
  if (format == "csv") {
    write_records_csv(out, records);
  } else if (format == "jsonl") {
    write_records_jsonl(out, records);
  } else {
    throw std::invalid_argument("unknown output format '" + format + "'");
  }
  if (!out) {
    throw std::runtime_error("failed writing " + path);
  }
}

}  // namespace gridstor
