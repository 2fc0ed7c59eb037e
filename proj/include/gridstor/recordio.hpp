#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gridstor/policy.hpp"

namespace gridstor {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

// Column order: time,p_delta_w,p_storage_w,e_storage_wh,e_grid_wh,soc, then
// the state keys of the first record in sorted order. Every record must
// carry the same state keys. Timestamps are ISO-8601 UTC. Numbers round-trip
// exactly through the matching reader.
void write_records_csv(std::ostream& out, const std::vector<StepRecord>& records);
std::vector<StepRecord> read_records_csv(std::istream& in);

// One JSON object per line with the same fields, state keys inlined.
void write_records_jsonl(std::ostream& out, const std::vector<StepRecord>& records);

void write_records_file(const std::string& path, const std::string& format,
                        const std::vector<StepRecord>& records);

}  // namespace gridstor
