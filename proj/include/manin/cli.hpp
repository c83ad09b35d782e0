#pragma once
// Command-line front end: measured-valuation datasets, their verification,
// the self test and the subcommand dispatcher.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "manin/ext_rational.hpp"

namespace manin {

struct MeasuredRecord {
    std::string label;
    long N = 1;
    int k = 2;
    long p = 2;
    int valL = 0;
    ExtRational measured;
    std::optional<std::string> cusp;  // "a/L", kept for round trips

    friend bool operator==(const MeasuredRecord&, const MeasuredRecord&) = default;
};

// One JSON object per line; valL may be replaced by "cusp": "a/L". Throws std::invalid_argument.
MeasuredRecord parse_record(const std::string& line);
std::string serialize_record(const MeasuredRecord& r);

struct RecordResult {
    MeasuredRecord record;
    ExtRational bound;
    bool pass = false;
    bool sharp = false;
};

struct GroupResult {
    std::string label;
    long p;
    int valL;
    int size;
    ExtRational min;
    bool consistent;  // every cusp in the group has the same measured value
    bool sharp;
};

struct DatasetReport {
    std::vector<RecordResult> results;
    std::vector<GroupResult> groups;  // only groups with two or more cusps
    std::vector<std::string> errors;  // malformed lines
    int pass = 0;
    int sharp = 0;
    int fail = 0;

    bool verified() const;
};

DatasetReport verify_records(const std::vector<MeasuredRecord>& recs);
// Reads JSONL files; unreadable files and malformed lines go to errors.
DatasetReport verify_files(const std::vector<std::string>& paths);

// Reference copies of the bundled tables (1: p = 2, 2: odd p).
const std::vector<MeasuredRecord>& bundled_table(int which);
std::string bundled_table_path(int which);

struct SelftestLine {
    std::string name;
    bool ok;
    std::string detail;
};
std::vector<SelftestLine> run_selftest(bool quick, const std::string& data_dir);

// Exit codes: 0 ok, 1 verification failure, 2 input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace manin
