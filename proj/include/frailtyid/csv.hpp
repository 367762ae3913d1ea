#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fid {

// Minimal strict CSV: comma separated, no quoting, fixed header checked on
// read. Numbers are written with 17 significant digits so that a written
// cohort parses back bit-identically.

std::string format_double(double x);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    void row_doubles(const std::vector<double>& cells);

private:
    std::ofstream out_;
    std::size_t width_;
};

class CsvReader {
public:
    explicit CsvReader(const std::string& path);
    const std::vector<std::string>& header() const { return header_; }
    // Throws if the file header differs from expected.
    void require_header(const std::vector<std::string>& expected) const;
    bool next(std::vector<std::string>& cells);
    std::size_t line_number() const { return line_; }

private:
    std::ifstream in_;
    std::vector<std::string> header_;
    std::size_t line_ = 0;
    std::string path_;
};

std::vector<std::string> split_csv_line(const std::string& line);
double parse_double(const std::string& s, const std::string& context);

}  // namespace fid
