#include "frailtyid/csv.hpp"

#include <charconv>
#include <cstdio>

namespace fid {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), width_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void CsvWriter::row_doubles(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double x : cells) s.push_back(format_double(x));
    row(s);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& context) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw std::runtime_error("bad number '" + s + "' in " + context);
    }
    return v;
}

CsvReader::CsvReader(const std::string& path) : in_(path), path_(path) {
    if (!in_) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in_, line)) throw std::runtime_error("empty file: " + path);
    header_ = split_csv_line(line);
    line_ = 1;
}

void CsvReader::require_header(const std::vector<std::string>& expected) const {
    if (header_ != expected) {
        std::string want, got;
        for (const auto& h : expected) want += h + ",";
        for (const auto& h : header_) got += h + ",";
        throw std::runtime_error(path_ + ": unexpected header [" + got + "], expected [" + want +
                                 "]");
    }
}

bool CsvReader::next(std::vector<std::string>& cells) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (line.empty() || line == "\r") continue;
        cells = split_csv_line(line);
        if (cells.size() != header_.size()) {
            throw std::runtime_error(path_ + ":" + std::to_string(line_) +
                                     ": wrong number of fields");
        }
        return true;
    }
    return false;
}

}  // namespace fid
