#include "conekit/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace conekit {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : ncols_(header.size()) {
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out_ += ",";
        out_ += csv_escape(header[i]);
    }
    out_ += "\r\n";
}

void CsvWriter::add_row(const std::vector<std::string>& fields) {
    if (fields.size() != ncols_) throw std::invalid_argument("csv row arity mismatch");
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ += ",";
        out_ += csv_escape(fields[i]);
    }
    out_ += "\r\n";
}

std::string CsvWriter::str() const { return out_; }

namespace {
std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}
}  // namespace

std::string junit_xml(const std::string& suite_name, const std::vector<JUnitCase>& cases) {
    size_t failures = 0;
    for (const auto& c : cases)
        if (!c.passed) ++failures;
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<testsuite name=\"" + xml_escape(suite_name) +
           "\" tests=\"" + std::to_string(cases.size()) + "\" failures=\"" +
           std::to_string(failures) + "\">\n";
    for (const auto& c : cases) {
        out += "  <testcase name=\"" + xml_escape(c.name) + "\"";
        if (c.passed && c.message.empty()) {
            out += "/>\n";
        } else if (c.passed) {
            out += "><system-out>" + xml_escape(c.message) + "</system-out></testcase>\n";
        } else {
            out += "><failure message=\"" + xml_escape(c.message) + "\"/></testcase>\n";
        }
    }
    out += "</testsuite>\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace conekit
