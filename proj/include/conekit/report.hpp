#pragma once

#include <string>
#include <vector>

namespace conekit {

// shortest round-trip decimal form, locale independent
std::string format_double(double v);

// RFC 4180: fields containing commas, quotes or newlines are quoted
std::string csv_escape(const std::string& field);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<std::string>& fields);
    std::string str() const;

private:
    std::string out_;
    size_t ncols_;
};

struct JUnitCase {
    std::string name;
    bool passed = true;
    std::string message;
};

std::string junit_xml(const std::string& suite_name, const std::vector<JUnitCase>& cases);

void write_file(const std::string& path, const std::string& content);

}  // namespace conekit
