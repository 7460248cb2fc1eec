#pragma once

#include <string>
#include <vector>

namespace caresim {

// Shortest round-trip decimal form; identical bytes on every platform.
std::string format_double(double value);

std::string read_text_file(const std::string& path);  // throws MissingRuns
void write_text_file(const std::string& path, const std::string& text);

std::vector<std::string> split_line(const std::string& line, char sep);

}  // namespace caresim
