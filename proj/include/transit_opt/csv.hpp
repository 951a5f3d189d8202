#ifndef TRANSIT_OPT_CSV_HPP
#define TRANSIT_OPT_CSV_HPP

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace topt::csv {

// Splits one CSV line; handles double-quoted fields and embedded commas.
std::vector<std::string> split_line(const std::string& line);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by name, -1 if absent.
    int column(const std::string& name) const;
    // Field by column index, empty string if the row is short.
    static const std::string& field(const std::vector<std::string>& row, int idx);
};

// Reads a whole CSV file (header row required). Strips BOM and CR.
// Throws topt::DataError if the file cannot be opened.
Table read_file(const std::filesystem::path& path);

}  // namespace topt::csv

#endif
