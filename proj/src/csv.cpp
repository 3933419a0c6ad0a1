#include "randapprox/csv.hpp"

namespace randapprox {

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
    if (header.empty()) throw InputError("csv needs at least one column");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) body_ += ',';
        body_ += header[i];
    }
    body_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw InputError("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) body_ += ',';
        body_ += cells[i];
    }
    body_ += '\n';
}

std::vector<std::string> rat_cells(const Rat& r) {
    return {rat_num(r).str(), rat_den(r).str(), rat_to_decimal(r)};
}

}  // namespace randapprox
