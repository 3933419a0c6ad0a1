#pragma once

#include <string>
#include <vector>

#include "randapprox/rational.hpp"

namespace randapprox {

// Deterministic CSV assembly: plain comma separation, LF line endings, no
// quoting (all cells are numeric strings here). Exact rational quantities
// are emitted as numerator/denominator pairs plus a 12-digit decimal.
class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header);

    void row(const std::vector<std::string>& cells);
    const std::string& body() const { return body_; }

private:
    std::size_t columns_;
    std::string body_;
};

// The standard exact-column triplet for one rational value.
std::vector<std::string> rat_cells(const Rat& r);

}  // namespace randapprox
