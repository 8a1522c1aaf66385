#ifndef SPECDIST_CSV_HPP
#define SPECDIST_CSV_HPP

#include <string>

#include "specdist/linalg.hpp"

namespace specdist {

// Plain CSV, p rows x n columns, no header. Ragged rows are a parse error.
Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const Matrix& m, const std::string& path);

// Canonical float formatting for all CSV output (shortest round-trip form).
std::string format_double(double v);

}  // namespace specdist

#endif
