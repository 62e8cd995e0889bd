#ifndef CONEKRYLOV_MATRIX_MARKET_HPP
#define CONEKRYLOV_MATRIX_MARKET_HPP

#include <iosfwd>
#include <string>

#include "conekrylov/types.hpp"

namespace conekrylov {

/// Reads a Matrix Market file (coordinate or array, real or integer,
/// symmetric or general). General-format inputs are accepted only when their
/// content is symmetric to 1e-12 relative.
SymmetricMatrix read_matrix_market(const std::string& path);
SymmetricMatrix read_matrix_market(std::istream& in);

/// Writes coordinate real symmetric format, lower triangle, with 17
/// significant digits so a read-back reproduces every entry exactly.
void write_matrix_market(const SymmetricMatrix& m, const std::string& path);
void write_matrix_market(const SymmetricMatrix& m, std::ostream& out);

/// A dense vector from a Matrix Market n-by-1 file or a plain text file with
/// one value per line.
Vector read_vector(const std::string& path);
Vector read_vector(std::istream& in);

}  // namespace conekrylov

#endif
