#pragma once

#include <filesystem>
#include <string>

#include "pagecurve/operators.hpp"

namespace pagecurve {

// Matrix file format: JSON object {"dim": n, "re": [[...]], "im": [[...]]},
// row-major, numbers as decimal floats. Written files additionally carry a
// "basis" string documenting the basis ordering convention.
ComplexMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m,
                 const std::string& basis_note);

} // namespace pagecurve
