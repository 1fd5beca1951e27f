#pragma once

#include <string>

#include "gbp/system.hpp"

namespace gbp {

/// Reads a Matrix Market coordinate file (real or integer, general) into a
/// SparseSystem. Every diagonal entry must appear in the file. Explicit
/// off-diagonal zeros are dropped.
///
/// The right-hand side comes from rhs_path: a Matrix Market array file, or a
/// JSON array when the path ends in ".json". With no rhs_path, b_i = i + 1.
SparseSystem load_matrix_market(const std::string& matrix_path,
                                const std::string& rhs_path = {});

/// Writes the system as a coordinate file with 17 significant digits, so a
/// reload reproduces the entries bit for bit. When rhs_path is nonempty the
/// right-hand side goes there as a Matrix Market array file.
void save_matrix_market(const SparseSystem& sys, const std::string& matrix_path,
                        const std::string& rhs_path = {});

/// Reads a dense vector: a Matrix Market array file, or a JSON array when
/// the path ends in ".json". Checks the length when expected_size >= 0.
Vector load_vector(const std::string& path, Index expected_size = -1);

}  // namespace gbp
