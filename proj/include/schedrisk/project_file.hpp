#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "schedrisk/model.hpp"

namespace schedrisk {

/// Parses `point(3)`, `uniform(1, 2)`, `triangular(1, 2, 4)`, `normal(5, 1)`,
/// `pert(1, 2, 4)`, `discrete(1:0.5, 3:0.5)` or a bare number (point law).
/// Throws Syntax; parameter admissibility is checked later by validate().
Distribution parse_distribution(std::string_view text);

/// Project file text:
///
///   [activity A1]
///   name = Excavation
///   duration = triangular(1, 2, 4)
///   fixed_cost = 100
///   variable_cost_rate = 10
///
///   [risk A5]
///   name = R1
///   probability = 0.3
///   kind = duration
///   target = A1
///   impact = uniform(1, 3)
///
///   [precedence]
///   A1 = A0
///   A3 = A1, A2
///
/// or a [matrix] section instead of [precedence]:
///
///   [matrix]
///   columns = A0 A1 A2
///   A0 = 0 0 0
///   A1 = 1 0 0
///   A2 = 0 1 0
///
/// Lines starting with '#' or ';' are comments. Errors carry "source:line".
ProjectSpec parse_project_text(std::string_view text, std::string_view source = "<input>");

/// Throws IoError when the file cannot be read.
ProjectSpec parse_project(const std::filesystem::path& path);

/// Canonical text; parse_project_text(render_project(s)) == s. The matrix form
/// is kept when `matrix_columns` is set and the pairs are in matrix row order.
std::string render_project(const ProjectSpec& spec);

/// Reads a precedence matrix exported as CSV: header row of column ids (first
/// cell is a label), then one row per node whose first cell ends with the row
/// id ("R1 A5" reads as A5). Blank cells are 0.
PrecedenceMatrix parse_matrix_csv(std::string_view text, std::string_view source = "<input>");

/// Replaces the precedence of `spec` by the matrix.
void apply_matrix(ProjectSpec& spec, const PrecedenceMatrix& matrix);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace schedrisk
