#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cesm/core.hpp"

namespace cesm {

/// Parses a delimited numeric matrix (comma and/or whitespace separated,
/// one row per line; blank lines and lines starting with '#' are skipped).
/// `t` is only used for error messages.
Matrix parse_matrix(const std::string& text, int t = 0);
Matrix read_matrix(const std::filesystem::path& file, int t = 0);

/// Loads an evolving sequence from a manifest.
///
/// `path` is either the manifest file or a directory holding
/// `manifest.json`:
///
///     {"snapshots": [{"t": 1, "file": "X_1.csv",
///                     "truth_file": "truth_1.csv",
///                     "point_ids_file": "ids_1.csv"}],
///      "pca_dim": 8}
///
/// Files are relative to the manifest. Each snapshot is PCA-projected when
/// `pca_dim` is present, then column-normalized. Truth labels are remapped
/// to 0..m-1 in ascending order of the stored values.
EvolvingSequence load_sequence(const std::filesystem::path& path);

/// Writes `manifest.json` plus X_t.csv / truth_t.csv / ids_t.csv into `dir`
/// at full double precision.
void dump_sequence(const EvolvingSequence& seq, const std::filesystem::path& dir);

}  // namespace cesm
