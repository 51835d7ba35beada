#pragma once

#include <string>
#include <vector>

#include "graphdm/dmap.hpp"

namespace graphdm {

/// On-disk diffusion-map model: the eigen data plus the reference
/// embeddings, which is exactly what the out-of-sample extension of a new
/// graph needs - no access to the original graphs or distance files.
struct ModelFile {
  DiffusionMapModel model;
  std::vector<std::string> ids;          // reference ids, aligned with rows
  std::vector<DensityVector> density;    // subgraph metric embeddings
  Eigen::MatrixXd s_rows;                // spectral metric S rows (m x grid)
};

void write_model(const ModelFile& mf, const std::string& path);
ModelFile read_model(const std::string& path);

/// Metric distances from a new graph to every stored reference embedding.
Eigen::VectorXd model_distances(const ModelFile& mf, const Graph& g);

}  // namespace graphdm
