#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "latentgp/design.hpp"
#include "latentgp/inference.hpp"
#include "latentgp/prediction.hpp"

namespace latentgp {

// Shortest exact decimal form of a double; re-reading reproduces the bits, so
// emitted artifacts round-trip and repeated runs are byte-identical.
std::string fmt_double(double v);

// Dataset CSV: header x1..xd,region with region in {1,2} (region 1 maps to
// the negative label).
void write_dataset_csv(const std::filesystem::path& path, const LabelledDesign& design);
LabelledDesign read_dataset_csv(const std::filesystem::path& path);

// Chain CSV: beta_0..beta_{p-1},sigma2,delta,log_posterior,accepted.
void write_chain_csv(const std::filesystem::path& path, const Chain& chain);

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<ParamDiagnostic>& diags);

// Fit record: MAP parameters plus everything needed to rebuild the model
// (basis kind, input scaling, seed).
struct FitRecord {
    GpParams map_params;
    double map_log_posterior = 0.0;
    BasisKind basis = BasisKind::Linear;
    ScaleInfo scale;
    std::uint64_t seed = 0;
    double acceptance_rate = 0.0;
};

void write_map_json(const std::filesystem::path& path, const FitRecord& record);
FitRecord read_map_json(const std::filesystem::path& path);

// Prediction grid CSV: x1..xd,latent_mean,latent_sd,p_region1.
void write_grid_csv(const std::filesystem::path& path,
                    const std::vector<PredictiveSummary>& summaries, int dim);

// Boundary CSV. 1d: root,ci_lo,ci_hi (one row). 2d:
// polyline_id,vertex_index,x1,x2.
void write_boundary_csv(const std::filesystem::path& path, const BoundaryEstimate& boundary);

// Misclassification CSV: point_index,x1..xd,label,rate.
void write_misclassification_csv(const std::filesystem::path& path, const LabelledDesign& design,
                                 const MisclassificationReport& report);

}  // namespace latentgp
