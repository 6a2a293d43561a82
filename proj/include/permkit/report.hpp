#pragma once

#include <json.hpp>

#include <string>

#include "permkit/classify.hpp"
#include "permkit/divisibility.hpp"
#include "permkit/kernelcheck.hpp"
#include "permkit/matrix.hpp"
#include "permkit/sampleverify.hpp"
#include "permkit/spectra.hpp"

namespace permkit {

/// Reports are plain JSON trees; nlohmann keeps object keys sorted, so a
/// report serializes deterministically byte for byte.
using Report = nlohmann::json;

Report to_report(const Matrix& m);
Report to_report(const Diagonal& d);
Report to_report(const NecessaryReport& r);
Report to_report(const ClassificationReport& r);
Report to_report(const IndependenceReport& r);
Report to_report(const ResolventSweep& r);
Report to_report(const SeriesCertificate& r);
Report to_report(const CertifyResult& r);
Report to_report(const MetricTable& r);
Report to_report(const MomentReport& r);
Report to_report(const LaplaceEstimate& r);

/// Human-readable rendering of a full run report (the "text" format).
std::string render_text(const Report& run);

}  // namespace permkit
