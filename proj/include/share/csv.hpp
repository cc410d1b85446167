#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "share/baselines.hpp"
#include "share/config.hpp"
#include "share/eval.hpp"
#include "share/share.hpp"

namespace share::csv {

/// Build identifier stamped into CSV headers.
std::string build_id();

/// `# `-prefixed comment block: the canonical config echo plus build id
/// and any extra lines (bank summary, aggregation notes).
std::string comment_block(const config::RunConfig& cfg, const std::vector<std::string>& extra = {});

/// `%.12g` with nan/inf spelled out; used for every CSV number.
std::string number(double x);

void write_metrics(std::ostream& os, const std::vector<eval::TrialRecord>& records);
void write_spectrum(std::ostream& os, const Spectrum1D<double>& spec);
void write_music_spectrum(std::ostream& os, const MusicSpectrum2D<double>& spec);
void write_flops(std::ostream& os, const std::vector<eval::FlopEstimate>& flops);
void write_estimates(std::ostream& os, const std::string& algorithm, const EstimateSet<double>& est, bool header);

/// Writes `body` after the comment block to `path` (LF endings, overwrite).
void write_file(const std::string& path, const std::string& comments, const std::string& body);

/// Strips `# ` from a comment block and returns the config lines it echoes.
std::string extract_echoed_config(const std::string& csv_text);

}  // namespace share::csv
