#pragma once

#include "dcl/capacity.hpp"
#include "dcl/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcl {

/// Failure to write an output artifact; maps to exit code 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string text() const;
};

/// Two whitespace-separated columns, one point per line.
std::string plot_data(const std::vector<double>& x, const std::vector<double>& y, const std::string& comment);

/// Number rounded to the 12 significant digits used in CSV output.
Json number(double x);

Json to_json(const TailExtrapolation& t);
Json to_json(const CapacityEstimate& e);
Json to_json(const SweepResult& s);
Json to_json(const VerdictReport& r);

/// Rows mesh_level, h, neighborhood_index, epsilon, value, extrapolated, verdict.
CsvTable capacity_table(const std::vector<SweepLevel>& levels, const std::string& verdict);

/// Rows scenario, operation, kind, name, value, detail.
CsvTable verdict_table(const std::vector<VerdictReport>& reports);

}  // namespace dcl
