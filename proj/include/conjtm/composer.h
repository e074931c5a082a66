// Links machine sections into one machine.
//
// Manifest file format:
//
//   section <label> <tableFile> [overlayFile] start=<state>
//   wire <label>.NM -> <label>.<state>
//   wire <label>.NM -> HALT
//   entry <label>.<state>
//
// Paths are relative to the manifest. Composed state names are
// "<label>.<state>"; the reserved HALT marker keeps its name.

#ifndef CONJTM_COMPOSER_H_
#define CONJTM_COMPOSER_H_

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "conjtm/machine.h"
#include "conjtm/table.h"

namespace conjtm {

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Section {
  std::string label;
  RawTable table;  // overlay already applied
  std::string start;
};

struct SectionRef {
  std::string label;
  std::string state;  // empty with halt = true
  bool halt = false;
};

struct SectionManifest {
  std::vector<Section> sections;
  std::map<std::string, SectionRef> wiring;  // keyed by the section whose NM is wired
  SectionRef entry;

  const Section& section(const std::string& label) const;
};

struct ManifestSection {
  std::string label;
  std::string table_path;
  std::optional<std::string> overlay_path;
  std::string start;
};

struct ManifestFile {
  std::vector<ManifestSection> sections;
  std::map<std::string, SectionRef> wiring;
  SectionRef entry;
};

ManifestFile parse_manifest(std::string_view text);
// Reads the manifest and the tables and overlays it names.
SectionManifest load_manifest(const std::string& path);

std::string qualified_name(const std::string& label, const std::string& state);

struct ComposedMachine {
  Machine machine;
  // composed state name -> (section label, original name)
  std::map<std::string, std::pair<std::string, std::string>> provenance;
};

// Throws ManifestError for missing wiring, dangling references, or a bad
// entry, and BuildError for a section with error-severity defects.
ComposedMachine compose(const SectionManifest& manifest);

// One section on its own, NM left unresolved.
Machine section_machine(const SectionManifest& manifest, const std::string& label);

enum class Decidability { FirstHigher, SecondHigher, Equal };

struct DecidabilityComparison {
  Decidability ranking = Decidability::Equal;
  std::size_t first_states = 0;
  std::size_t second_states = 0;
  std::string report;
};

// Fewer states ranks as higher decidability.
DecidabilityComparison compare_decidability(const Machine& a, const Machine& b);

}  // namespace conjtm

#endif  // CONJTM_COMPOSER_H_
