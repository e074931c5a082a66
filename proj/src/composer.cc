#include "conjtm/composer.h"

#include <filesystem>
#include <set>
#include <sstream>

namespace conjtm {
namespace {

std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

SectionRef parse_ref(const std::string& text, int line) {
  if (is_halt_marker(text)) return SectionRef{{}, {}, true};
  auto dot = text.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == text.size()) {
    throw ParseError(line, "expected <label>.<state>, got '" + text + "'");
  }
  return SectionRef{text.substr(0, dot), text.substr(dot + 1), false};
}

std::set<std::string> defined_names(const RawTable& table) {
  std::set<std::string> out;
  for (const auto& r : table.rows) out.insert(r.state);
  return out;
}

}  // namespace

const Section& SectionManifest::section(const std::string& label) const {
  for (const auto& s : sections) {
    if (s.label == label) return s;
  }
  throw ManifestError("dangling section reference '" + label + "'");
}

ManifestFile parse_manifest(std::string_view text) {
  ManifestFile file;
  bool has_entry = false;
  std::istringstream in{std::string(text)};
  int number = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    auto w = tokens(raw);
    if (w.empty()) continue;
    if (w[0] == "section") {
      if (w.size() != 4 && w.size() != 5) {
        throw ParseError(number, "section <label> <table> [overlay] start=<state>");
      }
      const std::string& last = w.back();
      if (last.rfind("start=", 0) != 0 || last.size() == 6) {
        throw ParseError(number, "section line must end with start=<state>");
      }
      ManifestSection s;
      s.label = w[1];
      s.table_path = w[2];
      if (w.size() == 5) s.overlay_path = w[3];
      s.start = last.substr(6);
      if (s.label.find('.') != std::string::npos) {
        throw ParseError(number, "section labels cannot contain '.'");
      }
      file.sections.push_back(std::move(s));
    } else if (w[0] == "wire") {
      if (w.size() != 4 || w[2] != "->") throw ParseError(number, "wire <label>.NM -> <target>");
      SectionRef from = parse_ref(w[1], number);
      if (from.halt || !is_external_marker(from.state)) {
        throw ParseError(number, "only <label>.NM can be wired");
      }
      if (!file.wiring.emplace(from.label, parse_ref(w[3], number)).second) {
        throw ParseError(number, "section '" + from.label + "' is wired twice");
      }
    } else if (w[0] == "entry") {
      if (w.size() != 2) throw ParseError(number, "entry <label>.<state>");
      file.entry = parse_ref(w[1], number);
      if (file.entry.halt) throw ParseError(number, "entry cannot be HALT");
      has_entry = true;
    } else {
      throw ParseError(number, "unknown manifest directive '" + w[0] + "'");
    }
  }
  if (!has_entry) throw ParseError(number, "manifest has no entry line");
  return file;
}

SectionManifest load_manifest(const std::string& path) {
  ManifestFile file;
  try {
    file = parse_manifest(read_file(path));
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  auto dir = std::filesystem::path(path).parent_path();
  SectionManifest m;
  for (const auto& s : file.sections) {
    RawTable table = load_table((dir / s.table_path).string());
    if (s.overlay_path) table = apply_overlay(table, load_overlay((dir / *s.overlay_path).string()));
    if (table.name.empty()) table.name = s.label;
    m.sections.push_back(Section{s.label, std::move(table), s.start});
  }
  m.wiring = std::move(file.wiring);
  m.entry = std::move(file.entry);
  return m;
}

std::string qualified_name(const std::string& label, const std::string& state) {
  return label + "." + state;
}

ComposedMachine compose(const SectionManifest& manifest) {
  std::set<std::string> labels;
  for (const auto& s : manifest.sections) {
    if (!labels.insert(s.label).second) throw ManifestError("duplicate section '" + s.label + "'");
    // Surfaces error-severity defects before linking.
    build_machine(s.table, s.start);
  }
  auto check_ref = [&](const SectionRef& ref, const std::string& what) {
    if (ref.halt) return;
    const Section& target = manifest.section(ref.label);
    if (!defined_names(target.table).count(ref.state)) {
      throw ManifestError(what + " names undefined state '" + ref.state + "' in section '" +
                          ref.label + "'");
    }
  };
  for (const auto& [from, to] : manifest.wiring) {
    manifest.section(from);
    check_ref(to, "wiring for " + from + ".NM");
  }
  check_ref(manifest.entry, "entry");

  ComposedMachine out;
  MachineBuilder builder(manifest.sections.size() == 1 ? manifest.sections[0].table.name
                                                       : std::string("composed"));
  for (const auto& s : manifest.sections) {
    for (const auto& r : s.table.rows) {
      std::string name = qualified_name(s.label, r.state);
      builder.declare(name);
      out.provenance.emplace(name, std::make_pair(s.label, r.state));
    }
  }
  for (const auto& s : manifest.sections) {
    for (const auto& r : s.table.rows) {
      std::string target;
      if (is_external_marker(r.calls)) {
        auto wire = manifest.wiring.find(s.label);
        if (wire == manifest.wiring.end()) {
          throw ManifestError("missing wiring entry for (" + s.label + ", NM)");
        }
        target = wire->second.halt ? std::string(kHaltName)
                                   : qualified_name(wire->second.label, wire->second.state);
      } else if (is_halt_marker(r.calls)) {
        target = std::string(kHaltName);
      } else {
        target = qualified_name(s.label, r.calls);
      }
      builder.add(qualified_name(s.label, r.state), r.reads, Action{r.writes, r.moves, target});
    }
  }
  out.machine = builder.build(qualified_name(manifest.entry.label, manifest.entry.state));
  return out;
}

Machine section_machine(const SectionManifest& manifest, const std::string& label) {
  const Section& s = manifest.section(label);
  return build_machine(s.table, s.start);
}

DecidabilityComparison compare_decidability(const Machine& a, const Machine& b) {
  DecidabilityComparison c;
  c.first_states = state_count(a);
  c.second_states = state_count(b);
  std::ostringstream report;
  report << a.label() << ": " << c.first_states << " states; " << b.label() << ": "
         << c.second_states << " states; ";
  if (c.first_states < c.second_states) {
    c.ranking = Decidability::FirstHigher;
    report << a.label() << " ranks higher";
  } else if (c.second_states < c.first_states) {
    c.ranking = Decidability::SecondHigher;
    report << b.label() << " ranks higher";
  } else {
    c.ranking = Decidability::Equal;
    report << "equal";
  }
  c.report = report.str();
  return c;
}

}  // namespace conjtm
