#include "speechlift/adm.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace speechlift {

namespace pt = boost::property_tree;

namespace {

constexpr const char* kRoot = "speechliftAdm";

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string track_uid(std::size_t channel) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "ATU_%08zu", channel + 1);
  return buf;
}

void write_loudness(std::ostringstream& out, const std::optional<double>& lufs, const char* indent) {
  if (lufs) {
    out << indent << "<loudnessMetadata>\n"
        << indent << "  <integratedLoudness>" << format_number(*lufs) << "</integratedLoudness>\n"
        << indent << "</loudnessMetadata>\n";
  } else {
    out << indent << "<loudnessMetadata status=\"unmeasured\"/>\n";
  }
}

[[noreturn]] void violation(const std::string& path, const std::string& what) {
  throw PackageError(PackageError::Kind::kSchemaViolation, path + ": " + what);
}

// Read-only view of one element with its location for error messages.
struct Element {
  const pt::ptree& tree;
  std::string path;

  std::optional<std::string> attr(const std::string& name) const {
    if (auto attrs = tree.get_child_optional("<xmlattr>"))
      if (auto v = attrs->get_optional<std::string>(name)) return *v;
    return std::nullopt;
  }

  std::string required_attr(const std::string& name) const {
    auto v = attr(name);
    if (!v) violation(path, "missing attribute '" + name + "'");
    return *v;
  }

  void only_attrs(std::initializer_list<const char*> allowed) const {
    if (auto attrs = tree.get_child_optional("<xmlattr>")) {
      for (const auto& [name, _] : *attrs)
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return name == a; }))
          violation(path, "unexpected attribute '" + name + "'");
    }
  }

  std::vector<Element> children(const std::string& name) const {
    std::vector<Element> out;
    for (const auto& [key, child] : tree)
      if (key == name) out.push_back({child, path + "/" + name + "[" + std::to_string(out.size() + 1) + "]"});
    return out;
  }

  // Rejects unknown child elements and enforces [min, max] occurrences.
  void check_children(const std::map<std::string, std::pair<std::size_t, std::size_t>>& rules) const {
    std::map<std::string, std::size_t> counts;
    for (const auto& [key, _] : tree) {
      if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
      if (!rules.contains(key)) violation(path, "unexpected element <" + key + ">");
      ++counts[key];
    }
    for (const auto& [name, range] : rules) {
      const std::size_t n = counts[name];
      if (n < range.first) violation(path, "missing element <" + name + ">");
      if (n > range.second) violation(path, "too many <" + name + "> elements");
    }
  }

  std::string text() const {
    std::string s = tree.data();
    const auto b = s.find_first_not_of(" \t\r\n");
    const auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
};

double parse_double(const std::string& text, PackageError::Kind kind, const std::string& path) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
    throw PackageError(kind, path + ": '" + text + "' is not a number");
  return v;
}

std::size_t parse_index(const std::string& text, const std::string& path) {
  std::size_t v = 0;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, v);
  if (text.empty() || ec != std::errc() || ptr != last) violation(path, "'" + text + "' is not a non-negative integer");
  return v;
}

std::optional<double> parse_loudness(const Element& e) {
  e.only_attrs({"status"});
  if (auto status = e.attr("status")) {
    if (*status != "unmeasured") violation(e.path, "status must be 'unmeasured'");
    e.check_children({});
    return std::nullopt;
  }
  e.check_children({{"integratedLoudness", {1, 1}}});
  const Element value = e.children("integratedLoudness").front();
  return parse_double(value.text(), PackageError::Kind::kLoudnessField, value.path);
}

ObjectRole parse_role(const std::string& text, const std::string& path) {
  if (text == "dialogue") return ObjectRole::kDialogue;
  if (text == "background") return ObjectRole::kBackground;
  violation(path, "role must be 'dialogue' or 'background', got '" + text + "'");
}

}  // namespace

std::string to_string(ObjectRole role) { return role == ObjectRole::kDialogue ? "dialogue" : "background"; }

void GainBounds::validate() const {
  if (!std::isfinite(min_db) || !std::isfinite(max_db) || !(min_db <= 0.0) || !(max_db >= 0.0))
    throw PackageError(PackageError::Kind::kInvalidBounds,
                       "gain bounds [" + format_number(min_db) + ", " + format_number(max_db) +
                           "] dB must bracket 0 dB");
}

const AdmObject& AdmDocument::object(ObjectRole role) const {
  for (const auto& o : objects)
    if (o.role == role) return o;
  throw PackageError(PackageError::Kind::kSchemaViolation, "no audioObject with role '" + to_string(role) + "'");
}

void AdmDocument::validate() const {
  bounds.validate();
  for (ObjectRole role : {ObjectRole::kDialogue, ObjectRole::kBackground}) {
    const auto n = std::count_if(objects.begin(), objects.end(), [&](const AdmObject& o) { return o.role == role; });
    if (n == 0)
      throw PackageError(PackageError::Kind::kSchemaViolation,
                         "missing audioObject with role '" + to_string(role) + "'");
    if (n > 1)
      throw PackageError(PackageError::Kind::kSchemaViolation,
                         "more than one audioObject with role '" + to_string(role) + "'");
  }
  if (objects.size() != 2)
    throw PackageError(PackageError::Kind::kSchemaViolation, "exactly two audioObjects are allowed");
  for (const auto& o : objects) {
    if (o.channels.empty())
      throw PackageError(PackageError::Kind::kSchemaViolation, "audioObject " + o.id + " references no tracks");
    for (std::size_t ch : o.channels)
      if (ch >= audio_channels)
        throw PackageError(PackageError::Kind::kChannelReference,
                           "audioObject " + o.id + " references channel " + std::to_string(ch) +
                               " but the package audio has " + std::to_string(audio_channels) + " channels");
  }
}

std::string to_adm_xml(const AdmDocument& doc) {
  doc.validate();
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
  out << "<" << kRoot << " version=\"" << doc.version << "\">\n";
  out << "  <audioFormatExtended>\n";
  out << "    <audioProgramme audioProgrammeID=\"" << escape(doc.programme_id) << "\" audioProgrammeName=\""
      << escape(doc.programme_name) << "\">\n";
  write_loudness(out, doc.mix_loudness_lufs, "      ");
  for (const auto& o : doc.objects) out << "      <audioObjectIDRef>" << escape(o.id) << "</audioObjectIDRef>\n";
  out << "    </audioProgramme>\n";

  for (const auto& o : doc.objects) {
    out << "    <audioObject audioObjectID=\"" << escape(o.id) << "\" audioObjectName=\"" << escape(o.name)
        << "\" role=\"" << to_string(o.role) << "\">\n";
    if (o.role == ObjectRole::kDialogue) {
      out << "      <audioObjectInteraction onOffInteract=\"0\" gainInteract=\"1\">\n"
          << "        <gainInteractionRange bound=\"min\" unit=\"dB\">" << format_number(doc.bounds.min_db)
          << "</gainInteractionRange>\n"
          << "        <gainInteractionRange bound=\"max\" unit=\"dB\">" << format_number(doc.bounds.max_db)
          << "</gainInteractionRange>\n"
          << "      </audioObjectInteraction>\n";
    }
    write_loudness(out, o.loudness_lufs, "      ");
    for (std::size_t ch : o.channels) out << "      <audioTrackUIDRef>" << track_uid(ch) << "</audioTrackUIDRef>\n";
    out << "    </audioObject>\n";
  }
  std::set<std::size_t> channels;
  for (const auto& o : doc.objects) channels.insert(o.channels.begin(), o.channels.end());
  for (std::size_t ch : channels)
    out << "    <audioTrackUID UID=\"" << track_uid(ch) << "\" channel=\"" << ch << "\"/>\n";
  out << "  </audioFormatExtended>\n";
  out << "  <packageAudio file=\"" << escape(doc.audio_file) << "\" channels=\"" << doc.audio_channels
      << "\" sampleRate=\"" << doc.sample_rate << "\" frames=\"" << doc.frames << "\" sourceMixLength=\""
      << doc.source_mix_length << "\" format=\"float32\"/>\n";
  out << "</" << kRoot << ">\n";
  return out.str();
}

AdmDocument parse_adm_xml(std::string_view xml) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    violation("/", std::string("not well-formed XML: ") + e.what());
  }
  for (const auto& [key, _] : tree)
    if (key != kRoot) violation("/", "unexpected top-level element <" + key + ">");
  auto root_tree = tree.get_child_optional(kRoot);
  if (!root_tree) violation("/", std::string("missing root element <") + kRoot + ">");
  const Element root{*root_tree, std::string("/") + kRoot};

  AdmDocument doc;
  root.only_attrs({"version"});
  const std::string version = root.required_attr("version");
  if (version != std::to_string(kAdmSubsetVersion)) violation(root.path, "unsupported version '" + version + "'");
  root.check_children({{"audioFormatExtended", {1, 1}}, {"packageAudio", {1, 1}}});

  const Element audio = root.children("packageAudio").front();
  audio.only_attrs({"file", "channels", "sampleRate", "frames", "sourceMixLength", "format"});
  audio.check_children({});
  doc.audio_file = audio.required_attr("file");
  doc.audio_channels = parse_index(audio.required_attr("channels"), audio.path + "@channels");
  doc.sample_rate = static_cast<int>(parse_index(audio.required_attr("sampleRate"), audio.path + "@sampleRate"));
  doc.frames = parse_index(audio.required_attr("frames"), audio.path + "@frames");
  doc.source_mix_length = parse_index(audio.required_attr("sourceMixLength"), audio.path + "@sourceMixLength");
  if (audio.required_attr("format") != "float32") violation(audio.path, "format must be 'float32'");

  const Element afe = root.children("audioFormatExtended").front();
  afe.only_attrs({});
  afe.check_children({{"audioProgramme", {1, 1}},
                      {"audioObject", {0, SIZE_MAX}},
                      {"audioTrackUID", {1, SIZE_MAX}}});

  std::map<std::string, std::size_t> tracks;
  for (const auto& t : afe.children("audioTrackUID")) {
    t.only_attrs({"UID", "channel"});
    t.check_children({});
    const std::string uid = t.required_attr("UID");
    if (tracks.contains(uid)) violation(t.path, "duplicate audioTrackUID '" + uid + "'");
    const std::size_t ch = parse_index(t.required_attr("channel"), t.path + "@channel");
    if (ch >= doc.audio_channels)
      throw PackageError(PackageError::Kind::kChannelReference,
                         t.path + ": channel " + std::to_string(ch) + " does not exist in " +
                             std::to_string(doc.audio_channels) + "-channel package audio");
    tracks[uid] = ch;
  }

  const auto objects = afe.children("audioObject");
  bool have_dialogue = false;
  bool have_background = false;
  for (const auto& e : objects) {
    e.only_attrs({"audioObjectID", "audioObjectName", "role"});
    AdmObject o;
    o.id = e.required_attr("audioObjectID");
    o.name = e.required_attr("audioObjectName");
    o.role = parse_role(e.required_attr("role"), e.path);
    bool& seen = o.role == ObjectRole::kDialogue ? have_dialogue : have_background;
    if (seen) violation(e.path, "second audioObject with role '" + to_string(o.role) + "'");
    seen = true;

    const std::size_t interaction = o.role == ObjectRole::kDialogue ? 1 : 0;
    e.check_children({{"audioObjectInteraction", {interaction, interaction}},
                      {"loudnessMetadata", {1, 1}},
                      {"audioTrackUIDRef", {1, SIZE_MAX}}});
    if (interaction) {
      const Element inter = e.children("audioObjectInteraction").front();
      inter.only_attrs({"onOffInteract", "gainInteract"});
      inter.check_children({{"gainInteractionRange", {2, 2}}});
      std::optional<double> lo;
      std::optional<double> hi;
      for (const auto& r : inter.children("gainInteractionRange")) {
        r.only_attrs({"bound", "unit"});
        if (r.required_attr("unit") != "dB") violation(r.path, "unit must be 'dB'");
        const std::string bound = r.required_attr("bound");
        const double v = parse_double(r.text(), PackageError::Kind::kSchemaViolation, r.path);
        if (bound == "min" && !lo) lo = v;
        else if (bound == "max" && !hi) hi = v;
        else violation(r.path, "bound must be one 'min' and one 'max'");
      }
      doc.bounds = {*lo, *hi};
    }
    o.loudness_lufs = parse_loudness(e.children("loudnessMetadata").front());
    for (const auto& ref : e.children("audioTrackUIDRef")) {
      const auto it = tracks.find(ref.text());
      if (it == tracks.end()) violation(ref.path, "unknown audioTrackUID '" + ref.text() + "'");
      o.channels.push_back(it->second);
    }
    doc.objects.push_back(std::move(o));
  }
  if (!have_dialogue) violation(afe.path, "missing audioObject with role 'dialogue'");
  if (!have_background) violation(afe.path, "missing audioObject with role 'background'");

  const Element prog = afe.children("audioProgramme").front();
  prog.only_attrs({"audioProgrammeID", "audioProgrammeName"});
  prog.check_children({{"loudnessMetadata", {1, 1}}, {"audioObjectIDRef", {2, 2}}});
  doc.programme_id = prog.required_attr("audioProgrammeID");
  doc.programme_name = prog.required_attr("audioProgrammeName");
  doc.mix_loudness_lufs = parse_loudness(prog.children("loudnessMetadata").front());
  std::vector<AdmObject> ordered;
  for (const auto& ref : prog.children("audioObjectIDRef")) {
    const auto it = std::find_if(doc.objects.begin(), doc.objects.end(),
                                 [&](const AdmObject& o) { return o.id == ref.text(); });
    if (it == doc.objects.end()) violation(ref.path, "unknown audioObject '" + ref.text() + "'");
    ordered.push_back(*it);
  }
  if (ordered[0].id == ordered[1].id) violation(prog.path, "audioObjectIDRef entries must differ");
  doc.objects = std::move(ordered);

  doc.validate();
  return doc;
}

}  // namespace speechlift
