#include "http_api.hpp"

#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "speechlift/package.hpp"

namespace speechlift::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void send_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", {{"status", status}, {"message", message}}}}.dump(), "application/json");
}

// Strips absolute paths from messages that leave the process.
std::string sanitize(std::string message, const fs::path& root) {
  const std::string prefix = root.string();
  for (std::size_t pos; !prefix.empty() && (pos = message.find(prefix)) != std::string::npos;)
    message.replace(pos, prefix.size(), "<artifacts>");
  return message;
}

json job_json(const Job& job, const fs::path& root) {
  json j{{"id", job.id}, {"state", to_string(job.state)}, {"program", job.request.program}};
  json artifacts = json::object();
  for (const auto& [role, path] : job.artifacts) artifacts[role] = fs::path(path).filename().string();
  j["artifacts"] = artifacts;
  j["error"] = job.state == JobState::kFailed ? json(sanitize(job.error, root)) : json(nullptr);
  return j;
}

Job require_done(const JobStore& store, const std::string& id) {
  const auto job = store.job(id);
  if (!job || job->state != JobState::kDone) throw NotFound("unknown program '" + id + "'");
  return *job;
}

template <typename Handler>
httplib::Server::Handler guarded(const JobStore& store, Handler handler) {
  return [&store, handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const NotFound& e) {
      send_error(res, 404, e.what());
    } catch (const DuplicateJob& e) {
      send_error(res, 409, e.what());
    } catch (const UsageError& e) {
      send_error(res, 422, sanitize(e.what(), store.root()));
    } catch (const std::exception& e) {
      send_error(res, 500, sanitize(e.what(), store.root()));
    }
  };
}

}  // namespace

ProcessRequest request_from_json(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception&) {
    throw UsageError("job spec is not valid JSON");
  }
  if (!j.is_object()) throw UsageError("job spec must be a JSON object");
  static const char* const known[] = {"input", "backend", "checkpoint", "preset", "boost_db", "program",
                                      "bounds_min_db", "bounds_max_db"};
  for (const auto& [key, _] : j.items())
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw UsageError("unknown job field '" + key + "'");
  try {
    ProcessRequest req;
    if (!j.contains("input")) throw UsageError("job spec needs 'input'");
    req.input = j.at("input").get<std::string>();
    if (j.contains("backend")) req.backend = backend_from_string(j.at("backend").get<std::string>());
    if (j.contains("checkpoint")) req.checkpoint = j.at("checkpoint").get<std::string>();
    if (j.contains("preset")) req.preset = j.at("preset").get<std::string>();
    if (j.contains("program")) req.program = j.at("program").get<std::string>();
    if (j.contains("boost_db")) {
      if (j.at("boost_db").is_null())
        req.boost.reset();
      else
        req.boost->gain_db = j.at("boost_db").get<double>();
    }
    if (j.contains("bounds_min_db")) req.bounds.min_db = j.at("bounds_min_db").get<double>();
    if (j.contains("bounds_max_db")) req.bounds.max_db = j.at("bounds_max_db").get<double>();
    return req;
  } catch (const json::exception& e) {
    throw UsageError(std::string("job spec field has the wrong type: ") + e.what());
  }
}

std::string program_metadata_json(const JobStore& store, const std::string& id) {
  require_done(store, id);
  const ParsedPackage pkg = parse_package(store.program_dir(id) / kPackageMetadataName);
  const AdmDocument& doc = pkg.document;
  json presets = json::array();
  for (const auto& p : store.presets().presets())
    presets.push_back({{"name", p.name},
                       {"global_atten_db", p.params.global_atten_db},
                       {"duck_extra_db", p.params.duck_extra_db}});
  json stems = json::object();
  for (const auto& o : doc.objects)
    stems[to_string(o.role)] = {{"id", o.id}, {"name", o.name}, {"loudness_lufs", optional_number(o.loudness_lufs)}};
  const json j{{"id", id},
               {"program", doc.programme_name},
               {"sample_rate", doc.sample_rate},
               {"frames", doc.frames},
               {"loudness",
                {{"mix", optional_number(doc.mix_loudness_lufs)},
                 {"dialogue", optional_number(doc.object(ObjectRole::kDialogue).loudness_lufs)},
                 {"background", optional_number(doc.object(ObjectRole::kBackground).loudness_lufs)}}},
               {"stems", stems},
               {"bounds", {{"dialogue_gain_min_db", doc.bounds.min_db}, {"dialogue_gain_max_db", doc.bounds.max_db}}},
               {"presets", presets}};
  return j.dump();
}

void register_routes(httplib::Server& server, JobStore& store, const std::string& allowed_origin) {
  server.set_default_headers({{"Access-Control-Allow-Origin", allowed_origin},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});

  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Post("/jobs", guarded(store, [&store](const httplib::Request& req, httplib::Response& res) {
                const std::string id = store.submit(request_from_json(req.body));
                res.status = 202;
                res.set_content(json{{"id", id}, {"state", "queued"}}.dump(), "application/json");
              }));

  server.Get(R"(/jobs/([^/]+))", guarded(store, [&store](const httplib::Request& req, httplib::Response& res) {
               const auto job = store.job(req.matches[1]);
               if (!job) throw NotFound("unknown job '" + std::string(req.matches[1]) + "'");
               res.set_content(job_json(*job, store.root()).dump(), "application/json");
             }));

  server.Get("/programs", guarded(store, [&store](const httplib::Request&, httplib::Response& res) {
               json list = json::array();
               for (const auto& id : store.program_ids()) {
                 const Job job = require_done(store, id);
                 list.push_back({{"id", id}, {"program", job.request.program}});
               }
               res.set_content(json{{"programs", list}}.dump(), "application/json");
             }));

  server.Get(R"(/programs/([^/]+)/stems/([^/]+)\.wav)",
             guarded(store, [&store](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               const std::string stem = req.matches[2];
               require_done(store, id);
               if (stem != "dialogue" && stem != "background" && stem != "mix")
                 throw NotFound("unknown stem '" + stem + "'");
               std::ifstream in(store.program_dir(id) / (stem + ".wav"), std::ios::binary);
               if (!in) throw NotFound("stem '" + stem + "' is missing");
               std::ostringstream bytes;
               bytes << in.rdbuf();
               res.set_content(bytes.str(), "audio/wav");
             }));

  server.Get(R"(/programs/([^/]+)/metadata)", guarded(store, [&store](const httplib::Request& req, httplib::Response& res) {
               res.set_content(program_metadata_json(store, req.matches[1]), "application/json");
             }));

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_error(res, res.status, res.status == 404 ? "no such endpoint" : "request failed");
  });
}

}  // namespace speechlift::app
