#pragma once

#include <string>

#include "job_store.hpp"

namespace httplib {
class Server;
}

namespace speechlift::app {

// POST /jobs                                   submit; 202 {"id", "state"}
// GET  /jobs/{id}                              state, artifacts, error
// GET  /programs                               finished programs
// GET  /programs/{id}/stems/{name}.wav         name in dialogue | background | mix
// GET  /programs/{id}/metadata                 loudness per stem, bounds, presets
//
// Errors are JSON {"error": {"status", "message"}}: 404 unknown id, 409
// duplicate submission, 422 invalid job spec, 500 otherwise. Every response
// carries CORS headers for allowed_origin.
void register_routes(httplib::Server& server, JobStore& store, const std::string& allowed_origin = "*");

// Parses a POST /jobs body. Throws UsageError.
ProcessRequest request_from_json(const std::string& body);

// JSON for the metadata endpoint, built from the program's ADM sidecar and
// the preset registry.
std::string program_metadata_json(const JobStore& store, const std::string& id);

}  // namespace speechlift::app
