#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <cctype>

#include "plexus/errors.hpp"
#include "plexus/ingest.hpp"

namespace plexus {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

HttpTransport make_http_transport() {
    return [](const HttpRequest& request) {
        // Split "scheme://host[:port]/path" into the client origin and path.
        const auto scheme_end = request.url.find("://");
        if (scheme_end == std::string::npos) throw ProtocolError("bad URL: " + request.url);
        const auto path_start = request.url.find('/', scheme_end + 3);
        const auto origin = request.url.substr(0, path_start);
        const auto path = path_start == std::string::npos ? std::string("/")
                                                          : request.url.substr(path_start);

        httplib::Client client(origin);
        client.set_connection_timeout(10);
        client.set_read_timeout(30);

        httplib::Params params;
        for (const auto& [k, v] : request.params) params.emplace(k, v);
        httplib::Headers headers;
        for (const auto& [k, v] : request.headers) headers.emplace(k, v);

        auto result = client.Get(path, params, headers);
        if (!result)
            throw ProtocolError("request to " + origin + " failed: " + httplib::to_string(result.error()));

        HttpResponse response;
        response.status = result->status;
        response.body = result->body;
        for (const auto& [k, v] : result->headers) response.headers[lower(k)] = v;
        return response;
    };
}

}  // namespace plexus
