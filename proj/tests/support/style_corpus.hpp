#pragma once

// Loaders for the committed stylesheet corpus and cascade table.

#include <string>
#include <vector>

#include <json.hpp>

#include "fixtures.hpp"
#include "plexus/errors.hpp"
#include "plexus/style.hpp"

namespace style_corpus {

struct ValidCase {
    std::string file;
    std::size_t rules;
};

struct MalformedCase {
    std::string file;
    std::string kind;  // syntax | unknown-property | value
    std::size_t line;
    std::size_t column;
    std::string detail;  // property name, when annotated
};

struct CascadeCase {
    std::string name;
    std::string css;
    plexus::ElementKind element;
    std::vector<std::string> classes;
    bool clicked;
    plexus::ComputedStyle expect;
};

inline nlohmann::json manifest() {
    return nlohmann::json::parse(fixture::read_file(fixture::data("style/manifest.json")));
}

inline std::vector<ValidCase> valid_cases() {
    const auto m = manifest();
    std::vector<ValidCase> out;
    for (const auto& c : m.at("valid")) out.push_back({c.at("file"), c.at("rules")});
    return out;
}

inline std::vector<MalformedCase> malformed_cases() {
    const auto m = manifest();
    std::vector<MalformedCase> out;
    for (const auto& c : m.at("malformed")) {
        std::string detail = c.value("name", c.value("property", std::string{}));
        out.push_back({c.at("file"), c.at("kind"), c.at("line"), c.at("column"), detail});
    }
    return out;
}

inline std::string css_of(const std::string& relative) {
    return fixture::read_file(fixture::data("style/" + relative));
}

inline plexus::Color color(const nlohmann::json& j) {
    auto c = plexus::Color::parse(j.get<std::string>());
    if (!c) throw std::runtime_error("bad colour in cascade table: " + j.dump());
    return *c;
}

inline plexus::ComputedStyle style_from(const nlohmann::json& defaults, const nlohmann::json& expect) {
    auto merged = defaults;
    for (const auto& [k, v] : expect.items()) merged[k] = v;
    plexus::ComputedStyle s;
    s.fill_color = color(merged.at("fill-color"));
    s.size = merged.at("size").get<double>();
    const auto shape = merged.at("shape").get<std::string>();
    s.shape = shape == "box" ? plexus::Shape::box : shape == "icon" ? plexus::Shape::icon : plexus::Shape::circle;
    if (!merged.at("icon").is_null()) s.icon = merged.at("icon").get<std::string>();
    s.stroke_color = color(merged.at("stroke-color"));
    s.stroke_width = merged.at("stroke-width").get<double>();
    s.label_visible = merged.at("label-visible").get<bool>();
    s.background = color(merged.at("background"));
    return s;
}

inline std::vector<CascadeCase> cascade_cases() {
    const auto j = nlohmann::json::parse(fixture::read_file(fixture::data("style/cascade.json")));
    std::vector<CascadeCase> out;
    for (const auto& c : j.at("cases")) {
        CascadeCase k;
        k.name = c.at("name");
        k.css = c.at("css");
        if (k.css == "@theme") k.css = std::string(plexus::default_theme_css());
        k.element = *plexus::parse_element_kind(c.at("element").get<std::string>());
        k.classes = c.at("classes").get<std::vector<std::string>>();
        k.clicked = c.at("clicked");
        k.expect = style_from(j.at("defaults"), c.at("expect"));
        out.push_back(std::move(k));
    }
    return out;
}

// Parses `css` and compares the failure with the annotation; returns an empty
// string on agreement, otherwise a description of the mismatch.
inline std::string check_malformed(const MalformedCase& c) {
    const auto css = css_of(c.file);
    try {
        plexus::parse_stylesheet(css);
        return "accepted";
    } catch (const plexus::StyleError& e) {
        std::string kind = dynamic_cast<const plexus::StyleSyntaxError*>(&e)      ? "syntax"
                           : dynamic_cast<const plexus::UnknownPropertyError*>(&e) ? "unknown-property"
                           : dynamic_cast<const plexus::StyleValueError*>(&e)      ? "value"
                                                                                    : "other";
        std::string detail;
        if (auto* u = dynamic_cast<const plexus::UnknownPropertyError*>(&e)) detail = u->name();
        if (auto* v = dynamic_cast<const plexus::StyleValueError*>(&e)) detail = v->property();
        if (kind != c.kind || e.line() != c.line || e.column() != c.column ||
            (!c.detail.empty() && detail != c.detail))
            return std::string("got ") + kind + " " + e.what();
        return {};
    }
}

}  // namespace style_corpus
