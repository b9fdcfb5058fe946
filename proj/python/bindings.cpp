#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "plexus/emotion.hpp"
#include "plexus/errors.hpp"
#include "plexus/event_codec.hpp"
#include "plexus/ingest.hpp"
#include "plexus/session.hpp"
#include "plexus/style.hpp"

namespace py = pybind11;
using namespace plexus;

namespace {

py::dict scores_dict(const EmotionScores& s) {
    py::dict d;
    for (auto e : kEmotions) d[py::str(std::string(to_string(e)))] = s[e];
    return d;
}

EmotionScores scores_from(const py::dict& d) {
    EmotionScores s;
    for (auto [k, v] : d) {
        const auto name = k.cast<std::string>();
        const auto e = parse_emotion(name);
        if (!e) throw ValidationError("unknown emotion '" + name + "'");
        s[*e] = v.cast<double>();
    }
    return s;
}

TopicQuery topic(TopicId id, const std::string& phrase, const std::string& lang, bool exclude_retweets) {
    TopicQuery q{id, phrase};
    q.lang = lang;
    q.exclude_retweets = exclude_retweets;
    return q;
}

py::dict style_dict(const ComputedStyle& s) {
    py::dict d;
    d["fill-color"] = s.fill_color.hex();
    d["size"] = s.size;
    d["shape"] = std::string(to_string(s.shape));
    d["icon"] = s.icon ? py::object(py::str(*s.icon)) : py::object(py::none());
    d["stroke-color"] = s.stroke_color.hex();
    d["stroke-width"] = s.stroke_width;
    d["label-visible"] = s.label_visible;
    d["background"] = s.background.hex();
    return d;
}

py::dict stats_dict(const SessionStats& s) {
    py::dict d;
    d["read"] = s.read;
    d["unmatched"] = s.unmatched;
    d["layout_steps"] = s.layout_steps;
    py::list topics;
    for (const auto& t : s.topics) {
        py::dict td;
        td["ingested"] = t.ingested;
        td["zero_score"] = t.zero_score;
        td["duplicates"] = t.duplicates;
        py::dict by;
        for (auto e : kEmotions) by[py::str(std::string(to_string(e)))] = t.by_emotion[index_of(e)];
        td["by_emotion"] = by;
        topics.append(td);
    }
    d["topics"] = topics;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Emotion scoring, topic graph and stylesheet core.";

    // Leaked on purpose: the types must outlive interpreter teardown.
    static auto* base = new py::exception<Error>(m, "PlexusError", PyExc_ValueError);
    static auto* style_error = new py::exception<StyleError>(m, "StyleError", base->ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const StyleError& e) {
            py::object err = py::handle(style_error->ptr())(e.what());
            err.attr("line") = e.line();
            err.attr("column") = e.column();
            PyErr_SetObject(style_error->ptr(), err.ptr());
        } catch (const Error& e) {
            py::set_error(*base, e.what());
        }
    });

    py::class_<Lexicon>(m, "Lexicon")
        .def_readonly("name", &Lexicon::name)
        .def_readonly("version", &Lexicon::version)
        .def("__len__", &Lexicon::size)
        .def_property_readonly("negator_count", &Lexicon::negator_count)
        .def("weights", [](const Lexicon& l, const std::string& token) -> py::object {
            const auto* w = l.find(token);
            if (!w) return py::none();
            EmotionScores s;
            s.values = *w;
            return scores_dict(s);
        });

    m.def("load_lexicon", &load_lexicon, py::arg("content"), py::arg("name") = "", py::arg("version") = "");
    m.def("load_lexicon_file", &load_lexicon_file, py::arg("path"));
    m.def("default_lexicon_path", &default_lexicon_path);
    m.def("default_corpus_path", &default_corpus_path);

    m.def("tokenize", [](const std::string& text) { return tokenize(text); }, py::arg("text"));
    m.def(
        "score_text",
        [](const std::string& text, const Lexicon& lexicon) { return scores_dict(score_text(text, lexicon)); },
        py::arg("text"), py::arg("lexicon"));
    m.def(
        "final_emotion",
        [](const py::dict& scores) { return std::string(to_string(final_emotion(scores_from(scores)))); },
        py::arg("scores"));
    m.def(
        "analyze", [](const std::string& text, const Lexicon& lexicon) { return analyze_json(text, lexicon); },
        py::arg("text"), py::arg("lexicon"));

    m.def(
        "build_query",
        [](const std::string& phrase, const std::string& lang, bool exclude_retweets) {
            return build_query(topic(TopicId::A, phrase, lang, exclude_retweets));
        },
        py::arg("phrase"), py::arg("lang") = "en", py::arg("exclude_retweets") = true);
    m.def(
        "match_topic",
        [](const std::string& text, const std::string& a, const std::string& b) {
            Tweet t;
            t.text = text;
            std::vector<std::string> out;
            for (auto id : match_topic(t, {TopicId::A, a}, {TopicId::B, b}).topics())
                out.emplace_back(to_string(id));
            return out;
        },
        py::arg("text"), py::arg("topic_a"), py::arg("topic_b"));

    m.def(
        "normalize_stylesheet", [](const std::string& css) { return print_stylesheet(parse_stylesheet(css)); },
        py::arg("css"));
    m.def(
        "resolve_style",
        [](const std::string& css, const std::string& element, const std::vector<std::string>& classes,
           bool clicked) {
            const auto kind = parse_element_kind(element);
            if (!kind) throw ValidationError("unknown element '" + element + "'");
            return style_dict(resolve_style(parse_stylesheet(css), *kind, classes, clicked));
        },
        py::arg("css"), py::arg("element"), py::arg("classes") = std::vector<std::string>{},
        py::arg("clicked") = false);
    m.def("default_theme_css", [] { return std::string(default_theme_css()); });

    m.def(
        "run_headless",
        [](const std::string& topic_a, const std::string& topic_b, std::uint64_t seed,
           std::optional<std::filesystem::path> corpus, std::optional<std::filesystem::path> lexicon) {
            SessionConfig c;
            c.topic_a = {TopicId::A, topic_a};
            c.topic_b = {TopicId::B, topic_b};
            c.seed = seed;
            if (corpus) c.corpus = *corpus;
            if (lexicon) c.lexicon = *lexicon;
            HeadlessResult r;
            {
                py::gil_scoped_release release;
                r = run_headless(c);
            }
            py::dict d;
            d["events"] = to_jsonl(r.lines);
            d["snapshot"] = snapshot_to_json(r.snapshot);
            d["stats"] = stats_dict(r.stats);
            d["summary"] = summary_text(c, r.stats, r.snapshot);
            d["ticks"] = r.ticks;
            return d;
        },
        py::arg("topic_a"), py::arg("topic_b"), py::arg("seed") = 0, py::arg("corpus") = py::none(),
        py::arg("lexicon") = py::none());
}
