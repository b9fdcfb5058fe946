#include "plexus/style.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <tuple>

#include "plexus/errors.hpp"
#include "plexus/graph.hpp"

namespace plexus {

namespace {

constexpr std::array<std::string_view, 8> kPropertyNames = {
    "fill-color", "size", "shape", "icon", "stroke-color", "stroke-width", "label-visible", "background"};

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_lower(c) || is_digit(c) || c == '-'; }

bool valid_icon_name(std::string_view s) {
    if (s.empty() || !(is_lower(s[0]) || is_digit(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return is_ident_char(c) || c == '_'; });
}

std::string format_number(double v) {
    char buf[400];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    return std::string(buf, ptr);
}

std::optional<double> parse_pixels(std::string_view s) {
    if (s.size() < 3 || s.substr(s.size() - 2) != "px") return std::nullopt;
    const auto number = s.substr(0, s.size() - 2);
    // Plain decimal only: digits with an optional fraction.
    const auto dot = number.find('.');
    const auto int_part = number.substr(0, dot);
    if (int_part.empty() || !std::all_of(int_part.begin(), int_part.end(), is_digit)) return std::nullopt;
    if (dot != std::string_view::npos) {
        const auto frac = number.substr(dot + 1);
        if (frac.empty() || !std::all_of(frac.begin(), frac.end(), is_digit)) return std::nullopt;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), v);
    if (ec != std::errc{} || ptr != number.data() + number.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    std::vector<StyleRule> run() {
        std::vector<StyleRule> rules;
        skip_blank();
        while (!at_end()) {
            rules.push_back(rule(rules.size()));
            skip_blank();
        }
        return rules;
    }

private:
    struct Position {
        std::size_t line;
        std::size_t column;
    };

    Position position_of(std::size_t offset) const {
        Position p{1, 1};
        for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++p.line;
                p.column = 1;
            } else if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) {
                ++p.column;
            }
        }
        return p;
    }

    [[noreturn]] void syntax(std::size_t offset, std::string expected) const {
        const auto p = position_of(offset);
        throw StyleSyntaxError(p.line, p.column, std::move(expected));
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_blank() {
        for (;;) {
            while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r' ||
                                 peek() == '\f'))
                ++pos_;
            if (text_.substr(pos_, 2) == "/*") {
                const auto close = text_.find("*/", pos_ + 2);
                if (close == std::string_view::npos) syntax(pos_, "'*/' closing the comment");
                pos_ = close + 2;
                continue;
            }
            return;
        }
    }

    // [a-z][a-z0-9-]*
    std::string_view ident(const char* expected) {
        const auto start = pos_;
        if (!is_lower(peek())) syntax(pos_, expected);
        while (!at_end() && is_ident_char(peek())) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    StyleRule rule(std::size_t order) {
        StyleRule r;
        r.source_order = order;
        r.selector = selector();
        skip_blank();
        if (peek() != '{') syntax(pos_, "'{'");
        ++pos_;
        declarations(r);
        return r;
    }

    Selector selector() {
        Selector s;
        const auto start = pos_;
        const auto name = ident("element name (graph, node or edge)");
        const auto element = parse_element_kind(name);
        if (!element) syntax(start, "element name (graph, node or edge)");
        s.element = *element;
        while (peek() == '.') {
            ++pos_;
            s.classes.emplace_back(ident("class name"));
        }
        if (peek() == ':') {
            ++pos_;
            const auto at = pos_;
            if (ident("pseudo-class 'clicked'") != "clicked") syntax(at, "pseudo-class 'clicked'");
            s.pseudo = PseudoClass::clicked;
        }
        std::sort(s.classes.begin(), s.classes.end());
        s.classes.erase(std::unique(s.classes.begin(), s.classes.end()), s.classes.end());
        return s;
    }

    void declarations(StyleRule& r) {
        for (;;) {
            skip_blank();
            if (at_end()) syntax(pos_, "'}'");
            if (peek() == '}') {
                ++pos_;
                return;
            }
            const auto name_at = pos_;
            const auto name = ident("property name or '}'");
            skip_blank();
            if (peek() != ':') syntax(pos_, "':'");
            ++pos_;
            skip_blank();

            const auto value_at = pos_;
            while (!at_end() && peek() != ';' && peek() != '}' && peek() != '\n' &&
                   text_.substr(pos_, 2) != "/*")
                ++pos_;
            auto raw = text_.substr(value_at, pos_ - value_at);
            while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t' || raw.back() == '\r'))
                raw.remove_suffix(1);
            if (raw.empty()) syntax(value_at, "value");
            skip_blank();
            if (peek() == ';')
                ++pos_;
            else if (peek() != '}')
                syntax(pos_, "';' or '}'");

            const auto property = parse_property(name);
            if (!property) {
                const auto p = position_of(name_at);
                throw UnknownPropertyError(p.line, p.column, std::string(name));
            }
            Declaration d{*property, value(*property, r.selector, raw, value_at)};
            auto& decls = r.declarations;
            decls.erase(std::remove_if(decls.begin(), decls.end(),
                                       [&](const Declaration& x) { return x.property == d.property; }),
                        decls.end());
            decls.push_back(std::move(d));
        }
    }

    [[noreturn]] void bad_value(std::size_t at, Property p, const std::string& what) const {
        const auto pos = position_of(at);
        throw StyleValueError(pos.line, pos.column, std::string(to_string(p)), what);
    }

    PropertyValue value(Property p, const Selector& selector, std::string_view raw, std::size_t at) const {
        switch (p) {
            case Property::background:
                if (selector.element != ElementKind::graph)
                    bad_value(at, p, "background applies to the graph element only");
                [[fallthrough]];
            case Property::fill_color:
            case Property::stroke_color: {
                auto c = Color::parse(raw);
                if (!c) bad_value(at, p, "expected #RRGGBB");
                return *c;
            }
            case Property::size:
            case Property::stroke_width: {
                auto v = parse_pixels(raw);
                if (!v) bad_value(at, p, "expected <number>px");
                return Pixels{*v};
            }
            case Property::shape:
                if (raw == "circle") return Shape::circle;
                if (raw == "box") return Shape::box;
                if (raw == "icon") return Shape::icon;
                bad_value(at, p, "expected circle, box or icon");
            case Property::icon:
                if (raw == "none") return IconName{};
                if (!valid_icon_name(raw)) bad_value(at, p, "expected an icon name or none");
                return IconName{std::string(raw)};
            case Property::label_visible:
                if (raw == "true") return true;
                if (raw == "false") return false;
                bad_value(at, p, "expected true or false");
        }
        bad_value(at, p, "unsupported property");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string value_text(const PropertyValue& v) {
    struct {
        std::string operator()(const Color& c) const { return c.hex(); }
        std::string operator()(const Pixels& p) const { return format_number(p.value) + "px"; }
        std::string operator()(Shape s) const { return std::string(to_string(s)); }
        std::string operator()(const IconName& i) const { return i.name.empty() ? "none" : i.name; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    } visitor;
    return std::visit(visitor, v);
}

void apply(ComputedStyle& style, const Declaration& d) {
    switch (d.property) {
        case Property::fill_color: style.fill_color = std::get<Color>(d.value); break;
        case Property::size: style.size = std::get<Pixels>(d.value).value; break;
        case Property::shape: style.shape = std::get<Shape>(d.value); break;
        case Property::icon: {
            const auto& name = std::get<IconName>(d.value).name;
            style.icon = name.empty() ? std::nullopt : std::optional<std::string>(name);
            break;
        }
        case Property::stroke_color: style.stroke_color = std::get<Color>(d.value); break;
        case Property::stroke_width: style.stroke_width = std::get<Pixels>(d.value).value; break;
        case Property::label_visible: style.label_visible = std::get<bool>(d.value); break;
        case Property::background: style.background = std::get<Color>(d.value); break;
    }
}

bool matches(const Selector& s, ElementKind element, const std::vector<std::string>& classes,
             bool clicked) {
    if (s.element != element) return false;
    if (s.pseudo && !clicked) return false;
    return std::all_of(s.classes.begin(), s.classes.end(), [&](const std::string& c) {
        return std::find(classes.begin(), classes.end(), c) != classes.end();
    });
}

constexpr std::string_view kDefaultTheme = R"css(/* Plexus default theme: one colour per emotion mode. */
graph { background: #FAFAF7; }

node {
  fill-color: #ADB5BD;
  size: 8px;
  shape: circle;
  stroke-color: #495057;
  stroke-width: 1px;
  label-visible: false;
}

node.topic {
  shape: box;
  size: 64px;
  fill-color: #F1F3F5;
  stroke-color: #212529;
  stroke-width: 2px;
  label-visible: true;
}

node.emotion { shape: icon; size: 40px; }
node.tweet { shape: circle; size: 8px; }

node.joy { fill-color: #FFD700; }
node.anger { fill-color: #E03131; }
node.fear { fill-color: #7048E8; }
node.disgust { fill-color: #2F9E44; }
node.sadness { fill-color: #1971C2; }

node.emotion.joy { icon: emoji-joy; }
node.emotion.anger { icon: emoji-anger; }
node.emotion.fear { icon: emoji-fear; }
node.emotion.disgust { icon: emoji-disgust; }
node.emotion.sadness { icon: emoji-sadness; }

node:clicked { stroke-color: #000000; stroke-width: 4px; label-visible: true; }

edge { fill-color: #CED4DA; size: 1px; }
)css";

}  // namespace

std::string_view to_string(ElementKind e) noexcept {
    switch (e) {
        case ElementKind::graph: return "graph";
        case ElementKind::node: return "node";
        case ElementKind::edge: return "edge";
    }
    return "node";
}

std::optional<ElementKind> parse_element_kind(std::string_view s) noexcept {
    if (s == "graph") return ElementKind::graph;
    if (s == "node") return ElementKind::node;
    if (s == "edge") return ElementKind::edge;
    return std::nullopt;
}

std::string_view to_string(Property p) noexcept { return kPropertyNames[static_cast<std::size_t>(p)]; }

std::optional<Property> parse_property(std::string_view s) noexcept {
    for (std::size_t i = 0; i < kPropertyNames.size(); ++i)
        if (kPropertyNames[i] == s) return static_cast<Property>(i);
    return std::nullopt;
}

std::string_view to_string(Shape s) noexcept {
    switch (s) {
        case Shape::circle: return "circle";
        case Shape::box: return "box";
        case Shape::icon: return "icon";
    }
    return "circle";
}

std::string Color::hex() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%06X", static_cast<unsigned>(rgb & 0xFFFFFF));
    return buf;
}

std::optional<Color> Color::parse(std::string_view text) {
    if (text.size() != 7 || text[0] != '#') return std::nullopt;
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + 1, text.data() + 7, v, 16);
    if (ec != std::errc{} || ptr != text.data() + 7) return std::nullopt;
    return Color{v};
}

std::vector<StyleRule> parse_stylesheet(std::string_view text) { return Parser(text).run(); }

std::string print_stylesheet(const std::vector<StyleRule>& rules) {
    std::string out;
    for (const auto& r : rules) {
        out += to_string(r.selector.element);
        for (const auto& c : r.selector.classes) out += "." + c;
        if (r.selector.pseudo) out += ":clicked";
        out += " {\n";
        for (const auto& d : r.declarations)
            out += "  " + std::string(to_string(d.property)) + ": " + value_text(d.value) + ";\n";
        out += "}\n";
    }
    return out;
}

ComputedStyle resolve_style(const std::vector<StyleRule>& rules, ElementKind element,
                            const std::vector<std::string>& classes, bool clicked) {
    std::vector<const StyleRule*> matching;
    for (const auto& r : rules)
        if (matches(r.selector, element, classes, clicked)) matching.push_back(&r);

    auto key = [](const StyleRule* r) {
        return std::tuple(r->selector.pseudo.has_value() ? 1 : 0, r->selector.classes.size(),
                          r->source_order);
    };
    std::stable_sort(matching.begin(), matching.end(),
                     [&](const StyleRule* a, const StyleRule* b) { return key(a) < key(b); });

    ComputedStyle style;
    for (const auto* r : matching)
        for (const auto& d : r->declarations) apply(style, d);
    return style;
}

std::vector<std::string> style_classes(const GraphNode& node) {
    auto classes = node.classes;
    const std::string kind(to_string(node.kind));
    if (std::find(classes.begin(), classes.end(), kind) == classes.end()) classes.push_back(kind);
    return classes;
}

ComputedStyle resolve_node_style(const std::vector<StyleRule>& rules, const GraphNode& node,
                                 bool clicked) {
    return resolve_style(rules, ElementKind::node, style_classes(node), clicked);
}

std::string_view default_theme_css() noexcept { return kDefaultTheme; }

std::vector<StyleRule> default_theme() { return parse_stylesheet(kDefaultTheme); }

}  // namespace plexus
