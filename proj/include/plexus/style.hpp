#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace plexus {

struct GraphNode;

enum class ElementKind : std::uint8_t { graph, node, edge };
enum class PseudoClass : std::uint8_t { clicked };

std::string_view to_string(ElementKind e) noexcept;
std::optional<ElementKind> parse_element_kind(std::string_view s) noexcept;

struct Selector {
    ElementKind element = ElementKind::node;
    std::vector<std::string> classes;  // sorted, unique; each matches [a-z][a-z0-9-]*
    std::optional<PseudoClass> pseudo;

    friend bool operator==(const Selector&, const Selector&) = default;
};

enum class Property : std::uint8_t {
    fill_color,
    size,
    shape,
    icon,
    stroke_color,
    stroke_width,
    label_visible,
    background,
};

std::string_view to_string(Property p) noexcept;
std::optional<Property> parse_property(std::string_view s) noexcept;

struct Color {
    std::uint32_t rgb = 0;  // 0xRRGGBB
    std::string hex() const;  // "#RRGGBB", upper case
    static std::optional<Color> parse(std::string_view text);
    friend bool operator==(const Color&, const Color&) = default;
};

struct Pixels {
    double value = 0.0;
    friend bool operator==(const Pixels&, const Pixels&) = default;
};

enum class Shape : std::uint8_t { circle, box, icon };
std::string_view to_string(Shape s) noexcept;

// Empty name means "no icon" (written `none`).
struct IconName {
    std::string name;
    friend bool operator==(const IconName&, const IconName&) = default;
};

using PropertyValue = std::variant<Color, Pixels, Shape, IconName, bool>;

struct Declaration {
    Property property = Property::fill_color;
    PropertyValue value;
    friend bool operator==(const Declaration&, const Declaration&) = default;
};

struct StyleRule {
    Selector selector;
    std::vector<Declaration> declarations;  // one per property; last one parsed wins
    std::size_t source_order = 0;
    friend bool operator==(const StyleRule&, const StyleRule&) = default;
};

struct ComputedStyle {
    Color fill_color{0xADB5BD};
    double size = 10.0;
    Shape shape = Shape::circle;
    std::optional<std::string> icon;
    Color stroke_color{0x495057};
    double stroke_width = 1.0;
    bool label_visible = false;
    Color background{0xFFFFFF};

    friend bool operator==(const ComputedStyle&, const ComputedStyle&) = default;
};

// Grammar: rule* where rule = element('.'class)*[':'pseudo] '{' (prop ':' value ';'?)* '}'
// and /* comments */ may appear between tokens. All-or-nothing: throws
// StyleSyntaxError, UnknownPropertyError or StyleValueError, each carrying
// a 1-based line and column.
std::vector<StyleRule> parse_stylesheet(std::string_view text);

// Canonical serialization; parse_stylesheet(print_stylesheet(r)) == r.
std::string print_stylesheet(const std::vector<StyleRule>& rules);

// Cascade: defaults, then every matching rule in ascending
// (pseudo matched, class count, source order).
ComputedStyle resolve_style(const std::vector<StyleRule>& rules, ElementKind element,
                            const std::vector<std::string>& classes, bool clicked);

// Style classes of a graph node: its own classes plus its kind name
// ("topic", "emotion", "tweet").
std::vector<std::string> style_classes(const GraphNode& node);
ComputedStyle resolve_node_style(const std::vector<StyleRule>& rules, const GraphNode& node,
                                 bool clicked);

// The bundled theme source and its parsed form.
std::string_view default_theme_css() noexcept;
std::vector<StyleRule> default_theme();

}  // namespace plexus
